// Copyright 2026 The qcontext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcontext/error.hpp"
#include "qcontext/zmod.hpp"

namespace qcontext {

/// A point (p1, q1, ..., pn, qn) of the phase space Z_d^{2n}.
class PhasePoint {
   public:
    PhasePoint(Modulus m, std::vector<Residue> coords) : m_(m), coords_(std::move(coords)) {
        if (coords_.empty() || coords_.size() % 2 != 0) {
            throw Error(ErrorKind::DimensionMismatch, "phase points need 2n coordinates");
        }
        for (auto &c : coords_) {
            c = m_.reduce(c);
        }
    }

    static PhasePoint zero(Modulus m, std::size_t n) {
        return PhasePoint(m, std::vector<Residue>(2 * n, 0));
    }

    const Modulus &modulus() const noexcept {
        return m_;
    }
    std::size_t particles() const noexcept {
        return coords_.size() / 2;
    }
    const std::vector<Residue> &coords() const noexcept {
        return coords_;
    }
    Residue operator[](std::size_t i) const {
        return coords_[i];
    }
    Residue p(std::size_t particle) const {
        return coords_[2 * particle];
    }
    Residue q(std::size_t particle) const {
        return coords_[2 * particle + 1];
    }
    bool is_zero() const {
        for (Residue c : coords_) {
            if (c != 0) {
                return false;
            }
        }
        return true;
    }

    void check_same_space(const PhasePoint &o) const {
        if (!(o.m_ == m_) || o.coords_.size() != coords_.size()) {
            throw Error(ErrorKind::DimensionMismatch, "phase points from different spaces");
        }
    }

    friend PhasePoint operator+(const PhasePoint &a, const PhasePoint &b) {
        a.check_same_space(b);
        std::vector<Residue> out(a.coords_.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = a.coords_[i] + b.coords_[i];
        }
        return PhasePoint(a.m_, std::move(out));
    }
    friend PhasePoint operator-(const PhasePoint &a) {
        std::vector<Residue> out(a.coords_.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = -a.coords_[i];
        }
        return PhasePoint(a.m_, std::move(out));
    }
    friend PhasePoint operator*(std::int64_t s, const PhasePoint &a) {
        std::vector<Residue> out(a.coords_.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = a.m_.mul(a.m_.reduce(s), a.coords_[i]);
        }
        return PhasePoint(a.m_, std::move(out));
    }
    friend bool operator==(const PhasePoint &a, const PhasePoint &b) {
        return a.m_ == b.m_ && a.coords_ == b.coords_;
    }
    friend bool operator<(const PhasePoint &a, const PhasePoint &b) {
        return a.coords_ < b.coords_;
    }

   private:
    Modulus m_;
    std::vector<Residue> coords_;
};

inline std::string to_string(const PhasePoint &v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.coords().size(); ++i) {
        if (i) {
            s += ",";
        }
        s += std::to_string(v[i]);
    }
    return s + ")";
}

/// [v, w] = sum_i p_i q'_i - p'_i q_i.
inline Residue symplectic_product(const PhasePoint &v, const PhasePoint &w) {
    v.check_same_space(w);
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < v.particles(); ++i) {
        acc += v.p(i) * w.q(i) - w.p(i) * v.q(i);
    }
    return v.modulus().reduce(acc);
}

/// omega^{phase_exp} W(point), where W(p,q) = omega^{-2^{-1} p q} Z(p) X(q).
///
/// For odd d every Pauli-group phase omega^{2^{-1} m}, m in Z_{2d}, is a d-th
/// root of unity, so one exponent in Z_d covers the whole group.
struct WeylOperator {
    PhasePoint point;
    Residue phase_exp = 0;

    explicit WeylOperator(PhasePoint v, Residue phase = 0)
        : point(std::move(v)), phase_exp(point.modulus().reduce(phase)) {
    }

    friend bool operator==(const WeylOperator &a, const WeylOperator &b) {
        return a.point == b.point && a.phase_exp == b.phase_exp;
    }
};

/// W(u) W(v) = omega^{2^{-1}[u,v]} W(u + v).
inline WeylOperator compose(const WeylOperator &u, const WeylOperator &v) {
    const Modulus &m = u.point.modulus();
    Residue cross = m.mul(m.half(), symplectic_product(u.point, v.point));
    return WeylOperator(u.point + v.point, u.phase_exp + v.phase_exp + cross);
}

inline bool commutes(const PhasePoint &u, const PhasePoint &v) {
    return symplectic_product(u, v) == 0;
}

inline bool commutes(const WeylOperator &u, const WeylOperator &v) {
    return commutes(u.point, v.point);
}

/// Reduced row echelon form of the span of `rows`; zero rows are dropped and
/// rows come out ordered by pivot column.
inline std::vector<PhasePoint> row_reduce(const std::vector<PhasePoint> &rows) {
    if (rows.empty()) {
        return {};
    }
    const Modulus m = rows.front().modulus();
    const std::size_t width = rows.front().coords().size();
    std::vector<std::vector<Residue>> mat;
    for (const auto &r : rows) {
        rows.front().check_same_space(r);
        mat.push_back(r.coords());
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < width && rank < mat.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < mat.size() && mat[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == mat.size()) {
            continue;
        }
        std::swap(mat[rank], mat[pivot]);
        Residue scale = m.inv(mat[rank][col]);
        for (auto &x : mat[rank]) {
            x = m.mul(x, scale);
        }
        for (std::size_t r = 0; r < mat.size(); ++r) {
            if (r == rank || mat[r][col] == 0) {
                continue;
            }
            Residue f = mat[r][col];
            for (std::size_t c = 0; c < width; ++c) {
                mat[r][c] = m.sub(mat[r][c], m.mul(f, mat[rank][c]));
            }
        }
        ++rank;
    }
    std::vector<PhasePoint> out;
    for (std::size_t r = 0; r < rank; ++r) {
        out.emplace_back(m, mat[r]);
    }
    return out;
}

/// A measurement context: a maximal isotropic subspace of Z_d^{2n}.
///
/// `generators()` is the basis the context was built from; joint outcomes are
/// expressed on it. `canonical_basis()` is the reduced echelon basis and is
/// the identity of the subspace. Elements are cached in the order of their
/// coefficient vectors c (c_0 most significant), element = sum_i c_i g_i.
class Context {
   public:
    Context(std::vector<PhasePoint> generators, std::string label = {})
        : m_(generators.empty() ? throw Error(ErrorKind::DimensionMismatch, "empty context")
                                : generators.front().modulus()),
          n_(generators.front().particles()),
          generators_(std::move(generators)),
          label_(std::move(label)) {
        if (generators_.size() != n_) {
            throw Error(ErrorKind::DimensionMismatch, "a context in Z_d^{2n} needs n generators");
        }
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t b = a + 1; b < n_; ++b) {
                if (!commutes(generators_[a], generators_[b])) {
                    throw Error(ErrorKind::NonCommuting,
                                to_string(generators_[a]) + " and " + to_string(generators_[b]) + " do not commute");
                }
            }
        }
        canonical_ = row_reduce(generators_);
        if (canonical_.size() != n_) {
            throw Error(ErrorKind::DimensionMismatch, "context generators are linearly dependent");
        }
        if (label_.empty()) {
            label_ = "span:";
            for (std::size_t i = 0; i < n_; ++i) {
                label_ += (i ? "," : "") + to_string(canonical_[i]);
            }
        }
        const std::int64_t d = m_.value();
        std::size_t count = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            count *= static_cast<std::size_t>(d);
        }
        elements_.reserve(count);
        std::vector<Residue> c(n_, 0);
        for (std::size_t idx = 0; idx < count; ++idx) {
            PhasePoint v = PhasePoint::zero(m_, n_);
            for (std::size_t i = 0; i < n_; ++i) {
                if (c[i] != 0) {
                    v = v + c[i] * generators_[i];
                }
            }
            elements_.push_back(std::move(v));
            for (std::size_t i = n_; i-- > 0;) {
                if (++c[i] < d) {
                    break;
                }
                c[i] = 0;
            }
        }
    }

    const Modulus &modulus() const noexcept {
        return m_;
    }
    std::size_t particles() const noexcept {
        return n_;
    }
    const std::vector<PhasePoint> &generators() const noexcept {
        return generators_;
    }
    const std::vector<PhasePoint> &canonical_basis() const noexcept {
        return canonical_;
    }
    const std::vector<PhasePoint> &elements() const noexcept {
        return elements_;
    }
    const std::string &label() const noexcept {
        return label_;
    }

    /// Coefficients of `v` on the generators, when v lies in the subspace.
    std::optional<std::vector<Residue>> coordinates_of(const PhasePoint &v) const {
        for (std::size_t idx = 0; idx < elements_.size(); ++idx) {
            if (elements_[idx] == v) {
                return coefficient_vector(idx);
            }
        }
        return std::nullopt;
    }

    std::vector<Residue> coefficient_vector(std::size_t element_index) const {
        std::vector<Residue> c(n_);
        const auto d = static_cast<std::size_t>(m_.value());
        for (std::size_t i = n_; i-- > 0;) {
            c[i] = static_cast<Residue>(element_index % d);
            element_index /= d;
        }
        return c;
    }

    bool contains(const PhasePoint &v) const {
        return coordinates_of(v).has_value();
    }

    bool same_subspace(const Context &o) const {
        return m_ == o.m_ && canonical_ == o.canonical_;
    }

   private:
    Modulus m_;
    std::size_t n_;
    std::vector<PhasePoint> generators_;
    std::vector<PhasePoint> canonical_;
    std::vector<PhasePoint> elements_;
    std::string label_;
};

/// Every maximal isotropic subspace of Z_d^{2n}, once each, for n in {1, 2}.
///
/// Walks reduced echelon forms directly: for each choice of pivot columns the
/// entries to the right of each pivot (outside pivot columns) range over Z_d.
inline std::vector<Context> enumerate_contexts(Modulus m, std::size_t n) {
    if (n < 1 || n > 2) {
        throw Error(ErrorKind::Unsupported, "context enumeration is implemented for n = 1, 2");
    }
    const std::size_t width = 2 * n;
    const std::int64_t d = m.value();
    std::vector<Context> out;
    std::vector<std::size_t> pivots(n);
    for (std::size_t i = 0; i < n; ++i) {
        pivots[i] = i;
    }
    while (true) {
        std::vector<std::pair<std::size_t, std::size_t>> free_cells;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = pivots[r] + 1; c < width; ++c) {
                bool is_pivot = false;
                for (std::size_t pc : pivots) {
                    is_pivot |= pc == c;
                }
                if (!is_pivot) {
                    free_cells.emplace_back(r, c);
                }
            }
        }
        std::int64_t fillings = 1;
        for (std::size_t f = 0; f < free_cells.size(); ++f) {
            fillings *= d;
        }
        for (std::int64_t idx = 0; idx < fillings; ++idx) {
            std::vector<std::vector<Residue>> rows(n, std::vector<Residue>(width, 0));
            for (std::size_t r = 0; r < n; ++r) {
                rows[r][pivots[r]] = 1;
            }
            std::int64_t rest = idx;
            for (std::size_t f = free_cells.size(); f-- > 0;) {
                rows[free_cells[f].first][free_cells[f].second] = rest % d;
                rest /= d;
            }
            std::vector<PhasePoint> basis;
            for (auto &r : rows) {
                basis.emplace_back(m, r);
            }
            bool isotropic = true;
            for (std::size_t a = 0; a < n && isotropic; ++a) {
                for (std::size_t b = a + 1; b < n && isotropic; ++b) {
                    isotropic = commutes(basis[a], basis[b]);
                }
            }
            if (isotropic) {
                out.emplace_back(std::move(basis));
            }
        }
        // Next pivot combination in lexicographic order.
        std::size_t i = n;
        while (i > 0 && pivots[i - 1] == width - n + (i - 1)) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++pivots[i - 1];
        for (std::size_t k = i; k < n; ++k) {
            pivots[k] = pivots[k - 1] + 1;
        }
    }
    return out;
}

enum class Table1Family { I, II, III };

/// The two-qudit context families
///   I_a      : (1,0,0,0), (0,0,a,1)
///   II_a     : (0,0,1,0), (a,1,0,0)
///   III_{a,b}: (1,0,b,0), (0,1,a,-b^{-1}),  b != 0
/// ordered I (a ascending), II (a ascending), III (a, then b ascending).
/// Operator phases are taken to be zero.
inline std::vector<Context> table1_contexts(Modulus m) {
    const std::int64_t d = m.value();
    std::vector<Context> out;
    out.reserve(static_cast<std::size_t>(d * (d + 1)));
    for (Residue a = 0; a < d; ++a) {
        out.emplace_back(std::vector<PhasePoint>{PhasePoint(m, {1, 0, 0, 0}), PhasePoint(m, {0, 0, a, 1})},
                         "I:alpha=" + std::to_string(a));
    }
    for (Residue a = 0; a < d; ++a) {
        out.emplace_back(std::vector<PhasePoint>{PhasePoint(m, {0, 0, 1, 0}), PhasePoint(m, {a, 1, 0, 0})},
                         "II:alpha=" + std::to_string(a));
    }
    for (Residue a = 0; a < d; ++a) {
        for (Residue b = 1; b < d; ++b) {
            out.emplace_back(
                std::vector<PhasePoint>{PhasePoint(m, {1, 0, b, 0}), PhasePoint(m, {0, 1, a, m.neg(m.inv(b))})},
                "III:alpha=" + std::to_string(a) + ",beta=" + std::to_string(b));
        }
    }
    return out;
}

/// Position of a Table 1 context in `table1_contexts` order.
inline std::size_t table1_index(Modulus m, Table1Family family, Residue alpha, Residue beta = 1) {
    const auto d = static_cast<std::size_t>(m.value());
    const auto a = static_cast<std::size_t>(m.reduce(alpha));
    switch (family) {
        case Table1Family::I: return a;
        case Table1Family::II: return d + a;
        case Table1Family::III: {
            const auto b = static_cast<std::size_t>(m.reduce(beta));
            if (b == 0) {
                throw Error(ErrorKind::Unsupported, "type III contexts need beta != 0");
            }
            return 2 * d + a * (d - 1) + (b - 1);
        }
    }
    return 0;
}

}  // namespace qcontext
