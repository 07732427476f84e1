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

// Floating-point reference implementations. Nothing here participates in
// exact (im)possibility decisions; these routines exist to cross-check the
// exact paths and to report advisory probabilities.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qcontext/error.hpp"
#include "qcontext/phase_space.hpp"
#include "qcontext/poly.hpp"
#include "qcontext/zmod.hpp"

namespace qcontext::dense {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

inline constexpr double kTolerance = 1e-9;

inline Complex omega_power(const Modulus &m, std::int64_t e) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(m.reduce(e)) / static_cast<double>(m.value());
    return std::polar(1.0, angle);
}

/// A matrix with exactly one nonzero entry per column: column c holds
/// `value[c]` in row `row[c]`. Weyl operators, diagonal gates, and all their
/// products and conjugates have this shape.
struct MonomialMatrix {
    std::vector<std::size_t> row;
    std::vector<Complex> value;

    std::size_t dim() const {
        return row.size();
    }

    static MonomialMatrix identity(std::size_t dim) {
        MonomialMatrix m;
        m.row.resize(dim);
        m.value.assign(dim, Complex(1.0, 0.0));
        for (std::size_t c = 0; c < dim; ++c) {
            m.row[c] = c;
        }
        return m;
    }

    static MonomialMatrix diagonal(const Vector &entries) {
        MonomialMatrix m = identity(entries.size());
        m.value = entries;
        return m;
    }

    friend MonomialMatrix operator*(const MonomialMatrix &a, const MonomialMatrix &b) {
        MonomialMatrix r;
        r.row.resize(b.dim());
        r.value.resize(b.dim());
        for (std::size_t c = 0; c < b.dim(); ++c) {
            const std::size_t mid = b.row[c];
            r.row[c] = a.row[mid];
            r.value[c] = a.value[mid] * b.value[c];
        }
        return r;
    }

    friend MonomialMatrix operator*(Complex s, MonomialMatrix a) {
        for (auto &v : a.value) {
            v *= s;
        }
        return a;
    }

    MonomialMatrix adjoint() const {
        MonomialMatrix r;
        r.row.resize(dim());
        r.value.resize(dim());
        for (std::size_t c = 0; c < dim(); ++c) {
            r.row[row[c]] = c;
            r.value[row[c]] = std::conj(value[c]);
        }
        return r;
    }

    Vector apply(const Vector &v) const {
        Vector out(dim(), Complex(0.0, 0.0));
        for (std::size_t c = 0; c < dim(); ++c) {
            out[row[c]] += value[c] * v[c];
        }
        return out;
    }

    /// Equality up to a global unit-modulus phase, entrywise within `tol`.
    bool equals_up_to_phase(const MonomialMatrix &o, double tol = kTolerance) const {
        if (o.dim() != dim() || dim() == 0 || row != o.row) {
            return false;
        }
        const Complex phase = value[0] / o.value[0];
        if (std::abs(std::abs(phase) - 1.0) > tol) {
            return false;
        }
        for (std::size_t c = 0; c < dim(); ++c) {
            if (std::abs(value[c] - phase * o.value[c]) > tol) {
                return false;
            }
        }
        return true;
    }
};

inline MonomialMatrix kron(const MonomialMatrix &a, const MonomialMatrix &b) {
    MonomialMatrix r;
    const std::size_t nb = b.dim();
    r.row.resize(a.dim() * nb);
    r.value.resize(a.dim() * nb);
    for (std::size_t ca = 0; ca < a.dim(); ++ca) {
        for (std::size_t cb = 0; cb < nb; ++cb) {
            r.row[ca * nb + cb] = a.row[ca] * nb + b.row[cb];
            r.value[ca * nb + cb] = a.value[ca] * b.value[cb];
        }
    }
    return r;
}

/// Z(p)|j> = omega^{p j}|j>.
inline MonomialMatrix clock(const Modulus &m, Residue p) {
    const auto d = static_cast<std::size_t>(m.value());
    Vector diag(d);
    for (std::size_t j = 0; j < d; ++j) {
        diag[j] = omega_power(m, p * static_cast<std::int64_t>(j));
    }
    return MonomialMatrix::diagonal(diag);
}

/// X(q)|j> = |j + q>.
inline MonomialMatrix shift(const Modulus &m, Residue q) {
    const auto d = static_cast<std::size_t>(m.value());
    MonomialMatrix r = MonomialMatrix::identity(d);
    for (std::size_t j = 0; j < d; ++j) {
        r.row[j] = static_cast<std::size_t>(m.reduce(static_cast<std::int64_t>(j) + q));
    }
    return r;
}

/// omega^{phase_exp} (x)_i omega^{-2^{-1} p_i q_i} Z(p_i) X(q_i), kets ordered
/// with the first qudit most significant.
inline MonomialMatrix weyl_matrix(const PhasePoint &v, Residue phase_exp = 0) {
    const Modulus &m = v.modulus();
    MonomialMatrix acc = MonomialMatrix::identity(1);
    for (std::size_t i = 0; i < v.particles(); ++i) {
        MonomialMatrix single = clock(m, v.p(i)) * shift(m, v.q(i));
        single = omega_power(m, m.neg(m.mul(m.half(), m.mul(v.p(i), v.q(i))))) * single;
        acc = kron(acc, single);
    }
    return omega_power(m, phase_exp) * acc;
}

inline MonomialMatrix weyl_matrix(const WeylOperator &w) {
    return weyl_matrix(w.point, w.phase_exp);
}

inline std::size_t ket_count(const Modulus &m, std::size_t n) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        count *= static_cast<std::size_t>(m.value());
    }
    return count;
}

/// Computational-basis label of ket `index` (first qudit most significant).
inline std::vector<Residue> ket_label(const Modulus &m, std::size_t n, std::size_t index) {
    std::vector<Residue> j(n);
    const auto d = static_cast<std::size_t>(m.value());
    for (std::size_t i = n; i-- > 0;) {
        j[i] = static_cast<Residue>(index % d);
        index /= d;
    }
    return j;
}

/// U_phi = sum_j omega^{phi(j)} |j><j|.
inline MonomialMatrix diagonal_gate(const ZdPoly &phi) {
    const Modulus &m = phi.modulus();
    const std::size_t n = phi.num_vars();
    const std::size_t count = ket_count(m, n);
    Vector diag(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        diag[idx] = omega_power(m, phi.eval(ket_label(m, n, idx)));
    }
    return MonomialMatrix::diagonal(diag);
}

/// Unit vector proportional to sum_j omega^{phi(j)} |j>.
inline Vector phase_state_vector(const ZdPoly &phi) {
    const Modulus &m = phi.modulus();
    const std::size_t count = ket_count(m, phi.num_vars());
    const double norm = 1.0 / std::sqrt(static_cast<double>(count));
    Vector psi(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        psi[idx] = norm * omega_power(m, phi.eval(ket_label(m, phi.num_vars(), idx)));
    }
    return psi;
}

/// Pi(o | W) psi = d^{-1} sum_x omega^{-x o} W^x psi.
inline Vector project_eigenspace(const MonomialMatrix &w, const Modulus &m, Residue outcome, const Vector &psi) {
    Vector acc(psi.size(), Complex(0.0, 0.0));
    Vector power = psi;
    for (std::int64_t x = 0; x < m.value(); ++x) {
        const Complex weight = omega_power(m, -x * outcome);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            acc[i] += weight * power[i];
        }
        power = w.apply(power);
    }
    const double inv_d = 1.0 / static_cast<double>(m.value());
    for (auto &a : acc) {
        a *= inv_d;
    }
    return acc;
}

/// Projects psi onto the joint eigenspace where generator i of `ctx` has
/// eigenvalue omega^{outcome[i]}.
inline Vector project_joint(const Context &ctx, const std::vector<Residue> &outcome, const Vector &psi) {
    if (outcome.size() != ctx.generators().size()) {
        throw Error(ErrorKind::DimensionMismatch, "outcome tuple does not match the context");
    }
    Vector v = psi;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        v = project_eigenspace(weyl_matrix(ctx.generators()[i]), ctx.modulus(), outcome[i], v);
    }
    return v;
}

inline double norm_squared(const Vector &v) {
    double acc = 0.0;
    for (const auto &c : v) {
        acc += std::norm(c);
    }
    return acc;
}

/// Membership tests in the Clifford hierarchy by explicit conjugation.
///
/// Level 1 is "equal to some W(v) up to global phase"; level k requires
/// U W(v) U^dagger to be in level k-1 for all d^{2n} points v.
class HierarchyOracle {
   public:
    HierarchyOracle(Modulus m, std::size_t n) : m_(m), n_(n) {
        const std::size_t points = ket_count(m, 2 * n);
        for (std::size_t idx = 0; idx < points; ++idx) {
            auto coords = ket_label(m, 2 * n, idx);
            weyl_.push_back(weyl_matrix(PhasePoint(m, coords)));
        }
    }

    bool in_level(const MonomialMatrix &u, int level) const {
        if (level <= 1) {
            return is_pauli(u);
        }
        const MonomialMatrix u_dag = u.adjoint();
        for (const auto &w : weyl_) {
            if (!in_level(u * w * u_dag, level - 1)) {
                return false;
            }
        }
        return true;
    }

    /// U ~ W(p, q): q is read off where |0> is sent, p from the phase ratio
    /// between |e_i> and |0>, then the full matrix is compared.
    bool is_pauli(const MonomialMatrix &u) const {
        const std::size_t dim = ket_count(m_, n_);
        if (u.dim() != dim) {
            return false;
        }
        const auto q = ket_label(m_, n_, u.row[0]);
        std::vector<Residue> coords(2 * n_, 0);
        std::size_t stride = dim;
        const double step = 2.0 * std::numbers::pi / static_cast<double>(m_.value());
        for (std::size_t i = 0; i < n_; ++i) {
            stride /= static_cast<std::size_t>(m_.value());
            const Complex ratio = u.value[stride] / u.value[0];
            const double turns = std::arg(ratio) / step;
            coords[2 * i] = m_.reduce(static_cast<std::int64_t>(std::llround(turns)));
            coords[2 * i + 1] = q[i];
        }
        return u.equals_up_to_phase(weyl_matrix(PhasePoint(m_, coords)));
    }

   private:
    Modulus m_;
    std::size_t n_;
    std::vector<MonomialMatrix> weyl_;
};

}  // namespace qcontext::dense
