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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qcontext/dense.hpp"
#include "qcontext/error.hpp"
#include "qcontext/parallel.hpp"
#include "qcontext/phase_space.hpp"
#include "qcontext/poly.hpp"
#include "qcontext/states.hpp"

namespace qcontext {

/// Multiset of d-th roots of unity: counts[t] is the multiplicity of omega^t.
class RootMultiset {
   public:
    explicit RootMultiset(Modulus m) : m_(m), counts_(static_cast<std::size_t>(m.value()), 0) {
    }

    void add(std::int64_t exponent) {
        ++counts_[static_cast<std::size_t>(m_.reduce(exponent))];
    }

    const Modulus &modulus() const noexcept {
        return m_;
    }
    const std::vector<std::int64_t> &counts() const noexcept {
        return counts_;
    }

    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts_) {
            t += c;
        }
        return t;
    }

    /// For prime d the only vanishing nonnegative integer combinations of
    /// d-th roots are multiples of the full orbit.
    bool is_zero_sum() const {
        return std::all_of(counts_.begin(), counts_.end(), [&](std::int64_t c) { return c == counts_[0]; });
    }

    dense::Complex numeric_value() const {
        dense::Complex acc(0.0, 0.0);
        for (std::size_t t = 0; t < counts_.size(); ++t) {
            acc += static_cast<double>(counts_[t]) * dense::omega_power(m_, static_cast<std::int64_t>(t));
        }
        return acc;
    }

    friend bool operator==(const RootMultiset &a, const RootMultiset &b) {
        return a.m_ == b.m_ && a.counts_ == b.counts_;
    }

   private:
    Modulus m_;
    std::vector<std::int64_t> counts_;
};

/// Outcomes (o_1, ..., o_n) of the generators of a context. The outcome of
/// any element sum_i c_i g_i is sum_i c_i o_i.
struct JointOutcome {
    std::vector<Residue> values;

    friend bool operator==(const JointOutcome &a, const JointOutcome &b) {
        return a.values == b.values;
    }
};

inline std::string to_string(const JointOutcome &o) {
    std::string s = "(";
    for (std::size_t i = 0; i < o.values.size(); ++i) {
        s += (i ? "," : "") + std::to_string(o.values[i]);
    }
    return s + ")";
}

/// Outcome tuples are enumerated with the first generator most significant.
inline JointOutcome outcome_from_index(const Modulus &m, std::size_t n, std::size_t index) {
    return JointOutcome{dense::ket_label(m, n, index)};
}

inline std::size_t outcome_index(const Modulus &m, const JointOutcome &o) {
    std::size_t idx = 0;
    for (Residue v : o.values) {
        idx = idx * static_cast<std::size_t>(m.value()) + static_cast<std::size_t>(m.reduce(v));
    }
    return idx;
}

inline Residue outcome_value(const Context &ctx, const JointOutcome &o, const PhasePoint &v) {
    auto coeffs = ctx.coordinates_of(v);
    if (!coeffs) {
        throw Error(ErrorKind::IncompatibleContext, to_string(v) + " is not in context " + ctx.label());
    }
    const Modulus &m = ctx.modulus();
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < coeffs->size(); ++i) {
        acc += (*coeffs)[i] * o.values[i];
    }
    return m.reduce(acc);
}

struct Possibility {
    bool possible = false;
    std::vector<RootMultiset> per_ket;
};

inline void check_compatible(const PhaseFunctionState &state, const Context &ctx, const JointOutcome &o) {
    if (!(state.modulus() == ctx.modulus()) || state.particles() != ctx.particles() ||
        o.values.size() != ctx.particles()) {
        throw Error(ErrorKind::IncompatibleContext, "state, context and outcome disagree on d or n");
    }
}

/// Expands Pi(o | ctx)|phi> = d^{-n} sum_{v in ctx} omega^{-o(v)} W(v) |phi>
/// ket by ket. With v = (P, Q), the coefficient of |j> collects
///   omega^{-o(v) - 2^{-1} P.Q + j.P + phi(j - Q)}
/// over the d^n elements v; the outcome is impossible iff every ket's
/// multiset is a full orbit.
inline Possibility outcome_possibility(const PhaseFunctionState &state, const Context &ctx, const JointOutcome &o) {
    check_compatible(state, ctx, o);
    const Modulus &m = state.modulus();
    const std::size_t n = state.particles();
    const auto d = static_cast<std::size_t>(m.value());
    const std::vector<Residue> phase = state.phase_table();
    const auto &elements = ctx.elements();

    std::vector<std::int64_t> base(elements.size());
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto c = ctx.coefficient_vector(e);
        std::int64_t s = 0, pq = 0;
        for (std::size_t i = 0; i < n; ++i) {
            s += c[i] * o.values[i];
            pq += elements[e].p(i) * elements[e].q(i);
        }
        base[e] = m.reduce(-s - m.mul(m.half(), m.reduce(pq)));
    }

    Possibility result;
    const std::size_t kets = phase.size();
    result.per_ket.reserve(kets);
    for (std::size_t ket = 0; ket < kets; ++ket) {
        const auto j = dense::ket_label(m, n, ket);
        RootMultiset roots(m);
        for (std::size_t e = 0; e < elements.size(); ++e) {
            const PhasePoint &v = elements[e];
            std::int64_t exponent = base[e];
            std::size_t shifted = 0;
            for (std::size_t i = 0; i < n; ++i) {
                exponent += j[i] * v.p(i);
                shifted = shifted * d + static_cast<std::size_t>(m.sub(j[i], v.q(i)));
            }
            roots.add(exponent + phase[shifted]);
        }
        result.possible |= !roots.is_zero_sum();
        result.per_ket.push_back(std::move(roots));
    }
    return result;
}

/// Psi as a polynomial in (x, y, j, k) for two commuting generators u, v:
///   Psi0 = -2^{-1}(P1 Q1 + P2 Q2) + j P1 + k P2 + phi(j - Q1, k - Q2)
/// with (P, Q) = x u + y v. The outcome-dependent part is -x A - y B.
class MasterPolynomialFamily {
   public:
    MasterPolynomialFamily(const PhaseFunctionState &state, const PhasePoint &u, const PhasePoint &v)
        : m_(state.modulus()), family_(state.modulus(), 4) {
        require_two_qudits(state, "the master polynomial");
        if (!(u.modulus() == m_) || u.particles() != 2 || v.particles() != 2) {
            throw Error(ErrorKind::DimensionMismatch, "generators must be two-qudit phase points");
        }
        if (!commutes(u, v)) {
            throw Error(ErrorKind::NonCommuting, to_string(u) + " and " + to_string(v) + " do not commute");
        }
        const ZdPoly x = ZdPoly::variable(m_, 4, 0);
        const ZdPoly y = ZdPoly::variable(m_, 4, 1);
        const ZdPoly j = ZdPoly::variable(m_, 4, 2);
        const ZdPoly k = ZdPoly::variable(m_, 4, 3);
        auto combine = [&](std::size_t coord) { return u[coord] * x + v[coord] * y; };
        const ZdPoly p1 = combine(0), q1 = combine(1), p2 = combine(2), q2 = combine(3);
        const ZdPoly shifted[] = {j - q1, k - q2};
        family_ = m_.neg(m_.half()) * (p1 * q1 + p2 * q2) + j * p1 + k * p2 + state.phi().substitute(shifted);
    }

    const ZdPoly &family() const noexcept {
        return family_;
    }

    /// Psi(x, y) for the joint outcome (A, B) and ket (j, k).
    ZdPoly specialize(Residue a, Residue b, Residue j, Residue k) const {
        const ZdPoly images[] = {ZdPoly::variable(m_, 2, 0), ZdPoly::variable(m_, 2, 1),
                                 ZdPoly::constant(m_, 2, j), ZdPoly::constant(m_, 2, k)};
        ZdPoly psi = family_.substitute(images);
        psi.add_term({1, 0}, m_.neg(a));
        psi.add_term({0, 1}, m_.neg(b));
        return psi;
    }

   private:
    Modulus m_;
    ZdPoly family_;
};

inline ZdPoly master_polynomial(const PhaseFunctionState &state, const PhasePoint &u, const PhasePoint &v, Residue a,
                                Residue b, Residue j, Residue k) {
    return MasterPolynomialFamily(state, u, v).specialize(a, b, j, k);
}

/// Reference form of the permutation criterion: builds Psi for every ket
/// (j, k) and runs the exhaustive permutation test on it.
inline bool impossibility_by_psi(const PhaseFunctionState &state, const Context &ctx, const JointOutcome &o) {
    check_compatible(state, ctx, o);
    if (ctx.particles() != 2) {
        throw Error(ErrorKind::Unsupported, "the master polynomial needs a two-generator context");
    }
    const MasterPolynomialFamily family(state, ctx.generators()[0], ctx.generators()[1]);
    const std::int64_t d = state.modulus().value();
    for (Residue j = 0; j < d; ++j) {
        for (Residue k = 0; k < d; ++k) {
            if (!is_permutation_polynomial(family.specialize(o.values[0], o.values[1], j, k))) {
                return false;
            }
        }
    }
    return true;
}

/// Tabulated Psi0 over all (j, k, x, y) for one context, answering
/// "is (A, B) impossible" for every outcome without rebuilding polynomials.
/// Values come from evaluating the same symbolic family as
/// `MasterPolynomialFamily::specialize`.
class PsiTable {
   public:
    PsiTable(const PhaseFunctionState &state, const PhasePoint &u, const PhasePoint &v)
        : m_(state.modulus()), d_(static_cast<std::size_t>(state.modulus().value())) {
        const MasterPolynomialFamily family(state, u, v);
        compile(family.family());
    }

    /// True iff Psi0 - x A - y B permutes Z_d^2 for every ket (j, k).
    bool impossible(Residue a, Residue b) const {
        const std::size_t plane = d_ * d_;
        std::vector<std::uint16_t> offset(plane);
        for (std::size_t x = 0; x < d_; ++x) {
            for (std::size_t y = 0; y < d_; ++y) {
                offset[x * d_ + y] = static_cast<std::uint16_t>(
                    m_.reduce(-static_cast<std::int64_t>(x) * a - static_cast<std::int64_t>(y) * b));
            }
        }
        std::vector<std::uint16_t> histogram(d_);
        for (std::size_t ket = 0; ket < plane; ++ket) {
            std::fill(histogram.begin(), histogram.end(), 0);
            const std::uint16_t *row = values_.data() + ket * plane;
            for (std::size_t xy = 0; xy < plane; ++xy) {
                std::size_t val = static_cast<std::size_t>(row[xy]) + offset[xy];
                if (val >= d_) {
                    val -= d_;
                }
                if (++histogram[val] > d_) {
                    return false;
                }
            }
        }
        return true;
    }

   private:
    void compile(const ZdPoly &family) {
        // Power tables per exponent keep the d^4 evaluations cheap.
        unsigned max_exp = 0;
        for (const auto &[e, c] : family.terms()) {
            for (unsigned x : e) {
                max_exp = std::max(max_exp, x);
            }
        }
        std::vector<std::vector<std::int64_t>> pw(max_exp + 1, std::vector<std::int64_t>(d_));
        for (std::size_t t = 0; t < d_; ++t) {
            pw[0][t] = 1;
            for (unsigned e = 1; e <= max_exp; ++e) {
                pw[e][t] = pw[e - 1][t] * static_cast<std::int64_t>(t) % m_.value();
            }
        }
        const std::size_t plane = d_ * d_;
        values_.assign(plane * plane, 0);
        std::vector<std::int64_t> acc(plane);
        for (std::size_t j = 0; j < d_; ++j) {
            for (std::size_t k = 0; k < d_; ++k) {
                std::fill(acc.begin(), acc.end(), 0);
                for (const auto &[e, c] : family.terms()) {
                    const std::int64_t jk = c * pw[e[2]][j] % m_.value() * pw[e[3]][k] % m_.value();
                    if (jk == 0) {
                        continue;
                    }
                    for (std::size_t x = 0; x < d_; ++x) {
                        const std::int64_t jkx = jk * pw[e[0]][x] % m_.value();
                        for (std::size_t y = 0; y < d_; ++y) {
                            acc[x * d_ + y] += jkx * pw[e[1]][y];
                        }
                    }
                }
                std::uint16_t *row = values_.data() + (j * d_ + k) * plane;
                for (std::size_t xy = 0; xy < plane; ++xy) {
                    row[xy] = static_cast<std::uint16_t>(m_.reduce(acc[xy]));
                }
            }
        }
    }

    Modulus m_;
    std::size_t d_;
    std::vector<std::uint16_t> values_;  // [(j * d + k) * d^2 + x * d + y]
};

struct ModelRow {
    JointOutcome outcome;
    bool possible = false;
    double probability = 0.0;
    std::vector<RootMultiset> witness;
};

/// Joint-outcome statistics of a state over a list of contexts.
/// rows[c][i] is outcome `outcome_from_index(i)` of contexts[c].
struct EmpiricalModel {
    PhaseFunctionState state;
    std::vector<Context> contexts;
    std::vector<std::vector<ModelRow>> rows;
};

/// Possibility comes from the exact root counting; probabilities from a
/// floating-point projection of the state vector.
inline EmpiricalModel build_empirical_model(const PhaseFunctionState &state, std::vector<Context> contexts,
                                            unsigned threads = 1) {
    if (state.particles() > 2) {
        throw Error(ErrorKind::ScaleError, "empirical models are tabulated for n <= 2");
    }
    EmpiricalModel model{state, std::move(contexts), {}};
    model.rows.resize(model.contexts.size());
    const dense::Vector psi = dense::phase_state_vector(state.phi());
    const std::size_t outcomes = dense::ket_count(state.modulus(), state.particles());
    parallel_for(model.contexts.size(), threads, [&](std::size_t c) {
        const Context &ctx = model.contexts[c];
        auto &rows = model.rows[c];
        rows.reserve(outcomes);
        for (std::size_t i = 0; i < outcomes; ++i) {
            JointOutcome o = outcome_from_index(state.modulus(), state.particles(), i);
            Possibility p = outcome_possibility(state, ctx, o);
            const double prob = dense::norm_squared(dense::project_joint(ctx, o.values, psi));
            rows.push_back(ModelRow{std::move(o), p.possible, prob, std::move(p.per_ket)});
        }
    });
    return model;
}

/// Distribution of the outcome of W(v) implied by context `c` of the model.
inline std::vector<double> marginal(const EmpiricalModel &model, std::size_t c, const PhasePoint &v) {
    const Context &ctx = model.contexts.at(c);
    std::vector<double> dist(static_cast<std::size_t>(ctx.modulus().value()), 0.0);
    for (const auto &row : model.rows[c]) {
        dist[static_cast<std::size_t>(outcome_value(ctx, row.outcome, v))] += row.probability;
    }
    return dist;
}

}  // namespace qcontext
