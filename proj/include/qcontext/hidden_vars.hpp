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

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qcontext/born.hpp"
#include "qcontext/error.hpp"
#include "qcontext/parallel.hpp"
#include "qcontext/phase_space.hpp"
#include "qcontext/simplex.hpp"
#include "qcontext/states.hpp"

namespace qcontext {

/// A linear hidden variable: W(v) is assigned the outcome lam . v.
class HiddenVariable {
   public:
    HiddenVariable(Modulus m, std::vector<Residue> lam) : m_(m), lam_(std::move(lam)) {
        if (lam_.empty() || lam_.size() % 2 != 0) {
            throw Error(ErrorKind::DimensionMismatch, "hidden variables live in Z_d^{2n}");
        }
        for (auto &x : lam_) {
            x = m_.reduce(x);
        }
    }

    const Modulus &modulus() const noexcept {
        return m_;
    }
    std::size_t particles() const noexcept {
        return lam_.size() / 2;
    }
    const std::vector<Residue> &lam() const noexcept {
        return lam_;
    }

    Residue outcome_of(const PhasePoint &v) const {
        if (v.coords().size() != lam_.size() || !(v.modulus() == m_)) {
            throw Error(ErrorKind::DimensionMismatch, "hidden variable and phase point disagree");
        }
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < lam_.size(); ++i) {
            acc += lam_[i] * v[i];
        }
        return m_.reduce(acc);
    }

    friend bool operator==(const HiddenVariable &a, const HiddenVariable &b) {
        return a.m_ == b.m_ && a.lam_ == b.lam_;
    }

   private:
    Modulus m_;
    std::vector<Residue> lam_;
};

inline std::string to_string(const HiddenVariable &h) {
    std::string s = "(";
    for (std::size_t i = 0; i < h.lam().size(); ++i) {
        s += (i ? "," : "") + std::to_string(h.lam()[i]);
    }
    return s + ")";
}

inline std::size_t hidden_variable_count(const Modulus &m, std::size_t n) {
    return dense::ket_count(m, 2 * n);
}

/// Index order is lexicographic in (lam_1, ..., lam_2n); index 0 is zero.
inline HiddenVariable hidden_variable_at(const Modulus &m, std::size_t n, std::size_t index) {
    return HiddenVariable(m, dense::ket_label(m, 2 * n, index));
}

inline std::vector<HiddenVariable> enumerate_linear_hv(const Modulus &m, std::size_t n) {
    std::vector<HiddenVariable> out;
    const std::size_t count = hidden_variable_count(m, n);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(hidden_variable_at(m, n, i));
    }
    return out;
}

inline JointOutcome prescribed_outcome(const HiddenVariable &hv, const Context &ctx) {
    JointOutcome o;
    for (const auto &g : ctx.generators()) {
        o.values.push_back(hv.outcome_of(g));
    }
    return o;
}

/// An arbitrary outcome assignment on phase points.
using PointAssignment = std::map<PhasePoint, Residue>;

/// Checks, for a two-qudit assignment, every additivity identity that forces
/// hidden variables to be linear:
///   - qudit split      l(p1,q1,p2,q2) = l(p1,q1,0,0) + l(0,0,p2,q2)
///   - p/q split        when p1 q1 = -p2 q2, l(v) = l(p1,0,p2,0) + l(0,q1,0,q2)
///                      and both halves split per qudit
///   - line additivity  l(v) + l(c v) = l((1 + c) v)
///   - the ancilla chain through (1,k,0,-k/2), (1,k/2,1,-k/2), (0,k/2,-1,0)
///     for every k, and its mirror image on the second qudit.
/// Throws IncompleteProbe if a referenced point is missing.
inline bool check_linearity_forcing(const Modulus &m, const PointAssignment &candidate) {
    auto value = [&](std::vector<Residue> coords) -> Residue {
        PhasePoint v(m, std::move(coords));
        auto it = candidate.find(v);
        if (it == candidate.end()) {
            throw Error(ErrorKind::IncompleteProbe, "assignment is missing " + to_string(v));
        }
        return m.reduce(it->second);
    };
    auto sum_equals = [&](Residue lhs, std::initializer_list<Residue> parts) {
        std::int64_t acc = 0;
        for (Residue p : parts) {
            acc += p;
        }
        return m.reduce(lhs) == m.reduce(acc);
    };

    const std::int64_t d = m.value();
    bool ok = true;
    for (std::size_t idx = 0; idx < dense::ket_count(m, 4); ++idx) {
        const auto v = dense::ket_label(m, 4, idx);
        const Residue p1 = v[0], q1 = v[1], p2 = v[2], q2 = v[3];
        const Residue here = value(v);
        ok &= sum_equals(here, {value({p1, q1, 0, 0}), value({0, 0, p2, q2})});
        if (m.add(m.mul(p1, q1), m.mul(p2, q2)) == 0) {
            const Residue ps = value({p1, 0, p2, 0}), qs = value({0, q1, 0, q2});
            ok &= sum_equals(here, {ps, qs});
            ok &= sum_equals(ps, {value({p1, 0, 0, 0}), value({0, 0, p2, 0})});
            ok &= sum_equals(qs, {value({0, q1, 0, 0}), value({0, 0, 0, q2})});
        }
        for (Residue c = 0; c < d; ++c) {
            ok &= sum_equals(value({(1 + c) * p1, (1 + c) * q1, (1 + c) * p2, (1 + c) * q2}),
                             {here, value({c * p1, c * q1, c * p2, c * q2})});
        }
    }
    // Chain on the first qudit; `mirror` swaps the qudits for the second.
    const Residue h = m.half();
    for (int mirror = 0; mirror < 2; ++mirror) {
        auto pt = [&](Residue a, Residue b, Residue c, Residue e) {
            return mirror ? value({c, e, a, b}) : value({a, b, c, e});
        };
        for (Residue k = 0; k < d; ++k) {
            const Residue hk = m.mul(h, k);
            ok &= sum_equals(pt(1, k, 0, 0), {pt(1, k, 0, -hk), pt(0, 0, 0, hk)});
            ok &= sum_equals(pt(1, k, 0, -hk), {pt(1, hk, 1, -hk), pt(0, hk, -1, 0)});
            ok &= sum_equals(pt(1, hk, 1, -hk), {pt(1, 0, 0, 0), pt(0, hk, 0, 0), pt(0, 0, 1, 0), pt(0, 0, 0, -hk)});
            ok &= sum_equals(pt(0, hk, -1, 0), {pt(0, hk, 0, 0), pt(0, 0, -1, 0)});
            ok &= sum_equals(pt(1, k, 0, 0), {pt(1, 0, 0, 0), pt(0, k, 0, 0)});
        }
    }
    return ok;
}

/// Assignment table of a linear hidden variable over all of Z_d^4.
inline PointAssignment assignment_of(const HiddenVariable &hv) {
    PointAssignment out;
    const Modulus &m = hv.modulus();
    for (std::size_t idx = 0; idx < dense::ket_count(m, 2 * hv.particles()); ++idx) {
        PhasePoint v(m, dense::ket_label(m, 2 * hv.particles(), idx));
        const Residue o = hv.outcome_of(v);
        out.emplace(std::move(v), o);
    }
    return out;
}

enum class Strategy { Table1First, FullScan };
enum class Stage { ProofPath, Table1Scan, FullScan };

inline const char *to_string(Strategy s) {
    return s == Strategy::Table1First ? "table1_first" : "full_scan";
}
inline const char *to_string(Stage s) {
    switch (s) {
        case Stage::ProofPath: return "proof_path";
        case Stage::Table1Scan: return "table1_scan";
        case Stage::FullScan: return "full_scan";
    }
    return "?";
}

/// The three Table 1 contexts singled out by the contextuality argument for
/// a normal-form state phi1 j^2 k + phi2 j k^2 (phi1 != 0).
///
/// The argument names the hidden-variable components so that lam_1, lam_3
/// pair with q1, q2 and lam_2, lam_4 with p1, p2; with lam . v ordered
/// (p1, q1, p2, q2) that means l1 = lam[1], l2 = lam[0], l3 = lam[3],
/// l4 = lam[2].
struct ProofPathChoice {
    Residue alpha_i = 0;
    Residue alpha_ii = 0;
    Residue alpha_iii = 0;
    Residue beta_iii = 1;
};

inline ProofPathChoice proof_path_choice(const Modulus &m, Residue phi1, Residue phi2, const HiddenVariable &hv) {
    const auto &lam = hv.lam();
    const Residue l2 = lam[0], l4 = lam[2];
    ProofPathChoice c;
    c.alpha_i = m.mul(2, m.mul(l2, phi2));
    c.alpha_ii = m.mul(2, m.mul(l4, phi1));
    if (m.reduce(phi2 + 1) == 0) {
        c.alpha_iii = m.mul(6, m.sub(m.mul(l2, phi1), l4));
        c.beta_iii = m.inv(phi1);
    } else {
        const Residue s = m.add(phi2, 1);
        const Residue inner =
            m.add(m.mul(m.mul(l2, phi1), m.add(phi2, 2)), m.mul(l4, m.sub(m.mul(phi2, phi2), 1)));
        c.alpha_iii = m.mul(m.mul(2, m.inv(s)), inner);
        c.beta_iii = m.mul(m.inv(phi1), s);
    }
    return c;
}

struct Refutation {
    HiddenVariable lambda;
    std::string context_label;
    std::vector<PhasePoint> generators;
    JointOutcome outcome;
    Stage stage = Stage::ProofPath;
    std::size_t confirmed_kets = 0;  // kets (j,k) whose Psi was confirmed a permutation
};

struct ConsistencyRow {
    std::string context_label;
    std::vector<PhasePoint> generators;
    JointOutcome outcome;
    double probability = 0.0;
};

struct StrongContextualityCertificate {
    StrongContextualityCertificate(PhaseFunctionState input, PhaseFunctionState analyzed)
        : input_state(std::move(input)), analyzed_state(std::move(analyzed)) {
    }

    PhaseFunctionState input_state;
    PhaseFunctionState analyzed_state;
    std::vector<std::string> reductions;
    Strategy strategy = Strategy::Table1First;
    bool strongly_contextual = false;
    bool within_theorem_hypothesis = false;
    std::vector<Refutation> refutations;
    std::optional<HiddenVariable> witness;
    std::vector<ConsistencyRow> witness_table;
    std::size_t proof_path_count = 0;
    std::size_t table1_scan_count = 0;
    std::size_t full_scan_count = 0;
};

struct DecideOptions {
    Strategy strategy = Strategy::Table1First;
    bool normalize = true;
    unsigned threads = 1;
};

/// Lazily built Psi tables and cached verdicts for every (context, outcome).
class ContextBank {
   public:
    ContextBank(const PhaseFunctionState &state, std::vector<Context> contexts)
        : state_(state),
          contexts_(std::move(contexts)),
          tables_(contexts_.size()),
          once_(std::make_unique<std::once_flag[]>(contexts_.size())),
          outcomes_(dense::ket_count(state.modulus(), 2)),
          verdict_(std::make_unique<std::atomic<signed char>[]>(contexts_.size() * outcomes_)) {
        for (std::size_t i = 0; i < contexts_.size() * outcomes_; ++i) {
            verdict_[i].store(-1, std::memory_order_relaxed);
        }
    }

    const std::vector<Context> &contexts() const noexcept {
        return contexts_;
    }

    bool impossible(std::size_t c, const JointOutcome &o) {
        const std::size_t slot = c * outcomes_ + outcome_index(state_.modulus(), o);
        signed char cached = verdict_[slot].load(std::memory_order_relaxed);
        if (cached >= 0) {
            return cached == 1;
        }
        std::call_once(once_[c], [&] {
            tables_[c] = std::make_unique<PsiTable>(state_, contexts_[c].generators()[0], contexts_[c].generators()[1]);
        });
        const bool result = tables_[c]->impossible(o.values[0], o.values[1]);
        verdict_[slot].store(result ? 1 : 0, std::memory_order_relaxed);
        return result;
    }

   private:
    const PhaseFunctionState &state_;
    std::vector<Context> contexts_;
    std::vector<std::unique_ptr<PsiTable>> tables_;
    std::unique_ptr<std::once_flag[]> once_;
    std::size_t outcomes_;
    std::unique_ptr<std::atomic<signed char>[]> verdict_;
};

namespace detail {

inline bool is_cubic_normal_form(const PhaseFunctionState &s) {
    const ZdPoly &phi = s.phi();
    if (phi.total_degree() > 3) {
        return false;
    }
    StrongnessReport r = strongness(s);
    return r.is_strong && r.quadratic_part.is_zero() && r.phi1 != 0;
}

}  // namespace detail

/// Decides whether a two-qudit phase-function state is strongly contextual
/// for stabilizer measurements, returning a re-checkable certificate.
///
/// The state is first reduced (quadratic part removed, qudits swapped so the
/// j^2 k coefficient is nonzero). For each linear hidden variable the search
/// tries, in order: the three Table 1 contexts chosen by the contextuality
/// argument, all Table 1 contexts, then every maximal isotropic subspace.
/// `Strategy::FullScan`, and reduced states that are not of the cubic normal
/// form, go straight to the last stage. A refutation is a context whose
/// prescribed joint outcome is impossible.
///
/// Refutations refer to `analyzed_state`. If the analyzed state admits a
/// consistent hidden variable, the witness is searched again on the input
/// state so that it can be replayed there.
inline StrongContextualityCertificate decide_strong_contextuality(const PhaseFunctionState &input,
                                                                  const DecideOptions &options = {}) {
    if (input.particles() != 2) {
        throw Error(ErrorKind::ScaleError, "strong contextuality is decided for n = 2");
    }
    const Modulus &m = input.modulus();
    PhaseFunctionState analyzed = input;
    std::vector<std::string> reductions;
    if (options.normalize) {
        PhaseFunctionState stripped = strip_quadratic(analyzed);
        if (!(stripped == analyzed)) {
            reductions.emplace_back("strip_quadratic");
            analyzed = stripped;
        }
        const ZdPoly &phi = analyzed.phi();
        if (phi.coefficient({2, 1}) == 0 && phi.coefficient({1, 2}) != 0) {
            reductions.emplace_back("swap_qudits");
            analyzed = swap_qudits(analyzed);
        }
    }

    const bool normal_form = detail::is_cubic_normal_form(analyzed);
    const bool guided = options.strategy == Strategy::Table1First && normal_form;
    const Residue phi1 = analyzed.phi().coefficient({2, 1});
    const Residue phi2 = analyzed.phi().coefficient({1, 2});

    std::unique_ptr<ContextBank> table1;
    if (guided) {
        table1 = std::make_unique<ContextBank>(analyzed, table1_contexts(m));
    }
    std::unique_ptr<ContextBank> full;
    std::once_flag full_once;
    auto full_bank = [&]() -> ContextBank & {
        std::call_once(full_once, [&] { full = std::make_unique<ContextBank>(analyzed, enumerate_contexts(m, 2)); });
        return *full;
    };

    const std::size_t count = hidden_variable_count(m, 2);
    std::vector<std::optional<Refutation>> found(count);
    std::atomic<std::size_t> first_consistent{count};

    auto try_context = [&](ContextBank &bank, std::size_t c, const HiddenVariable &hv,
                           Stage stage) -> std::optional<Refutation> {
        const Context &ctx = bank.contexts()[c];
        JointOutcome o = prescribed_outcome(hv, ctx);
        if (!bank.impossible(c, o)) {
            return std::nullopt;
        }
        return Refutation{hv, ctx.label(), ctx.generators(), std::move(o), stage,
                          dense::ket_count(m, 2)};
    };

    parallel_for(count, options.threads, [&](std::size_t idx) {
        if (idx > first_consistent.load(std::memory_order_relaxed)) {
            return;
        }
        const HiddenVariable hv = hidden_variable_at(m, 2, idx);
        std::optional<Refutation> r;
        if (guided) {
            const ProofPathChoice pc = proof_path_choice(m, phi1, phi2, hv);
            const std::size_t candidates[] = {table1_index(m, Table1Family::I, pc.alpha_i),
                                              table1_index(m, Table1Family::II, pc.alpha_ii),
                                              table1_index(m, Table1Family::III, pc.alpha_iii, pc.beta_iii)};
            for (std::size_t c : candidates) {
                if ((r = try_context(*table1, c, hv, Stage::ProofPath))) {
                    break;
                }
            }
            for (std::size_t c = 0; !r && c < table1->contexts().size(); ++c) {
                r = try_context(*table1, c, hv, Stage::Table1Scan);
            }
        }
        if (!r) {
            ContextBank &bank = full_bank();
            for (std::size_t c = 0; !r && c < bank.contexts().size(); ++c) {
                r = try_context(bank, c, hv, Stage::FullScan);
            }
        }
        if (!r) {
            std::size_t cur = first_consistent.load();
            while (idx < cur && !first_consistent.compare_exchange_weak(cur, idx)) {
            }
        }
        found[idx] = std::move(r);
    });

    const std::size_t witness_index = first_consistent.load();
    if (witness_index < count && !(analyzed == input)) {
        return decide_strong_contextuality(input, DecideOptions{Strategy::FullScan, false, options.threads});
    }

    StrongContextualityCertificate cert(input, analyzed);
    cert.reductions = reductions;
    cert.strategy = options.strategy;
    cert.strongly_contextual = witness_index == count;
    cert.within_theorem_hypothesis = normal_form && m.value() % 3 != 1;
    if (cert.strongly_contextual) {
        cert.refutations.reserve(count);
        for (auto &r : found) {
            switch (r->stage) {
                case Stage::ProofPath: ++cert.proof_path_count; break;
                case Stage::Table1Scan: ++cert.table1_scan_count; break;
                case Stage::FullScan: ++cert.full_scan_count; break;
            }
            cert.refutations.push_back(std::move(*r));
        }
        return cert;
    }

    const HiddenVariable hv = hidden_variable_at(m, 2, witness_index);
    cert.witness = hv;
    const dense::Vector psi = dense::phase_state_vector(analyzed.phi());
    for (const Context &ctx : full_bank().contexts()) {
        JointOutcome o = prescribed_outcome(hv, ctx);
        const double p = dense::norm_squared(dense::project_joint(ctx, o.values, psi));
        cert.witness_table.push_back(ConsistencyRow{ctx.label(), ctx.generators(), std::move(o), p});
    }
    return cert;
}

/// Replays a certificate through the projector-expansion test, which does not
/// share code with the Psi tables used by the search. Returns the number of
/// entries that fail to replay (0 for a sound certificate).
inline std::size_t recheck_certificate(const StrongContextualityCertificate &cert) {
    std::size_t failures = 0;
    const PhaseFunctionState &state = cert.analyzed_state;
    for (const auto &r : cert.refutations) {
        const Context ctx(r.generators, r.context_label);
        if (prescribed_outcome(r.lambda, ctx) != r.outcome || outcome_possibility(state, ctx, r.outcome).possible) {
            ++failures;
        }
    }
    if (cert.witness) {
        for (const auto &row : cert.witness_table) {
            const Context ctx(row.generators, row.context_label);
            if (prescribed_outcome(*cert.witness, ctx) != row.outcome ||
                !outcome_possibility(state, ctx, row.outcome).possible) {
                ++failures;
            }
        }
    }
    return failures;
}

struct ContextualFraction {
    double cf = 1.0;
    std::vector<std::pair<HiddenVariable, double>> weights;  // nonzero weights only
    std::size_t lp_rows = 0;
    std::size_t lp_vars = 0;
};

/// Contextual fraction via the LP
///   maximize sum_lam w_lam  s.t.  sum_{lam consistent with (C, o)} w_lam <= P_C(o),  w >= 0
/// over linear hidden variables; cf = 1 - max. Outcomes flagged impossible by
/// the exact test pin every hidden variable predicting them to zero weight.
inline ContextualFraction contextual_fraction(const EmpiricalModel &model) {
    const Modulus &m = model.state.modulus();
    const std::size_t n = model.state.particles();
    const std::size_t outcomes = dense::ket_count(m, n);
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
        if (model.rows[c].size() != outcomes) {
            throw Error(ErrorKind::InfeasibleModel, "context " + model.contexts[c].label() + " is incomplete");
        }
        double total = 0.0;
        for (const auto &row : model.rows[c]) {
            if (row.probability < -1e-9) {
                throw Error(ErrorKind::InfeasibleModel, "negative probability in " + model.contexts[c].label());
            }
            total += row.probability;
        }
        if (std::abs(total - 1.0) > 1e-6) {
            throw Error(ErrorKind::InfeasibleModel,
                        "probabilities in " + model.contexts[c].label() + " sum to " + std::to_string(total));
        }
    }

    const std::size_t count = hidden_variable_count(m, n);
    std::vector<std::vector<std::size_t>> prescribed(model.contexts.size(), std::vector<std::size_t>(count));
    std::vector<bool> alive(count, true);
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
        for (std::size_t h = 0; h < count; ++h) {
            const auto o = prescribed_outcome(hidden_variable_at(m, n, h), model.contexts[c]);
            prescribed[c][h] = outcome_index(m, o);
            if (!model.rows[c][prescribed[c][h]].possible) {
                alive[h] = false;
            }
        }
    }
    std::vector<std::size_t> var_of(count, count), hv_of;
    for (std::size_t h = 0; h < count; ++h) {
        if (alive[h]) {
            var_of[h] = hv_of.size();
            hv_of.push_back(h);
        }
    }
    ContextualFraction result;
    if (hv_of.empty()) {
        return result;
    }

    lp::Problem problem;
    problem.num_vars = hv_of.size();
    problem.objective.assign(hv_of.size(), 1.0);
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
        std::vector<std::vector<std::pair<std::size_t, double>>> by_outcome(outcomes);
        for (std::size_t h : hv_of) {
            by_outcome[prescribed[c][h]].emplace_back(var_of[h], 1.0);
        }
        for (std::size_t o = 0; o < outcomes; ++o) {
            if (!by_outcome[o].empty()) {
                problem.rows.push_back(std::move(by_outcome[o]));
                problem.rhs.push_back(std::max(0.0, model.rows[c][o].probability));
            }
        }
    }
    result.lp_rows = problem.rows.size();
    result.lp_vars = problem.num_vars;
    const lp::Solution sol = lp::maximize(problem);
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorKind::InfeasibleModel, "contextual-fraction LP did not reach an optimum");
    }
    result.cf = std::clamp(1.0 - sol.objective, 0.0, 1.0);
    for (std::size_t v = 0; v < hv_of.size(); ++v) {
        if (sol.x[v] > 1e-12) {
            result.weights.emplace_back(hidden_variable_at(m, n, hv_of[v]), sol.x[v]);
        }
    }
    return result;
}

}  // namespace qcontext
