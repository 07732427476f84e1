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

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcontext.hpp"

namespace qcontext::cli {

enum ExitCode : int {
    kStronglyContextual = 0,
    kError = 1,
    kNotStronglyContextual = 2,
    kVerificationFailed = 3,
};

inline constexpr std::int64_t kMaxSafeModulus = 13;

struct RunConfig {
    std::int64_t d = 5;
    std::string phi = "j^2*k";
    std::string strategy = "table1_first";
    std::string format = "text";
    std::string output;
    std::string contexts = "table1";
    unsigned threads = default_parallelism();
    std::uint64_t seed = 1;
    bool unsafe_scale = false;
};

namespace detail {

inline Modulus checked_modulus(const RunConfig &cfg) {
    Modulus m(cfg.d);
    if (m.value() > kMaxSafeModulus && !cfg.unsafe_scale) {
        throw Error(ErrorKind::ScaleError,
                    "d = " + std::to_string(m.value()) + " exceeds " + std::to_string(kMaxSafeModulus) +
                        "; pass --unsafe-scale to run anyway");
    }
    return m;
}

inline Strategy parse_strategy(const std::string &s) {
    if (s == "table1_first") {
        return Strategy::Table1First;
    }
    if (s == "full_scan") {
        return Strategy::FullScan;
    }
    throw Error(ErrorKind::ParseError, "unknown strategy '" + s + "'");
}

inline std::vector<Context> pick_contexts(const Modulus &m, const std::string &which) {
    if (which == "table1") {
        return table1_contexts(m);
    }
    if (which == "all") {
        return enumerate_contexts(m, 2);
    }
    throw Error(ErrorKind::ParseError, "unknown context set '" + which + "' (expected table1 or all)");
}

inline void require_format(const std::string &format, std::initializer_list<const char *> allowed) {
    for (const char *a : allowed) {
        if (format == a) {
            return;
        }
    }
    throw Error(ErrorKind::ParseError, "format '" + format + "' is not available for this command");
}

/// Writes to --output when given, otherwise to `out`.
inline void emit(const RunConfig &cfg, std::ostream &out, const std::string &text) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::ParseError, "cannot open " + cfg.output + " for writing");
    }
    f << text;
}

inline std::string dump(const io::Json &j) {
    return j.dump(2) + "\n";
}

inline ZdPoly strong_phi(const Modulus &m, Residue phi1, Residue phi2) {
    return phi1 * ZdPoly::monomial(m, {2, 1}, 1) + phi2 * ZdPoly::monomial(m, {1, 2}, 1);
}

inline ZdPoly random_quadratic(const Modulus &m, std::mt19937_64 &rng) {
    std::uniform_int_distribution<Residue> coef(0, m.value() - 1);
    ZdPoly q(m, 2);
    for (const auto &e : std::vector<ZdPoly::Exponents>{{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}, {0, 0}}) {
        q.add_term(e, coef(rng));
    }
    return q;
}

}  // namespace detail

inline int cmd_analyze(const RunConfig &cfg, std::ostream &out) {
    const Modulus m = detail::checked_modulus(cfg);
    detail::require_format(cfg.format, {"text", "json", "csv"});
    const PhaseFunctionState state = PhaseFunctionState::parse(cfg.phi, m);
    const auto cert =
        decide_strong_contextuality(state, DecideOptions{detail::parse_strategy(cfg.strategy), true, cfg.threads});
    if (cfg.format == "json") {
        detail::emit(cfg, out, detail::dump(io::certificate_json(cert)));
    } else if (cfg.format == "csv") {
        std::ostringstream s;
        s << "lambda,context,outcome,stage\n";
        for (const auto &r : cert.refutations) {
            s << io::csv_field(to_string(r.lambda)) << ',' << io::csv_field(r.context_label) << ','
              << io::csv_field(to_string(r.outcome)) << ',' << to_string(r.stage) << '\n';
        }
        detail::emit(cfg, out, s.str());
    } else {
        std::ostringstream s;
        s << "state: " << cert.input_state.describe() << " (d = " << m.value() << ")\n";
        s << "analyzed: " << cert.analyzed_state.describe();
        for (const auto &r : cert.reductions) {
            s << " [" << r << "]";
        }
        s << "\n";
        if (cert.strongly_contextual) {
            s << "verdict: strongly contextual\n";
            s << "refuted hidden variables: " << cert.refutations.size() << " (proof_path " << cert.proof_path_count
              << ", table1_scan " << cert.table1_scan_count << ", full_scan " << cert.full_scan_count << ")\n";
        } else {
            s << "verdict: not strongly contextual\n";
            s << "consistent hidden variable: " << to_string(*cert.witness) << " over " << cert.witness_table.size()
              << " contexts\n";
        }
        if (!cert.within_theorem_hypothesis) {
            s << "note: outside the strong-magic-state hypothesis; result from exhaustive search\n";
        }
        detail::emit(cfg, out, s.str());
    }
    return cert.strongly_contextual ? kStronglyContextual : kNotStronglyContextual;
}

struct Theorem1Options {
    bool include_quadratics = false;
    unsigned samples = 5;
};

inline int cmd_verify_theorem1(const RunConfig &cfg, const Theorem1Options &opt, std::ostream &out) {
    const Modulus m = detail::checked_modulus(cfg);
    detail::require_format(cfg.format, {"text", "json"});
    if (m.value() % 3 == 1) {
        throw Error(ErrorKind::UnsupportedModulus, "the theorem needs d != 1 (mod 3)");
    }
    const Strategy strategy = detail::parse_strategy(cfg.strategy);
    std::mt19937_64 rng(cfg.seed);
    std::size_t checked = 0;
    io::Json failures = io::Json::array();
    io::Json rows = io::Json::array();
    const auto start = std::chrono::steady_clock::now();
    for (Residue a = 0; a < m.value(); ++a) {
        for (Residue b = 0; b < m.value(); ++b) {
            if (a == 0 && b == 0) {
                continue;
            }
            const ZdPoly base = detail::strong_phi(m, a, b);
            std::vector<ZdPoly> variants;
            if (opt.include_quadratics) {
                for (unsigned s = 0; s < opt.samples; ++s) {
                    variants.push_back(base + detail::random_quadratic(m, rng));
                }
            } else {
                variants.push_back(base);
            }
            for (const auto &phi : variants) {
                const auto cert =
                    decide_strong_contextuality(PhaseFunctionState(phi), DecideOptions{strategy, true, cfg.threads});
                ++checked;
                rows.push_back(io::Json{{"state", to_string(phi)},
                                        {"strongly_contextual", cert.strongly_contextual},
                                        {"full_scan_refutations", cert.full_scan_count}});
                if (!cert.strongly_contextual) {
                    failures.push_back(to_string(phi));
                }
            }
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::size_t passed = checked - failures.size();
    if (cfg.format == "json") {
        io::Json j;
        j["schema"] = io::kSchemaVersion;
        j["modulus"] = m.value();
        j["include_quadratics"] = opt.include_quadratics;
        j["samples"] = opt.include_quadratics ? opt.samples : 0;
        j["seed"] = cfg.seed;
        j["checked"] = checked;
        j["strongly_contextual"] = passed;
        j["failures"] = failures;
        j["states"] = std::move(rows);
        detail::emit(cfg, out, detail::dump(j));
    } else {
        std::ostringstream s;
        s << "d = " << m.value() << ": " << passed << "/" << checked << " strongly contextual";
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.2f s)\n", seconds);
        s << buf;
        for (const auto &f : failures) {
            s << "FAILED: " << f.get<std::string>() << "\n";
        }
        detail::emit(cfg, out, s.str());
    }
    return failures.empty() ? 0 : kVerificationFailed;
}

inline int cmd_model(const RunConfig &cfg, std::ostream &out) {
    const Modulus m = detail::checked_modulus(cfg);
    detail::require_format(cfg.format, {"text", "json", "csv"});
    const auto model =
        build_empirical_model(PhaseFunctionState::parse(cfg.phi, m), detail::pick_contexts(m, cfg.contexts), cfg.threads);
    if (cfg.format == "json") {
        detail::emit(cfg, out, detail::dump(io::model_json(model)));
    } else {
        std::ostringstream s;
        io::write_model_csv(model, s);
        detail::emit(cfg, out, s.str());
    }
    return 0;
}

struct ContextsOptions {
    std::size_t n = 2;
    bool count_only = false;
    bool table1 = false;
};

inline int cmd_contexts(const RunConfig &cfg, const ContextsOptions &opt, std::ostream &out) {
    const Modulus m = detail::checked_modulus(cfg);
    detail::require_format(cfg.format, {"text", "json"});
    if (opt.table1 && opt.n != 2) {
        throw Error(ErrorKind::DimensionMismatch, "the Table 1 family is defined for two qudits");
    }
    const auto contexts = opt.table1 ? table1_contexts(m) : enumerate_contexts(m, opt.n);
    if (opt.count_only) {
        detail::emit(cfg, out, std::to_string(contexts.size()) + "\n");
    } else if (cfg.format == "json") {
        detail::emit(cfg, out, detail::dump(io::contexts_json(m, opt.n, contexts)));
    } else {
        std::ostringstream s;
        for (const auto &c : contexts) {
            s << c.label() << "\n";
        }
        detail::emit(cfg, out, s.str());
    }
    return 0;
}

inline int cmd_cf(const RunConfig &cfg, std::ostream &out) {
    const Modulus m = detail::checked_modulus(cfg);
    detail::require_format(cfg.format, {"text", "json"});
    const auto model =
        build_empirical_model(PhaseFunctionState::parse(cfg.phi, m), detail::pick_contexts(m, cfg.contexts), cfg.threads);
    const auto cf = contextual_fraction(model);
    if (cfg.format == "json") {
        detail::emit(cfg, out, detail::dump(io::cf_json(model, cf)));
    } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f\n", cf.cf);
        detail::emit(cfg, out, buf);
    }
    return 0;
}

inline int cmd_dickson(const RunConfig &cfg, const std::string &poly, std::ostream &out) {
    const Modulus m = detail::checked_modulus(cfg);
    detail::require_format(cfg.format, {"text", "json"});
    const ZdPoly p = parse_poly(poly, m, {"x"});
    const DicksonResult r = dickson_classify(p);
    if (cfg.format == "json") {
        detail::emit(cfg, out, detail::dump(io::dickson_json(p, r)));
    } else if (r.is_permutation) {
        detail::emit(cfg, out, "permutation\nnormal form: " + to_string(*r.normal_form) + "\n");
    } else {
        detail::emit(cfg, out, "not a permutation\n");
    }
    return 0;
}

/// Quick end-to-end sanity pass; exit 3 if anything disagrees.
inline int cmd_selftest(const RunConfig &cfg, std::ostream &out) {
    int failed = 0;
    auto check = [&](const std::string &name, bool ok) {
        out << (ok ? "ok   " : "FAIL ") << name << "\n";
        failed += ok ? 0 : 1;
    };
    const Modulus m3(3), m5(5);
    check("contexts d=3 n=2 count 40", enumerate_contexts(m3, 2).size() == 40);
    check("contexts d=5 n=2 count 156", enumerate_contexts(m5, 2).size() == 156);
    check("table1 d=5 count 30", table1_contexts(m5).size() == 30);
    const auto strong = decide_strong_contextuality(PhaseFunctionState::parse("j^2*k", m5),
                                                    DecideOptions{Strategy::Table1First, true, cfg.threads});
    check("j^2*k at d=5 strongly contextual", strong.strongly_contextual && strong.full_scan_count == 0);
    check("certificate replays", recheck_certificate(strong) == 0);
    const auto cs = decide_strong_contextuality(PhaseFunctionState::parse("j*k^2", m3),
                                                DecideOptions{Strategy::FullScan, true, cfg.threads});
    check("j*k^2 at d=3 strongly contextual", cs.strongly_contextual);
    const auto zero = decide_strong_contextuality(PhaseFunctionState::parse("0", m3),
                                                  DecideOptions{Strategy::Table1First, true, cfg.threads});
    check("0 at d=3 not strongly contextual", !zero.strongly_contextual && recheck_certificate(zero) == 0);
    check("x^3+1 permutes Z_5", dickson_classify(parse_poly("x^3+1", m5, {"x"})).is_permutation);
    check("x^2 does not permute Z_5", !dickson_classify(parse_poly("x^2", m5, {"x"})).is_permutation);
    return failed ? kVerificationFailed : 0;
}

/// Parses argv and dispatches. Diagnostics go to `err`; artifacts to `out`
/// (or the --output file).
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Strong contextuality of two-qudit magic states"};
    app.require_subcommand(1);
    RunConfig cfg;
    Theorem1Options t1;
    ContextsOptions ctx_opt;
    std::string poly;

    auto common = [&](CLI::App *sub, bool with_phi) {
        sub->add_option("--d", cfg.d, "odd prime dimension")->required();
        if (with_phi) {
            sub->add_option("--phi", cfg.phi, "phase polynomial in j,k (or x,y)")->required();
        }
        sub->add_option("--format", cfg.format, "text, json or csv");
        sub->add_option("--output", cfg.output, "write the artifact to this path");
        sub->add_option("--threads", cfg.threads, "worker threads (default: $QCONTEXT_THREADS or 1)")
            ->check(CLI::Range(1u, 1024u));
        sub->add_flag("--unsafe-scale", cfg.unsafe_scale, "allow d > 13");
    };

    auto *analyze = app.add_subcommand("analyze", "decide strong contextuality of a state");
    common(analyze, true);
    analyze->add_option("--strategy", cfg.strategy, "table1_first or full_scan");

    auto *verify = app.add_subcommand("verify-theorem1", "check every phi1 j^2 k + phi2 j k^2 state");
    common(verify, false);
    verify->add_option("--strategy", cfg.strategy, "table1_first or full_scan");
    verify->add_flag("--include-quadratics", t1.include_quadratics, "add random quadratic parts");
    verify->add_option("--samples", t1.samples, "quadratic samples per state");
    verify->add_option("--seed", cfg.seed, "random seed");

    auto *model = app.add_subcommand("model", "tabulate the empirical model");
    common(model, true);
    model->add_option("--contexts", cfg.contexts, "table1 or all");

    auto *contexts = app.add_subcommand("contexts", "list maximal isotropic subspaces");
    common(contexts, false);
    contexts->add_option("--n", ctx_opt.n, "number of qudits (1 or 2)");
    contexts->add_flag("--count", ctx_opt.count_only, "print only the number of contexts");
    contexts->add_flag("--table1", ctx_opt.table1, "restrict to the d(d+1) Table 1 contexts");

    auto *cf = app.add_subcommand("cf", "contextual fraction by linear programming");
    common(cf, true);
    cf->add_option("--contexts", cfg.contexts, "table1 or all");

    auto *dickson = app.add_subcommand("dickson", "classify a cubic as a permutation polynomial");
    common(dickson, false);
    dickson->add_option("--poly", poly, "polynomial in x")->required();

    auto *selftest = app.add_subcommand("selftest", "run built-in sanity checks");
    selftest->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }

    try {
        if (analyze->parsed()) {
            return cmd_analyze(cfg, out);
        }
        if (verify->parsed()) {
            return cmd_verify_theorem1(cfg, t1, out);
        }
        if (model->parsed()) {
            if (cfg.format == "text") {
                cfg.format = "csv";
            }
            return cmd_model(cfg, out);
        }
        if (contexts->parsed()) {
            return cmd_contexts(cfg, ctx_opt, out);
        }
        if (cf->parsed()) {
            return cmd_cf(cfg, out);
        }
        if (dickson->parsed()) {
            return cmd_dickson(cfg, poly, out);
        }
        return cmd_selftest(cfg, out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

}  // namespace qcontext::cli
