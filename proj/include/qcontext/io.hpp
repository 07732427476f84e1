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

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcontext/born.hpp"
#include "qcontext/hidden_vars.hpp"
#include "qcontext/phase_space.hpp"
#include "qcontext/poly.hpp"

namespace qcontext::io {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchemaVersion = "1";

inline Json point_json(const PhasePoint &v) {
    return Json(v.coords());
}

inline Json generators_json(const std::vector<PhasePoint> &gens) {
    Json out = Json::array();
    for (const auto &g : gens) {
        out.push_back(point_json(g));
    }
    return out;
}

inline Json contexts_json(const Modulus &m, std::size_t n, const std::vector<Context> &contexts) {
    Json out;
    out["schema"] = kSchemaVersion;
    out["modulus"] = m.value();
    out["particles"] = n;
    out["count"] = contexts.size();
    Json list = Json::array();
    for (const auto &c : contexts) {
        list.push_back(Json{{"label", c.label()}, {"generators", generators_json(c.generators())}});
    }
    out["contexts"] = std::move(list);
    return out;
}

inline Json certificate_json(const StrongContextualityCertificate &cert) {
    Json out;
    out["schema"] = kSchemaVersion;
    out["modulus"] = cert.input_state.modulus().value();
    out["state"] = cert.input_state.describe();
    out["analyzed_state"] = cert.analyzed_state.describe();
    out["reductions"] = cert.reductions;
    out["strategy"] = to_string(cert.strategy);
    out["verdict"] = cert.strongly_contextual ? "strongly_contextual" : "not_strongly_contextual";
    out["within_theorem_hypothesis"] = cert.within_theorem_hypothesis;
    out["stage_counts"] = Json{{"proof_path", cert.proof_path_count},
                               {"table1_scan", cert.table1_scan_count},
                               {"full_scan", cert.full_scan_count}};
    Json refs = Json::array();
    for (const auto &r : cert.refutations) {
        refs.push_back(Json{{"lambda", r.lambda.lam()},
                            {"context", r.context_label},
                            {"generators", generators_json(r.generators)},
                            {"outcome", r.outcome.values},
                            {"stage", to_string(r.stage)},
                            {"confirmed_kets", r.confirmed_kets}});
    }
    out["refutations"] = std::move(refs);
    if (cert.witness) {
        Json table = Json::array();
        for (const auto &row : cert.witness_table) {
            table.push_back(Json{{"context", row.context_label},
                                 {"generators", generators_json(row.generators)},
                                 {"outcome", row.outcome.values},
                                 {"probability", row.probability}});
        }
        out["witness"] = Json{{"lambda", cert.witness->lam()}, {"consistency", std::move(table)}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

inline Json model_json(const EmpiricalModel &model) {
    Json out;
    out["schema"] = kSchemaVersion;
    out["modulus"] = model.state.modulus().value();
    out["state"] = model.state.describe();
    Json contexts = Json::array();
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
        Json rows = Json::array();
        for (const auto &row : model.rows[c]) {
            Json r{{"outcome", row.outcome.values}, {"possible", row.possible}, {"probability", row.probability}};
            if (!row.possible) {
                Json witness = Json::array();
                for (const auto &roots : row.witness) {
                    witness.push_back(roots.counts());
                }
                r["zero_sum_witness"] = std::move(witness);
            }
            rows.push_back(std::move(r));
        }
        contexts.push_back(Json{{"label", model.contexts[c].label()},
                                {"generators", generators_json(model.contexts[c].generators())},
                                {"rows", std::move(rows)}});
    }
    out["contexts"] = std::move(contexts);
    return out;
}

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

inline std::string format_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f", p < 0 && p > -5e-13 ? 0.0 : p);
    return buf;
}

/// Columns: context,outcome,possible,probability
inline void write_model_csv(const EmpiricalModel &model, std::ostream &os) {
    os << "context,outcome,possible,probability\n";
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
        for (const auto &row : model.rows[c]) {
            os << csv_field(model.contexts[c].label()) << ',' << csv_field(to_string(row.outcome)) << ','
               << (row.possible ? "true" : "false") << ',' << format_probability(row.probability) << '\n';
        }
    }
}

inline Json cf_json(const EmpiricalModel &model, const ContextualFraction &cf) {
    Json out;
    out["schema"] = kSchemaVersion;
    out["modulus"] = model.state.modulus().value();
    out["state"] = model.state.describe();
    out["contexts"] = model.contexts.size();
    out["contextual_fraction"] = cf.cf;
    out["lp_rows"] = cf.lp_rows;
    out["lp_variables"] = cf.lp_vars;
    Json weights = Json::array();
    for (const auto &[hv, w] : cf.weights) {
        weights.push_back(Json{{"lambda", hv.lam()}, {"weight", w}});
    }
    out["noncontextual_weights"] = std::move(weights);
    return out;
}

inline Json dickson_json(const ZdPoly &p, const DicksonResult &r) {
    Json out;
    out["schema"] = kSchemaVersion;
    out["modulus"] = p.modulus().value();
    out["polynomial"] = to_string(p, {"x"});
    out["permutation"] = r.is_permutation;
    out["normal_form"] = r.normal_form ? Json(to_string(*r.normal_form)) : Json(nullptr);
    return out;
}

}  // namespace qcontext::io
