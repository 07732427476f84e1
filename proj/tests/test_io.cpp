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

#include <gtest/gtest.h>

#include <sstream>

#include "qcontext/io.hpp"

using namespace qcontext;

namespace {

PhaseFunctionState st(const char *text, std::int64_t d) {
    return PhaseFunctionState::parse(text, Modulus(d));
}

}  // namespace

TEST(io, certificate_json_fields) {
    const auto cert = decide_strong_contextuality(st("j^2*k + 3*j*k", 5));
    const auto j = io::certificate_json(cert);
    EXPECT_EQ(j["schema"], "1");
    EXPECT_EQ(j["modulus"], 5);
    EXPECT_EQ(j["state"], "j^2*k + 3*j*k");
    EXPECT_EQ(j["analyzed_state"], "j^2*k");
    EXPECT_EQ(j["reductions"][0], "strip_quadratic");
    EXPECT_EQ(j["verdict"], "strongly_contextual");
    ASSERT_EQ(j["refutations"].size(), 625u);
    const auto &first = j["refutations"][0];
    EXPECT_EQ(first["lambda"], nlohmann::json::parse("[0,0,0,0]"));
    EXPECT_TRUE(first.contains("context"));
    EXPECT_EQ(first["outcome"].size(), 2u);
    EXPECT_EQ(first["stage"], "proof_path");
    EXPECT_EQ(first["confirmed_kets"], 25);
    EXPECT_TRUE(j["witness"].is_null());
}

TEST(io, witness_json) {
    const auto j = io::certificate_json(decide_strong_contextuality(st("0", 3)));
    EXPECT_EQ(j["verdict"], "not_strongly_contextual");
    EXPECT_EQ(j["witness"]["consistency"].size(), 40u);
    EXPECT_GT(j["witness"]["consistency"][0]["probability"].get<double>(), 1e-9);
}

TEST(io, certificates_are_byte_identical_across_thread_counts) {
    for (const char *text : {"2*j^2*k + j*k^2", "j*k + k"}) {
        const auto a = io::certificate_json(decide_strong_contextuality(st(text, 5), {Strategy::Table1First, true, 1}));
        const auto b = io::certificate_json(decide_strong_contextuality(st(text, 5), {Strategy::Table1First, true, 4}));
        EXPECT_EQ(a.dump(2), b.dump(2)) << text;
    }
}

TEST(io, model_json_has_witnesses_for_impossible_rows) {
    const auto model = build_empirical_model(st("j^2*k", 5), table1_contexts(Modulus(5)));
    const auto j = io::model_json(model);
    EXPECT_EQ(j["schema"], "1");
    ASSERT_EQ(j["contexts"].size(), 30u);
    std::size_t impossible = 0;
    for (const auto &c : j["contexts"]) {
        for (const auto &row : c["rows"]) {
            if (!row["possible"].get<bool>()) {
                ++impossible;
                ASSERT_EQ(row["zero_sum_witness"].size(), 25u);
                for (const auto &counts : row["zero_sum_witness"]) {
                    for (const auto &x : counts) EXPECT_EQ(x, counts[0]);
                }
            } else {
                EXPECT_FALSE(row.contains("zero_sum_witness"));
            }
        }
    }
    EXPECT_GT(impossible, 0u);
}

TEST(io, model_csv_layout) {
    const auto model = build_empirical_model(st("0", 3), table1_contexts(Modulus(3)));
    std::ostringstream os;
    io::write_model_csv(model, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "context,outcome,possible,probability");
    std::getline(is, line);
    EXPECT_EQ(line, "I:alpha=0,\"(0,0)\",true,0.333333333333");
    std::size_t rows = 1;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 12u * 9u);
}

TEST(io, csv_quoting) {
    EXPECT_EQ(io::csv_field("plain"), "plain");
    EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(io, contexts_json) {
    const auto j = io::contexts_json(Modulus(3), 2, table1_contexts(Modulus(3)));
    EXPECT_EQ(j["count"], 12);
    EXPECT_EQ(j["contexts"][0]["label"], "I:alpha=0");
    EXPECT_EQ(j["contexts"][0]["generators"], nlohmann::json::parse("[[1,0,0,0],[0,0,0,1]]"));
}

TEST(io, dickson_json) {
    const auto p = parse_poly("x^3 + 1", Modulus(5), {"x"});
    const auto j = io::dickson_json(p, dickson_classify(p));
    EXPECT_EQ(j["polynomial"], "x^3 + 1");
    EXPECT_EQ(j["permutation"], true);
    EXPECT_EQ(j["normal_form"], "1*(x + 0)^3 + 1");
}
