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

#include <random>
#include <set>

#include "oracles.hpp"
#include "qcontext/dense.hpp"
#include "qcontext/phase_space.hpp"

using namespace qcontext;

namespace {

PhasePoint pt(std::int64_t d, std::vector<Residue> c) {
    return PhasePoint(Modulus(d), std::move(c));
}

PhasePoint random_point(const Modulus &m, std::size_t n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<Residue> u(0, m.value() - 1);
    std::vector<Residue> c(2 * n);
    for (auto &x : c) {
        x = u(rng);
    }
    return PhasePoint(m, c);
}

}  // namespace

TEST(phase_point, rejects_odd_length) {
    EXPECT_THROW(pt(5, {1, 2, 3}), Error);
    EXPECT_THROW(pt(5, {}), Error);
}

TEST(phase_point, reduces_coordinates) {
    EXPECT_EQ(pt(5, {6, -1}), pt(5, {1, 4}));
    EXPECT_EQ(to_string(pt(5, {1, 0, 0, 0})), "(1,0,0,0)");
}

TEST(symplectic, examples) {
    for (Residue a = 0; a < 5; ++a) {
        EXPECT_EQ(symplectic_product(pt(5, {1, 0, 0, 0}), pt(5, {0, 0, a, 1})), 0);
    }
    const PhasePoint v = pt(5, {2, 3, 1, 4});
    EXPECT_EQ(symplectic_product(v, v), 0);
    EXPECT_EQ(symplectic_product(pt(5, {0, 1, 0, 0}), pt(5, {1, 0, 0, 0})), 4);
}

TEST(symplectic, dimension_mismatch) {
    try {
        symplectic_product(pt(5, {1, 0}), pt(5, {1, 0, 0, 0}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
    EXPECT_THROW(symplectic_product(pt(5, {1, 0}), pt(7, {1, 0})), Error);
}

TEST(symplectic, bilinear_and_antisymmetric) {
    std::mt19937_64 rng(3);
    for (std::int64_t d : {3, 5, 7, 11, 13}) {
        Modulus m(d);
        std::uniform_int_distribution<Residue> s(0, d - 1);
        for (int trial = 0; trial < 200; ++trial) {
            const PhasePoint u = random_point(m, 2, rng), v = random_point(m, 2, rng), w = random_point(m, 2, rng);
            const Residue a = s(rng);
            EXPECT_EQ(symplectic_product(u, v), m.neg(symplectic_product(v, u)));
            EXPECT_EQ(symplectic_product(u + a * v, w),
                      m.add(symplectic_product(u, w), m.mul(a, symplectic_product(v, w))));
            EXPECT_EQ(symplectic_product(u, v), oracle::symp(u.coords(), v.coords(), d));
        }
    }
}

TEST(weyl, composition_examples) {
    Modulus m(5);
    const WeylOperator u(pt(5, {1, 0, 0, 0}), 0), v(pt(5, {0, 0, 3, 1}), 0);
    ASSERT_TRUE(commutes(u, v));
    EXPECT_EQ(compose(u, v).point, u.point + v.point);
    EXPECT_EQ(compose(u, v), compose(v, u));

    const WeylOperator w(pt(5, {2, 3, 1, 4}), 2), winv(-w.point, m.neg(w.phase_exp));
    const WeylOperator id = compose(w, winv);
    EXPECT_TRUE(id.point.is_zero());
    EXPECT_EQ(id.phase_exp, 0);
}

TEST(weyl, d_fold_power_is_identity) {
    std::mt19937_64 rng(5);
    for (std::int64_t d : {3, 5, 7}) {
        Modulus m(d);
        for (int trial = 0; trial < 50; ++trial) {
            const WeylOperator w(random_point(m, 2, rng), 0);
            WeylOperator acc = w;
            for (int i = 1; i < d; ++i) {
                acc = compose(acc, w);
            }
            EXPECT_TRUE(acc.point.is_zero());
            EXPECT_EQ(acc.phase_exp, 0);
        }
    }
}

TEST(weyl, d_fold_power_matches_dense_matrix_power) {
    const std::int64_t d = 3;
    for (Residue p = 0; p < d; ++p) {
        for (Residue q = 0; q < d; ++q) {
            const oracle::Mat w = oracle::weyl1(d, p, q);
            oracle::Mat acc = oracle::identity(3);
            for (int i = 0; i < d; ++i) {
                acc = oracle::matmul(w, acc);
            }
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(acc[r][c] - (r == c ? 1.0 : 0.0)), 0.0, 1e-9);
        }
    }
}

TEST(weyl, compose_matches_dense_product) {
    std::mt19937_64 rng(9);
    for (std::int64_t d : {3, 5}) {
        Modulus m(d);
        for (int trial = 0; trial < 30; ++trial) {
            const WeylOperator u(random_point(m, 2, rng), 0), v(random_point(m, 2, rng), 0);
            const WeylOperator uv = compose(u, v);
            const oracle::Mat lhs = oracle::matmul(oracle::weyl(d, u.point.coords()), oracle::weyl(d, v.point.coords()));
            const oracle::Mat rhs = oracle::weyl(d, uv.point.coords());
            const oracle::C phase = oracle::root(d, uv.phase_exp);
            for (std::size_t r = 0; r < lhs.size(); ++r)
                for (std::size_t c = 0; c < lhs.size(); ++c) EXPECT_NEAR(std::abs(lhs[r][c] - phase * rhs[r][c]), 0.0, 1e-9);
            // The library's monomial matrices agree with the dense reference.
            const auto mono = dense::weyl_matrix(u.point);
            for (std::size_t c = 0; c < lhs.size(); ++c) {
                const oracle::Mat ref = oracle::weyl(d, u.point.coords());
                EXPECT_NEAR(std::abs(ref[mono.row[c]][c] - mono.value[c]), 0.0, 1e-9);
            }
        }
    }
}

TEST(weyl, compose_is_associative) {
    std::mt19937_64 rng(21);
    for (std::int64_t d : {3, 5, 11, 13}) {
        Modulus m(d);
        std::uniform_int_distribution<Residue> s(0, d - 1);
        for (int trial = 0; trial < 100; ++trial) {
            const WeylOperator a(random_point(m, 2, rng), s(rng)), b(random_point(m, 2, rng), s(rng)),
                c(random_point(m, 2, rng), s(rng));
            EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
            EXPECT_EQ(compose(a, b).point, a.point + b.point);
        }
    }
}

TEST(weyl, commutes_iff_symplectic_zero) {
    std::mt19937_64 rng(23);
    Modulus m(5);
    for (int trial = 0; trial < 200; ++trial) {
        const PhasePoint u = random_point(m, 2, rng), v = random_point(m, 2, rng);
        EXPECT_EQ(commutes(WeylOperator(u, 0), WeylOperator(v, 0)), symplectic_product(u, v) == 0);
        EXPECT_EQ(commutes(WeylOperator(u, 0), WeylOperator(v, 0)),
                  compose(WeylOperator(u, 0), WeylOperator(v, 0)) == compose(WeylOperator(v, 0), WeylOperator(u, 0)));
    }
}

TEST(context, validates_generators) {
    EXPECT_EQ([] {
        try {
            Context c({pt(5, {1, 0, 0, 0}), pt(5, {0, 1, 0, 0})});
        } catch (const Error &e) {
            return e.kind();
        }
        return ErrorKind::ParseError;
    }(), ErrorKind::NonCommuting);
    EXPECT_THROW(Context({pt(5, {1, 0, 0, 0}), pt(5, {2, 0, 0, 0})}), Error);
    EXPECT_THROW(Context({pt(5, {1, 0, 0, 0})}), Error);
}

TEST(context, elements_and_coordinates) {
    const Context c({pt(5, {1, 0, 2, 0}), pt(5, {0, 1, 3, 2})});
    EXPECT_EQ(c.elements().size(), 25u);
    std::set<PhasePoint> distinct(c.elements().begin(), c.elements().end());
    EXPECT_EQ(distinct.size(), 25u);
    const PhasePoint v = 2 * c.generators()[0] + 3 * c.generators()[1];
    auto coords = c.coordinates_of(v);
    ASSERT_TRUE(coords);
    EXPECT_EQ(*coords, (std::vector<Residue>{2, 3}));
    EXPECT_FALSE(c.contains(pt(5, {0, 0, 1, 0})));
}

TEST(context, same_subspace_ignores_basis_choice) {
    const Context a({pt(5, {1, 0, 2, 0}), pt(5, {0, 1, 3, 2})});
    const Context b({pt(5, {1, 1, 0, 2}), pt(5, {2, 0, 4, 0})});
    EXPECT_TRUE(a.same_subspace(b));
    EXPECT_EQ(a.canonical_basis(), b.canonical_basis());
}

TEST(enumerate_contexts, counts_match_bruteforce) {
    EXPECT_EQ(enumerate_contexts(Modulus(3), 1).size(), 4u);
    EXPECT_EQ(enumerate_contexts(Modulus(3), 2).size(), 40u);
    EXPECT_EQ(enumerate_contexts(Modulus(5), 2).size(), 156u);
    for (std::int64_t d : {3, 5, 7}) {
        for (std::size_t n : {1u, 2u}) {
            EXPECT_EQ(static_cast<std::int64_t>(enumerate_contexts(Modulus(d), n).size()),
                      oracle::count_lagrangians(d, n))
                << "d=" << d << " n=" << n;
        }
    }
}

TEST(enumerate_contexts, isotropic_distinct_and_deterministic) {
    for (std::int64_t d : {3, 5}) {
        const auto ctxs = enumerate_contexts(Modulus(d), 2);
        std::set<std::vector<PhasePoint>> bases;
        for (const auto &c : ctxs) {
            for (const auto &u : c.elements()) {
                for (const auto &v : c.elements()) {
                    ASSERT_EQ(symplectic_product(u, v), 0);
                }
            }
            bases.insert(c.canonical_basis());
        }
        EXPECT_EQ(bases.size(), ctxs.size());
        for (std::size_t a = 0; a < ctxs.size(); ++a) {
            for (std::size_t b = a + 1; b < ctxs.size(); ++b) {
                std::size_t shared = 0;
                for (const auto &v : ctxs[a].elements()) {
                    shared += ctxs[b].contains(v);
                }
                EXPECT_LT(shared, static_cast<std::size_t>(d * d));
            }
        }
        const auto again = enumerate_contexts(Modulus(d), 2);
        for (std::size_t i = 0; i < ctxs.size(); ++i) {
            EXPECT_EQ(ctxs[i].label(), again[i].label());
        }
    }
}

TEST(enumerate_contexts, refuses_three_qudits) {
    try {
        enumerate_contexts(Modulus(3), 3);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
    }
}

TEST(table1, shape_and_labels) {
    const auto t = table1_contexts(Modulus(5));
    ASSERT_EQ(t.size(), 30u);
    EXPECT_EQ(t[2].label(), "I:alpha=2");
    EXPECT_EQ(t[5 + 4].label(), "II:alpha=4");
    EXPECT_EQ(t[table1_index(Modulus(5), Table1Family::III, 1, 3)].label(), "III:alpha=1,beta=3");
    EXPECT_EQ(t[10].generators()[0], pt(5, {1, 0, 1, 0}));
    EXPECT_EQ(t[10].generators()[1], pt(5, {0, 1, 0, 4}));
    for (const auto &c : t) {
        EXPECT_TRUE(commutes(c.generators()[0], c.generators()[1]));
    }
}

TEST(table1, index_round_trip) {
    for (std::int64_t d : {3, 5, 11}) {
        Modulus m(d);
        const auto t = table1_contexts(m);
        for (Residue a = 0; a < d; ++a) {
            EXPECT_EQ(t[table1_index(m, Table1Family::I, a)].label(), "I:alpha=" + std::to_string(a));
            EXPECT_EQ(t[table1_index(m, Table1Family::II, a)].label(), "II:alpha=" + std::to_string(a));
            for (Residue b = 1; b < d; ++b) {
                EXPECT_EQ(t[table1_index(m, Table1Family::III, a, b)].label(),
                          "III:alpha=" + std::to_string(a) + ",beta=" + std::to_string(b));
            }
        }
    }
}

TEST(table1, contained_in_full_enumeration) {
    for (std::int64_t d : {3, 5}) {
        const auto all = enumerate_contexts(Modulus(d), 2);
        const auto t = table1_contexts(Modulus(d));
        std::set<std::vector<PhasePoint>> seen;
        for (const auto &c : t) {
            bool found = false;
            for (const auto &e : all) {
                found |= e.same_subspace(c);
            }
            EXPECT_TRUE(found) << c.label();
            seen.insert(c.canonical_basis());
        }
        EXPECT_EQ(seen.size(), t.size());
    }
}
