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

#include "qcontext/simplex.hpp"

using namespace qcontext::lp;

namespace {

Problem dense_problem(const std::vector<double> &c, const std::vector<std::vector<double>> &a,
                      const std::vector<double> &b) {
    Problem p;
    p.num_vars = c.size();
    p.objective = c;
    for (const auto &row : a) {
        std::vector<std::pair<std::size_t, double>> sparse;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] != 0) sparse.emplace_back(j, row[j]);
        }
        p.rows.push_back(std::move(sparse));
    }
    p.rhs = b;
    return p;
}

/// Best objective over all vertices of {A x <= b, x >= 0}, found by solving
/// every n x n subsystem of tight constraints.
double vertex_oracle(const std::vector<double> &c, const std::vector<std::vector<double>> &a,
                     const std::vector<double> &b) {
    const std::size_t n = c.size();
    std::vector<std::vector<double>> all = a;
    std::vector<double> rhs = b;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(n, 0.0);
        row[j] = -1.0;
        all.push_back(row);
        rhs.push_back(0.0);
    }
    double best = -1e300;
    const std::size_t total = all.size();
    std::vector<std::size_t> pick(n);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
        if (depth == n) {
            std::vector<std::vector<double>> mat(n, std::vector<double>(n + 1));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) mat[i][j] = all[pick[i]][j];
                mat[i][n] = rhs[pick[i]];
            }
            for (std::size_t col = 0; col < n; ++col) {
                std::size_t piv = col;
                for (std::size_t r = col; r < n; ++r)
                    if (std::abs(mat[r][col]) > std::abs(mat[piv][col])) piv = r;
                if (std::abs(mat[piv][col]) < 1e-12) return;
                std::swap(mat[piv], mat[col]);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == col) continue;
                    const double f = mat[r][col] / mat[col][col];
                    for (std::size_t k = col; k <= n; ++k) mat[r][k] -= f * mat[col][k];
                }
            }
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = mat[i][n] / mat[i][i];
            for (std::size_t r = 0; r < total; ++r) {
                double s = 0;
                for (std::size_t j = 0; j < n; ++j) s += all[r][j] * x[j];
                if (s > rhs[r] + 1e-9) return;
            }
            double obj = 0;
            for (std::size_t j = 0; j < n; ++j) obj += c[j] * x[j];
            best = std::max(best, obj);
            return;
        }
        for (std::size_t i = start; i < total; ++i) {
            pick[depth] = i;
            choose(i + 1, depth + 1);
        }
    };
    choose(0, 0);
    return best;
}

}  // namespace

TEST(simplex, textbook_problem) {
    const auto sol = maximize(dense_problem({3, 5}, {{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}));
    ASSERT_EQ(sol.status, Status::Optimal);
    EXPECT_NEAR(sol.objective, 36.0, 1e-9);
    EXPECT_NEAR(sol.x[0], 2.0, 1e-9);
    EXPECT_NEAR(sol.x[1], 6.0, 1e-9);
}

TEST(simplex, detects_unbounded) {
    EXPECT_EQ(maximize(dense_problem({1, 1}, {{-1, 1}}, {1})).status, Status::Unbounded);
}

TEST(simplex, empty_problem) {
    const auto sol = maximize(dense_problem({}, {}, {}));
    EXPECT_EQ(sol.status, Status::Optimal);
    EXPECT_EQ(sol.objective, 0.0);
}

TEST(simplex, survives_beale_cycling_example) {
    const auto sol = maximize(dense_problem({0.75, -20, 0.5, -6},
                                            {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}}, {0, 0, 1}));
    ASSERT_EQ(sol.status, Status::Optimal);
    EXPECT_NEAR(sol.objective, 1.25, 1e-9);
}

TEST(simplex, degenerate_packing) {
    // Many tied rows at zero right-hand side.
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i = 0; i < 6; ++i) {
        a.push_back({1, 1, 1});
        b.push_back(i == 5 ? 1.0 : 2.0);
        a.push_back({1, -1, 0});
        b.push_back(0.0);
    }
    const auto sol = maximize(dense_problem({1, 1, 1}, a, b));
    ASSERT_EQ(sol.status, Status::Optimal);
    EXPECT_NEAR(sol.objective, 1.0, 1e-9);
}

TEST(simplex, random_problems_match_vertex_enumeration) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> coef(-1.0, 3.0), rhs(0.0, 5.0);
    std::uniform_int_distribution<int> sparsity(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 3, m = 2 + trial % 5;
        std::vector<double> c(n);
        for (auto &x : c) x = coef(rng);
        std::vector<std::vector<double>> a(m, std::vector<double>(n));
        std::vector<double> b(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (auto &x : a[i]) x = sparsity(rng) == 0 ? 0.0 : coef(rng);
            b[i] = trial % 4 == 0 ? 0.0 : rhs(rng);
        }
        // Bounding row keeps every instance finite.
        a.push_back(std::vector<double>(n, 1.0));
        b.push_back(10.0);
        const auto sol = maximize(dense_problem(c, a, b));
        ASSERT_EQ(sol.status, Status::Optimal);
        const double expect = std::max(0.0, vertex_oracle(c, a, b));
        EXPECT_NEAR(sol.objective, expect, 1e-7) << "trial " << trial;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += a[i][j] * sol.x[j];
            EXPECT_LE(s, b[i] + 1e-7);
        }
        for (double x : sol.x) EXPECT_GE(x, -1e-9);
    }
}
