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
#include <limits>
#include <utility>
#include <vector>

namespace qcontext::lp {

/// maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
///
/// The origin is feasible under b >= 0, so no phase one is needed.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;  // sparse rows of A
    std::vector<double> rhs;
};

enum class Status { Optimal, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::Optimal;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

/// Dense dictionary simplex. Entering column by largest reduced cost;
/// after a run of degenerate pivots it switches to Bland's rule for good,
/// which rules out cycling.
inline Solution maximize(const Problem &problem, double eps = 1e-9, std::size_t max_pivots = 1000000) {
    const std::size_t n = problem.num_vars;
    const std::size_t m = problem.rows.size();
    const std::size_t width = n + 1;
    std::vector<double> t((m + 1) * width, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double & { return t[i * width + j]; };

    for (std::size_t j = 0; j < n; ++j) {
        at(0, j) = -problem.objective[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto &[j, a] : problem.rows[i]) {
            at(i + 1, j) += a;
        }
        at(i + 1, n) = problem.rhs[i];
    }
    std::vector<std::size_t> basic(m), nonbasic(n);
    for (std::size_t j = 0; j < n; ++j) {
        nonbasic[j] = j;
    }
    for (std::size_t i = 0; i < m; ++i) {
        basic[i] = n + i;
    }

    Solution sol;
    bool bland = false;
    std::size_t degenerate_run = 0;
    while (true) {
        std::size_t enter = n;
        double best = -eps;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = at(0, j);
            if (r >= -eps) {
                continue;
            }
            if (bland ? (enter == n || nonbasic[j] < nonbasic[enter]) : r < best) {
                enter = j;
                best = r;
            }
        }
        if (enter == n) {
            break;
        }
        std::size_t leave = m;
        double ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double a = at(i + 1, enter);
            if (a <= eps) {
                continue;
            }
            const double r = at(i + 1, n) / a;
            if (r < ratio - 1e-12 || (r <= ratio + 1e-12 && leave != m && basic[i] < basic[leave])) {
                ratio = r;
                leave = i;
            }
        }
        if (leave == m) {
            sol.status = Status::Unbounded;
            return sol;
        }
        if (++sol.pivots > max_pivots) {
            sol.status = Status::IterationLimit;
            return sol;
        }
        if (at(leave + 1, n) <= eps) {
            if (++degenerate_run > 50) {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }

        const std::size_t r = leave + 1;
        const double pivot = at(r, enter);
        for (std::size_t j = 0; j < width; ++j) {
            if (j != enter) {
                at(r, j) /= pivot;
            }
        }
        at(r, enter) = 1.0 / pivot;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == r) {
                continue;
            }
            const double f = at(i, enter);
            if (f == 0.0) {
                continue;
            }
            double *dst = &at(i, 0);
            const double *src = &at(r, 0);
            for (std::size_t j = 0; j < width; ++j) {
                if (j != enter) {
                    dst[j] -= f * src[j];
                }
            }
            dst[enter] = -f / pivot;
        }
        std::swap(basic[leave], nonbasic[enter]);
    }

    sol.objective = at(0, n);
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basic[i] < n) {
            sol.x[basic[i]] = at(i + 1, n);
        }
    }
    return sol;
}

}  // namespace qcontext::lp
