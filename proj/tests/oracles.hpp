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

// Independent reference computations used by the tests. Nothing here calls
// into the library except for polynomial evaluation and the modulus type.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "qcontext/poly.hpp"
#include "qcontext/zmod.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

inline std::int64_t mod(std::int64_t a, std::int64_t d) {
    return ((a % d) + d) % d;
}

inline std::int64_t symp(const std::vector<std::int64_t> &v, const std::vector<std::int64_t> &w, std::int64_t d) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); i += 2) {
        s += v[i] * w[i + 1] - w[i] * v[i + 1];
    }
    return mod(s, d);
}

inline std::vector<std::int64_t> digits(std::int64_t idx, std::int64_t d, std::size_t len) {
    std::vector<std::int64_t> out(len);
    for (std::size_t i = len; i-- > 0;) {
        out[i] = idx % d;
        idx /= d;
    }
    return out;
}

inline std::int64_t ipow(std::int64_t b, std::size_t e) {
    std::int64_t r = 1;
    while (e--) {
        r *= b;
    }
    return r;
}

/// Number of Lagrangian subspaces of Z_d^{2n}, n in {1, 2}, by counting
/// ordered isotropic bases and dividing by |GL_n(Z_d)|.
inline std::int64_t count_lagrangians(std::int64_t d, std::size_t n) {
    const std::size_t len = 2 * n;
    const std::int64_t points = ipow(d, len);
    if (n == 1) {
        return (points - 1) / (d - 1);
    }
    std::int64_t bases = 0;
    for (std::int64_t a = 1; a < points; ++a) {
        const auto u = digits(a, d, len);
        for (std::int64_t b = 1; b < points; ++b) {
            const auto v = digits(b, d, len);
            if (symp(u, v, d) != 0) {
                continue;
            }
            bool parallel = false;
            for (std::int64_t c = 0; c < d && !parallel; ++c) {
                bool same = true;
                for (std::size_t i = 0; i < len; ++i) {
                    same &= mod(c * u[i], d) == v[i];
                }
                parallel = same;
            }
            bases += parallel ? 0 : 1;
        }
    }
    return bases / ((d * d - 1) * (d * d - d));
}

inline C root(std::int64_t d, std::int64_t e) {
    const double t = 2.0 * M_PI * static_cast<double>(mod(e, d)) / static_cast<double>(d);
    return {std::cos(t), std::sin(t)};
}

inline Mat identity(std::size_t n) {
    Mat m(n, std::vector<C>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Mat matmul(const Mat &a, const Mat &b) {
    const std::size_t n = a.size();
    Mat c(n, std::vector<C>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == C(0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

inline Mat kron(const Mat &a, const Mat &b) {
    const std::size_t n = a.size(), m = b.size();
    Mat c(n * m, std::vector<C>(n * m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) c[i * m + k][j * m + l] = a[i][j] * b[k][l];
    return c;
}

/// Single-qudit W(p, q) = omega^{-pq/2} Z^p X^q with X|j> = |j+1>,
/// Z|j> = omega^j |j>, built as dense matrices.
inline Mat weyl1(std::int64_t d, std::int64_t p, std::int64_t q) {
    const std::size_t n = static_cast<std::size_t>(d);
    Mat z(n, std::vector<C>(n)), x(n, std::vector<C>(n));
    for (std::size_t j = 0; j < n; ++j) {
        z[j][j] = root(d, p * static_cast<std::int64_t>(j));
        x[static_cast<std::size_t>(mod(static_cast<std::int64_t>(j) + q, d))][j] = 1.0;
    }
    const std::int64_t half = (d + 1) / 2;
    Mat w = matmul(z, x);
    const C ph = root(d, -half * p * q);
    for (auto &row : w)
        for (auto &e : row) e *= ph;
    return w;
}

inline Mat weyl(std::int64_t d, const std::vector<std::int64_t> &v) {
    Mat w = weyl1(d, v[0], v[1]);
    for (std::size_t i = 2; i < v.size(); i += 2) {
        w = kron(w, weyl1(d, v[i], v[i + 1]));
    }
    return w;
}

inline std::vector<C> phase_state(const qcontext::ZdPoly &phi, std::int64_t d) {
    const std::size_t n = phi.num_vars();
    const std::int64_t count = ipow(d, n);
    std::vector<C> psi(static_cast<std::size_t>(count));
    const double norm = 1.0 / std::sqrt(static_cast<double>(count));
    for (std::int64_t idx = 0; idx < count; ++idx) {
        const auto j = digits(idx, d, n);
        psi[static_cast<std::size_t>(idx)] = norm * root(d, phi.eval(std::span<const std::int64_t>(j)));
    }
    return psi;
}

/// ||Pi psi||^2 for the joint eigenspace of W(g_i) with eigenvalues omega^{o_i}.
inline double joint_probability(const std::vector<C> &psi, std::int64_t d,
                                const std::vector<std::vector<std::int64_t>> &gens,
                                const std::vector<std::int64_t> &outcome) {
    std::vector<C> cur = psi;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const Mat w = weyl(d, gens[g]);
        Mat pw = identity(psi.size());
        std::vector<C> acc(psi.size());
        for (std::int64_t x = 0; x < d; ++x) {
            const C c = root(d, -x * outcome[g]) / static_cast<double>(d);
            for (std::size_t i = 0; i < psi.size(); ++i) {
                C s = 0;
                for (std::size_t j = 0; j < psi.size(); ++j) s += pw[i][j] * cur[j];
                acc[i] += c * s;
            }
            pw = matmul(w, pw);
        }
        cur = acc;
    }
    double n = 0;
    for (const auto &a : cur) n += std::norm(a);
    return n;
}

/// Exhaustive permutation test of a one-variable polynomial given by its
/// coefficients (constant first).
inline bool permutes(const std::vector<std::int64_t> &coeffs, std::int64_t d) {
    std::vector<int> seen(static_cast<std::size_t>(d), 0);
    for (std::int64_t x = 0; x < d; ++x) {
        std::int64_t v = 0, xp = 1;
        for (auto c : coeffs) {
            v = mod(v + c * xp, d);
            xp = mod(xp * x, d);
        }
        if (seen[static_cast<std::size_t>(v)]++) {
            return false;
        }
    }
    return true;
}

}  // namespace oracle
