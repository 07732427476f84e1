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

#include <cstdint>
#include <string>

#include "qcontext/error.hpp"

namespace qcontext {

/// An element of Z_d, always held as its representative in [0, d).
using Residue = std::int64_t;

/// An odd prime modulus d. Construction rejects composites and d = 2.
class Modulus {
   public:
    explicit Modulus(std::int64_t d) : d_(d) {
        if (d < 3 || !is_prime(d)) {
            throw Error(ErrorKind::NotPrime, std::to_string(d) + " is not an odd prime");
        }
        half_ = (d + 1) / 2;
    }

    static bool is_prime(std::int64_t n) {
        if (n < 2) {
            return false;
        }
        for (std::int64_t f = 2; f * f <= n; ++f) {
            if (n % f == 0) {
                return false;
            }
        }
        return true;
    }

    std::int64_t value() const noexcept {
        return d_;
    }

    Residue reduce(std::int64_t a) const noexcept {
        std::int64_t r = a % d_;
        return r < 0 ? r + d_ : r;
    }

    Residue add(Residue a, Residue b) const noexcept {
        return reduce(a + b);
    }
    Residue sub(Residue a, Residue b) const noexcept {
        return reduce(a - b);
    }
    Residue mul(Residue a, Residue b) const noexcept {
        return reduce(reduce(a) * reduce(b));
    }
    Residue neg(Residue a) const noexcept {
        return reduce(-a);
    }

    Residue pow(Residue base, std::uint64_t exponent) const noexcept {
        Residue result = 1 % d_;
        Residue b = reduce(base);
        while (exponent > 0) {
            if (exponent & 1) {
                result = result * b % d_;
            }
            b = b * b % d_;
            exponent >>= 1;
        }
        return result;
    }

    /// Multiplicative inverse via Fermat's little theorem.
    Residue inv(Residue a) const {
        Residue r = reduce(a);
        if (r == 0) {
            throw Error(ErrorKind::ZeroInverse, "0 has no inverse modulo " + std::to_string(d_));
        }
        return pow(r, static_cast<std::uint64_t>(d_ - 2));
    }

    /// 2^{-1} mod d.
    Residue half() const noexcept {
        return half_;
    }

    friend bool operator==(const Modulus &a, const Modulus &b) noexcept {
        return a.d_ == b.d_;
    }

   private:
    std::int64_t d_;
    Residue half_;
};

inline Residue inv(Residue a, const Modulus &m) {
    return m.inv(a);
}

}  // namespace qcontext
