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
#include <string>
#include <vector>

#include "qcontext/dense.hpp"
#include "qcontext/error.hpp"
#include "qcontext/poly.hpp"
#include "qcontext/zmod.hpp"

namespace qcontext {

/// |phi> proportional to sum_j omega^{phi(j)} |j> on n qudits.
class PhaseFunctionState {
   public:
    explicit PhaseFunctionState(ZdPoly phi) : phi_(std::move(phi)) {
    }

    static PhaseFunctionState parse(std::string_view text, Modulus m) {
        return PhaseFunctionState(parse_poly2(text, m));
    }

    const Modulus &modulus() const noexcept {
        return phi_.modulus();
    }
    std::size_t particles() const noexcept {
        return phi_.num_vars();
    }
    const ZdPoly &phi() const noexcept {
        return phi_;
    }

    /// phi evaluated on every ket, first qudit most significant.
    std::vector<Residue> phase_table() const {
        const std::size_t count = dense::ket_count(modulus(), particles());
        std::vector<Residue> table(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            table[idx] = phi_.eval(dense::ket_label(modulus(), particles(), idx));
        }
        return table;
    }

    std::string describe() const {
        return to_string(phi_);
    }

    friend bool operator==(const PhaseFunctionState &a, const PhaseFunctionState &b) {
        return a.phi_ == b.phi_;
    }

   private:
    ZdPoly phi_;
};

/// Decomposition phi = phi1 j^2 k + phi2 j k^2 + (j^3, k^3 terms) + q(j, k).
struct StrongnessReport {
    bool is_strong = false;
    Residue phi1 = 0;
    Residue phi2 = 0;
    ZdPoly quadratic_part;
    ZdPoly local_cubic_terms;
};

inline void require_two_qudits(const PhaseFunctionState &s, const char *what) {
    if (s.particles() != 2) {
        throw Error(ErrorKind::Unsupported, std::string(what) + " is defined for two-qudit states");
    }
}

inline StrongnessReport strongness(const PhaseFunctionState &state) {
    require_two_qudits(state, "strongness");
    ZdPoly phi = state.phi().fermat_reduced();
    if (phi.total_degree() > 3) {
        throw Error(ErrorKind::Unsupported, "strongness needs a polynomial of degree <= 3");
    }
    const Modulus &m = state.modulus();
    StrongnessReport r{false, phi.coefficient({2, 1}), phi.coefficient({1, 2}), phi.degree_band(0, 2),
                       ZdPoly(m, 2)};
    r.local_cubic_terms.add_term({3, 0}, phi.coefficient({3, 0}));
    r.local_cubic_terms.add_term({0, 3}, phi.coefficient({0, 3}));
    r.is_strong = r.local_cubic_terms.is_zero() && (r.phi1 != 0 || r.phi2 != 0);
    return r;
}

/// Drops every term of degree <= 2. Applying the diagonal Clifford U_q^dagger
/// maps the state to this one.
inline PhaseFunctionState strip_quadratic(const PhaseFunctionState &state) {
    require_two_qudits(state, "strip_quadratic");
    ZdPoly phi = state.phi().fermat_reduced();
    return PhaseFunctionState(phi.degree_band(3, static_cast<unsigned>(std::max(3, phi.total_degree()))));
}

/// phi(j, k) -> phi(k, j).
inline PhaseFunctionState swap_qudits(const PhaseFunctionState &state) {
    require_two_qudits(state, "swap_qudits");
    const std::size_t order[] = {1, 0};
    return PhaseFunctionState(state.phi().permute_vars(order));
}

/// Clifford-hierarchy level of the diagonal gate U_phi, read from the degree
/// of phi. Degree 3 is only characterised for d > 3.
inline int diagonal_gate_level(const ZdPoly &phi) {
    const int degree = phi.fermat_reduced().total_degree();
    if (degree > 3) {
        throw Error(ErrorKind::OutsideCharacterization, "degree " + std::to_string(degree) + " exceeds 3");
    }
    if (degree == 3 && phi.modulus().value() == 3) {
        throw Error(ErrorKind::OutsideCharacterization, "cubic phases at d = 3 are outside the characterization");
    }
    return degree <= 1 ? 1 : degree;
}

/// Builds U_phi numerically and checks U_phi in C_{claimed_level} by
/// recursive conjugation of all Weyl operators. Dense scale only.
inline bool verify_level_by_conjugation(const ZdPoly &phi, int claimed_level) {
    const std::int64_t d = phi.modulus().value();
    if ((d != 3 && d != 5) || phi.num_vars() > 2) {
        throw Error(ErrorKind::OracleScaleExceeded, "conjugation oracle runs for d in {3, 5} and n <= 2");
    }
    if (claimed_level < 1) {
        return false;
    }
    dense::HierarchyOracle oracle(phi.modulus(), phi.num_vars());
    return oracle.in_level(dense::diagonal_gate(phi), claimed_level);
}

}  // namespace qcontext
