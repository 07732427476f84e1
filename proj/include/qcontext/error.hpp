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

#include <stdexcept>
#include <string>

namespace qcontext {

enum class ErrorKind {
    NotPrime,
    ZeroInverse,
    ArityMismatch,
    UnsupportedModulus,
    DimensionMismatch,
    Unsupported,
    OutsideCharacterization,
    OracleScaleExceeded,
    IncompatibleContext,
    NonCommuting,
    IncompleteProbe,
    InfeasibleModel,
    ScaleError,
    ParseError,
};

inline const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::ZeroInverse: return "ZeroInverse";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::UnsupportedModulus: return "UnsupportedModulus";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::OutsideCharacterization: return "OutsideCharacterization";
        case ErrorKind::OracleScaleExceeded: return "OracleScaleExceeded";
        case ErrorKind::IncompatibleContext: return "IncompatibleContext";
        case ErrorKind::NonCommuting: return "NonCommuting";
        case ErrorKind::IncompleteProbe: return "IncompleteProbe";
        case ErrorKind::InfeasibleModel: return "InfeasibleModel";
        case ErrorKind::ScaleError: return "ScaleError";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// All library failures are reported with this exception type; `kind()`
/// identifies the failure class independently of the message text.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

}  // namespace qcontext
