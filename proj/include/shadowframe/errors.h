// Copyright 2026 The shadowframe Authors
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

#ifndef SHADOWFRAME_ERRORS_H
#define SHADOWFRAME_ERRORS_H

#include <stdexcept>
#include <string>

namespace shadowframe {

/// Operands live in different Hilbert-space dimensions, or an index is out of range.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input violates a structural precondition (non-Hermitian, non-orthonormal, bad spectrum...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A quantity is mathematically undefined for the given input: a non-informationally-complete
/// POVM where an inverse frame operator is required, a prior with vanishing outcome
/// probabilities, parameters outside a formula's domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A file could not be read or written, or did not parse.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shadowframe

#endif
