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

// JSON and CSV encodings.
//
// POVM files:
//
//   { "dim": d,
//     "elements": [ [[ [re, im], ... d ], ... d ], ... ],
//     "weights":  [ w_b, ... ],                          optional
//     "states":   [ [ [re, im], ... d ], ... ] }         optional, with "weights"
//
// Complex numbers are always [re, im] pairs.

#ifndef SHADOWFRAME_SERIALIZATION_H
#define SHADOWFRAME_SERIALIZATION_H

#include <span>
#include <string>

#include "json.hpp"
#include "shadowframe/frame.h"
#include "shadowframe/povm.h"
#include "shadowframe/simulator.h"
#include "shadowframe/variance.h"

namespace shadowframe {

using Json = nlohmann::json;

Json matrix_to_json(const CMatrix &m);
Json operator_to_json(const HermOperator &x);
/// Throws ValidationError on a malformed or non-Hermitian matrix.
HermOperator operator_from_json(const Json &j, int expected_dim = 0);

Json povm_to_json(const Povm &p);
/// Shape errors throw ValidationError. Positivity and completeness are not checked here.
Povm povm_from_json(const Json &j);
/// SHA-256 (hex) of the compact POVM JSON.
std::string povm_hash(const Povm &p);

Json dual_to_json(const DualFrame &dual);
Json eig_bounds_to_json(const EigenvalueBounds &e);
Json report_to_json(const VarianceReport &r);
Json summary_to_json(const RunSummary &s);
Json validation_to_json(const PovmValidation &v);

/// Header "low,high,count,density", one row per bin.
std::string histogram_csv(std::span<const HistogramBin> bins);
/// Shortest representation that round-trips a double.
std::string format_double(double x);

Json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace shadowframe

#endif
