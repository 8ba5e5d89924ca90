// Copyright 2026 The povm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "povm/decompose.hpp"

// JSON documents:
//
//   POVM         {"dim": d, "effects": [{"re": [[...]], "im": [[...]]}, ...]}
//   certificate  {"target": <povm>,
//                 "components": [{"weight": w, "extremal": <povm>,
//                                 "relabel": [i1, ..., iM]}, ...]}
//
// Matrices are row-major nested arrays. Relabel entries are 1-based in the
// file and 0-based in memory. Doubles are written with round-trip
// precision. Schema problems raise Error(ErrorKind::Parse).

namespace povm::io {

using json = nlohmann::json;

json to_json(const CMatrix<double>& m);
CMatrix<double> matrix_from_json(const json& j, Index dim);

json to_json(const Povm<double>& p);
Povm<double> povm_from_json(const json& j);

json to_json(const DecompositionCertificate<double>& c);
DecompositionCertificate<double> certificate_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

Povm<double> read_povm(const std::filesystem::path& path);
DecompositionCertificate<double> read_certificate(const std::filesystem::path& path);

/// Matrix with 6 significant digits, one row per line.
std::string format_matrix(const CMatrix<double>& m, const std::string& indent = "  ");

}  // namespace povm::io
