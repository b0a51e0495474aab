// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON instance files (schema "rsp-1"). Doubles are written with 17
// significant digits so files round-trip exactly.

#include <string>

#include <json.hpp>

#include "rsp/problem.hpp"

namespace rsp {

inline constexpr const char* kSchemaVersion = "rsp-1";

nlohmann::json set_to_json(const SetDescriptor& s);
SetDescriptor set_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, std::size_t cols_if_empty = 0);

// Biaffine problems only; general oracles are code, not data.
nlohmann::json problem_to_json(const RobustProblem& p);
RobustProblem problem_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace rsp
