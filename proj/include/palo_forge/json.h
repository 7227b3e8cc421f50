// Copyright 2026 The palo-forge Authors
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

#include <string_view>

#include <json.hpp>

namespace palo_forge {

/// Insertion-ordered so emitted documents keep a stable, readable key order.
using Json = nlohmann::ordered_json;

/// Parses one JSON document, mapping syntax errors to ParseError.
Json parse_json(std::string_view text, std::string_view what);

/// Compact single-line encoding used for JSON Lines files.
std::string to_jsonl_line(Json const& value);

}  // namespace palo_forge
