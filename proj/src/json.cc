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

#include "palo_forge/json.h"

#include <string>

#include "palo_forge/errors.h"

namespace palo_forge {

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (Json::parse_error const& e) {
    // nlohmann reports the 1-based index of the byte that failed.
    throw ParseError("malformed " + std::string(what) + ": " + e.what(),
                     e.byte == 0 ? 0 : e.byte - 1);
  }
}

std::string to_jsonl_line(Json const& value) { return value.dump() + "\n"; }

}  // namespace palo_forge
