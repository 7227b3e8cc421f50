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

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace palo_forge {

std::string read_file(std::filesystem::path const& path);

/// Writes to a sibling temp file, fsyncs, then renames over `path`, so
/// readers observe either the old or the new content, never a torn file.
void write_file_atomic(std::filesystem::path const& path,
                       std::string_view contents);

/// Calls `fn(line, line_number)` for every non-blank line (1-based numbers).
void for_each_line(std::string_view text,
                   std::function<void(std::string_view, std::size_t)> const& fn);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace palo_forge
