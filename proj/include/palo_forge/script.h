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

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/language.h"

namespace palo_forge {

/// Decodes UTF-8 into code points. Ill-formed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

/// Long Unicode Script property name of a code point ("Latin", "Common").
std::string script_name(char32_t cp);

bool is_letter(char32_t cp);

/// Half-open range of code point indices.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(Span const&, Span const&) = default;
};

struct ScriptRun {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string script;

  friend bool operator==(ScriptRun const&, ScriptRun const&) = default;
};

/// Partitions `text` into maximal runs of one Unicode script. Code points
/// with Script=Inherited (combining marks) join the run before them.
std::vector<ScriptRun> classify_script_runs(std::string_view text);

using Whitelist = std::set<std::string, std::less<>>;

/// One term per line, UTF-8; blank lines and lines starting with '#' skipped.
Whitelist load_whitelist(std::filesystem::path const& path);
Whitelist parse_whitelist(std::string_view text);

/// Latin-script words left in a non-Latin target, merged into maximal runs
/// of adjacent offending words. Whitelisted words and the image placeholder
/// are exempt. Always empty for targets whose expected scripts include
/// Latin. Throws UsageError for English.
std::vector<Span> find_untranslated_segments(std::string_view text,
                                             Language lang,
                                             Whitelist const& whitelist = {});

}  // namespace palo_forge
