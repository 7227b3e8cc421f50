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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace palo_forge {

/// The ten supported languages, in table column order.
enum class Language : std::uint8_t {
  kEnglish,
  kChinese,
  kFrench,
  kSpanish,
  kRussian,
  kJapanese,
  kArabic,
  kHindi,
  kBengali,
  kUrdu,
};

inline constexpr std::size_t kLanguageCount = 10;

enum class ResourceClass { kHigh, kLow };

struct LanguageTag {
  Language id;
  std::string_view code;
  std::string_view name;
  /// Short header used by rendered score tables ("Eng.", "Russ.", ...).
  std::string_view column_label;
  ResourceClass resource_class;
  /// Unicode Script property values (long names) expected in running text.
  std::span<std::string_view const> expected_scripts;
  bool right_to_left;

  bool expects_script(std::string_view script) const;
  bool is_latin_script() const { return expects_script("Latin"); }
};

std::span<LanguageTag const> all_language_tags();
LanguageTag const& tag_of(Language lang);

inline std::string_view code_of(Language lang) { return tag_of(lang).code; }
inline std::size_t index_of(Language lang) {
  return static_cast<std::size_t>(lang);
}

std::optional<Language> parse_language_code(std::string_view code);

/// Like parse_language_code but throws UsageError on unknown codes.
Language language_from_code(std::string_view code);

/// Parses "hi,ar,ur". "all" expands to all ten, "translated" to the nine
/// non-English languages. Throws UsageError on unknown or duplicate codes.
std::vector<Language> parse_language_list(std::string_view list);

std::vector<Language> all_languages();
std::vector<Language> translated_languages();

}  // namespace palo_forge
