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

#include "palo_forge/language.h"

#include <algorithm>
#include <string>

#include "palo_forge/errors.h"

namespace palo_forge {
namespace {

constexpr std::array<std::string_view, 2> kLatin = {"Latin", "Common"};
constexpr std::array<std::string_view, 2> kHan = {"Han", "Common"};
constexpr std::array<std::string_view, 2> kCyrillic = {"Cyrillic", "Common"};
constexpr std::array<std::string_view, 4> kJapanese = {"Han", "Hiragana",
                                                       "Katakana", "Common"};
constexpr std::array<std::string_view, 2> kArabic = {"Arabic", "Common"};
constexpr std::array<std::string_view, 2> kDevanagari = {"Devanagari",
                                                         "Common"};
constexpr std::array<std::string_view, 2> kBengali = {"Bengali", "Common"};

constexpr auto kHigh = ResourceClass::kHigh;
constexpr auto kLow = ResourceClass::kLow;

std::array<LanguageTag, kLanguageCount> const kTags = {{
    {Language::kEnglish, "en", "English", "Eng.", kHigh, kLatin, false},
    {Language::kChinese, "zh", "Chinese", "Chinese", kHigh, kHan, false},
    {Language::kFrench, "fr", "French", "French", kHigh, kLatin, false},
    {Language::kSpanish, "es", "Spanish", "Spanish", kHigh, kLatin, false},
    {Language::kRussian, "ru", "Russian", "Russ.", kHigh, kCyrillic, false},
    {Language::kJapanese, "ja", "Japanese", "Japan.", kHigh, kJapanese, false},
    {Language::kArabic, "ar", "Arabic", "Arabic", kLow, kArabic, true},
    {Language::kHindi, "hi", "Hindi", "Hindi", kLow, kDevanagari, false},
    {Language::kBengali, "bn", "Bengali", "Bengali", kLow, kBengali, false},
    {Language::kUrdu, "ur", "Urdu", "Urdu", kLow, kArabic, true},
}};

}  // namespace

bool LanguageTag::expects_script(std::string_view script) const {
  return std::find(expected_scripts.begin(), expected_scripts.end(), script) !=
         expected_scripts.end();
}

std::span<LanguageTag const> all_language_tags() { return kTags; }

LanguageTag const& tag_of(Language lang) { return kTags.at(index_of(lang)); }

std::optional<Language> parse_language_code(std::string_view code) {
  for (auto const& t : kTags) {
    if (t.code == code) return t.id;
  }
  return std::nullopt;
}

Language language_from_code(std::string_view code) {
  auto lang = parse_language_code(code);
  if (!lang) {
    throw UsageError("unknown language code '" + std::string(code) +
                     "' (expected one of en,zh,fr,es,ru,ja,ar,hi,bn,ur)");
  }
  return *lang;
}

std::vector<Language> all_languages() {
  std::vector<Language> out;
  for (auto const& t : kTags) out.push_back(t.id);
  return out;
}

std::vector<Language> translated_languages() {
  auto out = all_languages();
  out.erase(out.begin());
  return out;
}

std::vector<Language> parse_language_list(std::string_view list) {
  if (list == "all") return all_languages();
  if (list == "translated") return translated_languages();
  std::vector<Language> out;
  while (!list.empty()) {
    auto comma = list.find(',');
    auto item = list.substr(0, comma);
    list = comma == std::string_view::npos ? std::string_view{}
                                           : list.substr(comma + 1);
    if (item.empty()) continue;
    auto lang = language_from_code(item);
    if (std::find(out.begin(), out.end(), lang) != out.end()) {
      throw UsageError("duplicate language '" + std::string(item) + "'");
    }
    out.push_back(lang);
  }
  return out;
}

}  // namespace palo_forge
