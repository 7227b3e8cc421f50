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

#include "palo_forge/script.h"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include "palo_forge/dataset.h"
#include "palo_forge/errors.h"
#include "palo_forge/io.h"

namespace palo_forge {
namespace {

UScriptCode script_code(char32_t cp) {
  UErrorCode err = U_ZERO_ERROR;
  auto code = uscript_getScript(static_cast<UChar32>(cp), &err);
  return U_FAILURE(err) ? USCRIPT_UNKNOWN : code;
}

bool is_word_joiner(char32_t cp) {
  return cp == U' ' || cp == U'-' || cp == U'\'' || cp == U'\u2019' ||
         cp == U'\u00A0';
}

// Code point ranges covered by image placeholder tokens.
std::vector<Span> placeholder_spans(std::u32string_view cps) {
  static const std::u32string token = decode_utf8(kImagePlaceholder);
  std::vector<Span> out;
  for (auto pos = cps.find(token); pos != std::u32string_view::npos;
       pos = cps.find(token, pos + token.size())) {
    out.push_back({pos, pos + token.size()});
  }
  return out;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  auto const* s = reinterpret_cast<uint8_t const*>(text.data());
  int32_t i = 0;
  auto const length = static_cast<int32_t>(text.size());
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
    if (error) {
      n = 0;
      U8_APPEND_UNSAFE(buf, n, 0xFFFD);
    }
    out.append(reinterpret_cast<char const*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string script_name(char32_t cp) {
  return uscript_getName(script_code(cp));
}

bool is_letter(char32_t cp) {
  return (U_GET_GC_MASK(static_cast<UChar32>(cp)) & U_GC_L_MASK) != 0;
}

std::vector<ScriptRun> classify_script_runs(std::string_view text) {
  auto cps = decode_utf8(text);
  std::vector<ScriptRun> runs;
  UScriptCode current = USCRIPT_INVALID_CODE;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    auto code = script_code(cps[i]);
    if (code == USCRIPT_INHERITED && !runs.empty()) code = current;
    if (runs.empty() || code != current) {
      runs.push_back({i, i + 1, uscript_getName(code)});
      current = code;
    } else {
      runs.back().end = i + 1;
    }
  }
  return runs;
}

Whitelist parse_whitelist(std::string_view text) {
  Whitelist out;
  for_each_line(text, [&](std::string_view line, std::size_t) {
    auto b = line.find_first_not_of(" \t");
    auto e = line.find_last_not_of(" \t");
    auto term = line.substr(b, e - b + 1);
    if (term.front() == '#') return;
    out.emplace(term);
  });
  return out;
}

Whitelist load_whitelist(std::filesystem::path const& path) {
  return parse_whitelist(read_file(path));
}

std::vector<Span> find_untranslated_segments(std::string_view text,
                                             Language lang,
                                             Whitelist const& whitelist) {
  if (lang == Language::kEnglish) {
    throw UsageError("untranslated-segment detection needs a non-English "
                     "target language");
  }
  auto const& tag = tag_of(lang);
  if (tag.is_latin_script()) return {};

  auto cps = decode_utf8(text);
  auto placeholders = placeholder_spans(cps);
  auto in_placeholder = [&](std::size_t start, std::size_t end) {
    for (auto const& p : placeholders) {
      if (start < p.end && p.start < end) return true;
    }
    return false;
  };

  // Latin words: a Latin letter followed by Latin-script code points
  // (including attached combining marks) or ASCII digits.
  std::vector<Span> words;
  for (std::size_t i = 0; i < cps.size();) {
    if (!(is_letter(cps[i]) && script_code(cps[i]) == USCRIPT_LATIN)) {
      ++i;
      continue;
    }
    auto start = i++;
    while (i < cps.size()) {
      auto code = script_code(cps[i]);
      bool digit = cps[i] >= U'0' && cps[i] <= U'9';
      if (code == USCRIPT_LATIN || code == USCRIPT_INHERITED || digit) {
        ++i;
      } else {
        break;
      }
    }
    if (in_placeholder(start, i)) continue;
    auto word = encode_utf8(cps.substr(start, i - start));
    if (whitelist.count(word)) continue;
    words.push_back({start, i});
  }

  std::vector<Span> out;
  for (auto const& w : words) {
    if (!out.empty()) {
      bool joinable = true;
      for (auto k = out.back().end; k < w.start; ++k) {
        if (!is_word_joiner(cps[k])) {
          joinable = false;
          break;
        }
      }
      if (joinable) {
        out.back().end = w.end;
        continue;
      }
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace palo_forge
