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

#include "palo_forge/dataset.h"

#include <algorithm>
#include <set>

#include "palo_forge/errors.h"
#include "palo_forge/json.h"

namespace palo_forge {
namespace {

std::string record_label(Json const& obj, std::size_t index) {
  if (obj.is_object()) {
    auto it = obj.find("id");
    if (it != obj.end() && it->is_string()) return it->get<std::string>();
  }
  return "#" + std::to_string(index);
}

std::string require_string(Json const& obj, char const* key,
                           std::string const& label) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(label, std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) {
    throw ValidationError(label,
                          std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

InstructionRecord record_from_json(Json const& obj, std::size_t index) {
  auto label = record_label(obj, index);
  if (!obj.is_object()) throw ValidationError(label, "record is not an object");

  InstructionRecord record;
  record.id = require_string(obj, "id", label);
  if (auto it = obj.find("image"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw ValidationError(label, "field 'image' is not a string");
    }
    record.image = it->get<std::string>();
  }
  auto conv = obj.find("conversations");
  if (conv == obj.end()) {
    throw ValidationError(label, "missing field 'conversations'");
  }
  if (!conv->is_array()) {
    throw ValidationError(label, "field 'conversations' is not an array");
  }
  for (auto const& t : *conv) {
    if (!t.is_object()) throw ValidationError(label, "turn is not an object");
    auto from = require_string(t, "from", label);
    Turn turn;
    if (from == "human") {
      turn.speaker = Speaker::kHuman;
    } else if (from == "gpt") {
      turn.speaker = Speaker::kAssistant;
    } else {
      throw ValidationError(label, "unknown speaker '" + from + "'");
    }
    turn.text = require_string(t, "value", label);
    record.turns.push_back(std::move(turn));
  }
  return record;
}

}  // namespace

std::size_t count_placeholders(std::string_view text) {
  std::size_t n = 0;
  for (auto pos = text.find(kImagePlaceholder); pos != std::string_view::npos;
       pos = text.find(kImagePlaceholder, pos + kImagePlaceholder.size())) {
    ++n;
  }
  return n;
}

std::size_t InstructionRecord::placeholder_count() const {
  std::size_t n = 0;
  for (auto const& t : turns) n += count_placeholders(t.text);
  return n;
}

std::vector<Violation> check_record(InstructionRecord const& record) {
  std::vector<Violation> out;
  auto add = [&](std::string rule) {
    out.push_back({record.id, std::move(rule)});
  };
  if (record.turns.empty()) add("conversation has no turns");
  for (std::size_t i = 0; i < record.turns.size(); ++i) {
    auto expected = i % 2 == 0 ? Speaker::kHuman : Speaker::kAssistant;
    if (record.turns[i].speaker != expected) {
      add("turns must alternate starting with human (turn " +
          std::to_string(i) + ")");
      break;
    }
  }
  for (auto const& t : record.turns) {
    if (t.speaker == Speaker::kAssistant && count_placeholders(t.text) > 0) {
      add("placeholder in assistant turn");
      break;
    }
  }
  auto placeholders = record.placeholder_count();
  if (placeholders > 1) add("more than one placeholder");
  if (record.image && placeholders == 0) add("image without placeholder");
  if (!record.image && placeholders > 0) add("placeholder without image");
  return out;
}

ParsedDataset parse_instruct_dataset(std::string_view document,
                                     ParseOptions const& options) {
  auto doc = parse_json(document, "dataset document");
  if (!doc.is_array()) {
    throw ParseError("dataset document must be a JSON array", 0);
  }

  ParsedDataset out;
  out.records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto record = record_from_json(doc[i], i);
    auto violations = check_record(record);
    if (!violations.empty() && !options.lenient) {
      auto const& v = violations.front();
      throw ValidationError(v.record_id, v.rule);
    }
    for (auto& v : violations) out.warnings.push_back(std::move(v));
    out.records.push_back(std::move(record));
  }
  return out;
}

std::string serialize_instruct_dataset(
    std::span<InstructionRecord const> records,
    SerializeOptions const& options) {
  auto doc = Json::array();
  for (auto const& r : records) {
    if (!options.lenient) {
      auto violations = check_record(r);
      if (!violations.empty()) {
        throw ValidationError(violations.front().record_id,
                              violations.front().rule);
      }
    }
    Json obj;
    obj["id"] = r.id;
    if (r.image) obj["image"] = *r.image;
    auto conv = Json::array();
    for (auto const& t : r.turns) {
      Json turn;
      turn["from"] = t.speaker == Speaker::kHuman ? "human" : "gpt";
      turn["value"] = t.text;
      conv.push_back(std::move(turn));
    }
    obj["conversations"] = std::move(conv);
    doc.push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

std::int64_t MixPlan::count_for(Language lang) const {
  for (auto const& [l, n] : counts) {
    if (l == lang) return n;
  }
  return 0;
}

MixPlan plan_dataset_mix(std::int64_t english_count,
                         std::int64_t translated_count,
                         std::span<Language const> languages,
                         std::map<Language, std::int64_t> const& overrides) {
  if (english_count < 0 || translated_count < 0) {
    throw UsageError("record counts must be non-negative");
  }
  std::set<Language> seen;
  for (auto lang : languages) {
    if (lang == Language::kEnglish) {
      throw UsageError("English is the source bucket, not a translated one");
    }
    if (!seen.insert(lang).second) {
      throw UsageError("duplicate language '" + std::string(code_of(lang)) +
                       "' in mix");
    }
  }
  for (auto const& [lang, n] : overrides) {
    if (!seen.count(lang)) {
      throw UsageError("override for '" + std::string(code_of(lang)) +
                       "' which is not in the mix");
    }
    if (n < 0) throw UsageError("record counts must be non-negative");
  }

  MixPlan plan;
  plan.counts.emplace_back(Language::kEnglish, english_count);
  plan.total = english_count;
  for (auto lang : languages) {
    auto it = overrides.find(lang);
    auto n = it == overrides.end() ? translated_count : it->second;
    plan.counts.emplace_back(lang, n);
    plan.total += n;
  }
  return plan;
}

}  // namespace palo_forge
