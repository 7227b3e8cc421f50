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

#include "palo_forge/translation.h"

#include <algorithm>
#include <array>
#include <map>

#include "palo_forge/errors.h"
#include "palo_forge/io.h"

namespace palo_forge {
namespace {

constexpr std::array<std::string_view, 4> kStatusNames = {
    "Machine", "Flagged", "Reviewed", "Accepted"};

constexpr std::array<IssueTag, 6> kIssueTags = {
    IssueTag::kPunctuation, IssueTag::kGender,    IssueTag::kUntranslated,
    IssueTag::kGrammar,     IssueTag::kNunnation, IssueTag::kOther};

constexpr std::array<std::string_view, 6> kIssueTagNames = {
    "Punctuation", "Gender", "Untranslated", "Grammar", "Nunnation", "Other"};

std::string replace_all(std::string_view text, std::string_view from,
                        std::string_view to) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (true) {
    auto hit = text.find(from, pos);
    if (hit == std::string_view::npos) break;
    out.append(text.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
  out.append(text.substr(pos));
  return out;
}

std::string conversation_context(InstructionRecord const& record,
                                 std::size_t upto) {
  std::string out;
  for (std::size_t i = 0; i < upto; ++i) {
    auto const& t = record.turns[i];
    out += t.speaker == Speaker::kHuman ? "Human: " : "Assistant: ";
    out += mask_placeholders(t.text);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string_view status_name(UnitStatus status) {
  return kStatusNames[static_cast<std::size_t>(status)];
}

std::optional<UnitStatus> parse_status(std::string_view name) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == name) return static_cast<UnitStatus>(i);
  }
  return std::nullopt;
}

std::string_view issue_tag_name(IssueTag tag) {
  return kIssueTagNames[static_cast<std::size_t>(tag)];
}

std::optional<IssueTag> parse_issue_tag(std::string_view name) {
  for (std::size_t i = 0; i < kIssueTagNames.size(); ++i) {
    if (kIssueTagNames[i] == name) return kIssueTags[i];
  }
  return std::nullopt;
}

std::span<IssueTag const> all_issue_tags() { return kIssueTags; }

std::string UnitKey::to_string() const {
  return record_id + "#" + std::to_string(turn_index) + "@" +
         std::string(code_of(lang));
}

Json key_to_json(UnitKey const& key) {
  return Json{{"record_id", key.record_id},
              {"turn_index", key.turn_index},
              {"lang", code_of(key.lang)}};
}

UnitKey key_from_json(Json const& j) {
  try {
    UnitKey key;
    key.record_id = j.at("record_id").get<std::string>();
    key.turn_index = j.at("turn_index").get<int>();
    key.lang = language_from_code(j.at("lang").get<std::string>());
    return key;
  } catch (Json::exception const& e) {
    throw ValidationError("", "malformed unit key",
                          std::string("malformed unit key: ") + e.what());
  }
}

void check_unit(TranslationUnit const& unit) {
  auto id = unit.key().to_string();
  if (unit.corrected_text.has_value() != unit.reviewed()) {
    throw ValidationError(id, "corrected_text present iff reviewed");
  }
  if (unit.status == UnitStatus::kFlagged && unit.report.flags.empty()) {
    throw ValidationError(id, "flagged unit without flags");
  }
  if (unit.turn_index < 0) throw ValidationError(id, "negative turn index");
}

Json unit_to_json(TranslationUnit const& unit) {
  Json j;
  j["record_id"] = unit.record_id;
  j["turn_index"] = unit.turn_index;
  j["lang"] = code_of(unit.lang);
  j["source_text"] = unit.source_text;
  j["machine_text"] = unit.machine_text;
  if (unit.corrected_text) j["corrected_text"] = *unit.corrected_text;
  j["status"] = status_name(unit.status);
  j["report"] = report_to_json(unit.report);
  j["applied_rules"] = unit.applied_rules;
  auto tags = Json::array();
  for (auto t : unit.issue_tags) tags.push_back(issue_tag_name(t));
  j["issue_tags"] = std::move(tags);
  if (unit.note) j["note"] = *unit.note;
  return j;
}

TranslationUnit unit_from_json(Json const& j) {
  TranslationUnit u;
  try {
    auto key = key_from_json(j);
    u.record_id = key.record_id;
    u.turn_index = key.turn_index;
    u.lang = key.lang;
    u.source_text = j.at("source_text").get<std::string>();
    u.machine_text = j.at("machine_text").get<std::string>();
    if (j.contains("corrected_text")) {
      u.corrected_text = j.at("corrected_text").get<std::string>();
    }
    auto status = j.at("status").get<std::string>();
    auto parsed = parse_status(status);
    if (!parsed) {
      throw ValidationError(u.key().to_string(), "unknown status '" + status + "'");
    }
    u.status = *parsed;
    if (j.contains("report")) u.report = report_from_json(j.at("report"));
    if (j.contains("applied_rules")) {
      u.applied_rules = j.at("applied_rules").get<std::vector<std::string>>();
    }
    if (j.contains("issue_tags")) {
      for (auto const& t : j.at("issue_tags")) {
        auto name = t.get<std::string>();
        auto tag = parse_issue_tag(name);
        if (!tag) {
          throw ValidationError(u.key().to_string(),
                                "unknown issue tag '" + name + "'");
        }
        u.issue_tags.insert(*tag);
      }
    }
    if (j.contains("note")) u.note = j.at("note").get<std::string>();
  } catch (Json::exception const& e) {
    throw ValidationError(u.record_id, "malformed unit",
                          std::string("malformed unit: ") + e.what());
  }
  check_unit(u);
  return u;
}

std::string serialize_unit_ledger(std::span<TranslationUnit const> units) {
  std::string out;
  for (auto const& u : units) out += to_jsonl_line(unit_to_json(u));
  return out;
}

std::vector<TranslationUnit> parse_unit_ledger(std::string_view text) {
  std::vector<TranslationUnit> units;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    auto j = parse_json(line, "unit ledger line " + std::to_string(n));
    units.push_back(unit_from_json(j));
  });
  return units;
}

std::string mask_placeholders(std::string_view text) {
  return replace_all(text, kImagePlaceholder, kPlaceholderSentinel);
}

std::string unmask_placeholders(std::string_view text) {
  return replace_all(text, kPlaceholderSentinel, kImagePlaceholder);
}

std::vector<ChatMessage> build_translation_prompt(std::string_view masked_source,
                                                  Language lang,
                                                  std::string_view context) {
  auto const& tag = tag_of(lang);
  std::string system =
      "You are a professional translator. Translate the user's message from "
      "English into " +
      std::string(tag.name) +
      ". Preserve line breaks, markdown and numbers. Copy the token " +
      std::string(kPlaceholderSentinel) +
      " exactly where it appears. Reply with the translation only.\n"
      "Target language code: " +
      std::string(tag.code);
  std::vector<ChatMessage> messages;
  messages.push_back({"system", std::move(system)});
  if (!context.empty()) {
    messages.push_back(
        {"system", "Earlier turns of the conversation, for reference only "
                   "(do not translate):\n" +
                       std::string(context)});
  }
  messages.push_back({"user", std::string(masked_source)});
  return messages;
}

bool RecordTranslation::flagged() const {
  return std::any_of(units.begin(), units.end(), [](auto const& u) {
    return u.status == UnitStatus::kFlagged;
  });
}

TranslationUnit translate_turn(std::string const& record_id, int turn_index,
                               std::string_view source, Language lang,
                               Backend& backend,
                               TranslationOptions const& options,
                               std::string_view context,
                               TranslationCache* cache,
                               TranslationStats* stats) {
  TranslationUnit unit;
  unit.record_id = record_id;
  unit.turn_index = turn_index;
  unit.lang = lang;
  unit.source_text = std::string(source);

  if (!source.empty()) {
    CacheKey ck{backend.id(), lang, std::string(source),
                context.empty() ? std::string() : sha256_hex(context)};
    std::optional<std::string> raw = cache ? cache->lookup(ck) : std::nullopt;
    if (raw) {
      if (stats) ++stats->cache_hits;
    } else {
      auto prompt =
          build_translation_prompt(mask_placeholders(source), lang, context);
      if (stats) ++stats->backend_calls;
      raw = backend.complete(prompt);
      if (cache) cache->store(ck, *raw);
    }
    auto const& rules = options.rules ? *options.rules : RuleSet::builtin();
    auto corrected = rules.apply(unmask_placeholders(*raw), lang);
    unit.machine_text = std::move(corrected.corrected);
    unit.applied_rules = std::move(corrected.applied);
  }

  unit.report = validate_translation(unit.source_text, unit.machine_text, lang,
                                     options.thresholds);
  unit.status =
      unit.report.clean() ? UnitStatus::kMachine : UnitStatus::kFlagged;
  return unit;
}

RecordTranslation translate_record(InstructionRecord const& record,
                                   Language lang, Backend& backend,
                                   TranslationOptions const& options,
                                   TranslationCache* cache,
                                   TranslationStats* stats) {
  if (lang == Language::kEnglish) {
    throw UsageError("cannot translate into English");
  }
  RecordTranslation out;
  out.record = record;
  for (std::size_t i = 0; i < record.turns.size(); ++i) {
    int turn_index = static_cast<int>(i);
    std::string context =
        options.include_context ? conversation_context(record, i) : "";
    try {
      auto unit = translate_turn(record.id, turn_index, record.turns[i].text,
                                 lang, backend, options, context, cache, stats);
      out.record.turns[i].text = unit.machine_text;
      out.units.push_back(std::move(unit));
    } catch (BackendError const& e) {
      out.failures.push_back({{record.id, turn_index, lang}, e.what()});
    }
  }
  if (!out.complete()) out.units.clear();
  return out;
}

std::vector<InstructionRecord> merge_corrections(
    std::span<InstructionRecord const> records,
    std::span<TranslationUnit const> units, Language lang) {
  std::vector<InstructionRecord> out(records.begin(), records.end());
  std::map<std::string, std::size_t, std::less<>> by_id;
  for (std::size_t i = 0; i < out.size(); ++i) by_id.emplace(out[i].id, i);

  std::vector<std::string> dangling;
  std::vector<std::pair<Turn*, TranslationUnit const*>> edits;
  for (auto const& u : units) {
    if (u.lang != lang) continue;
    auto it = by_id.find(u.record_id);
    if (it == by_id.end() || u.turn_index < 0 ||
        static_cast<std::size_t>(u.turn_index) >=
            out[it->second].turns.size()) {
      dangling.push_back(u.key().to_string());
      continue;
    }
    if (!u.reviewed()) continue;
    edits.emplace_back(&out[it->second].turns[u.turn_index], &u);
  }
  if (!dangling.empty()) {
    std::string msg = "corrections reference missing turns:";
    for (auto const& d : dangling) msg += " " + d;
    throw DanglingReferenceError(msg, std::move(dangling));
  }
  for (auto [turn, unit] : edits) {
    if (!unit->corrected_text) {
      throw ValidationError(unit->key().to_string(), "reviewed unit without corrected_text");
    }
    if (count_placeholders(*unit->corrected_text) !=
        count_placeholders(unit->source_text)) {
      throw ValidationError(unit->key().to_string(),
                            "correction changes placeholder count");
    }
    turn->text = *unit->corrected_text;
  }
  return out;
}

std::string export_finetune_corpus(std::span<TranslationUnit const> units,
                                   Language lang) {
  std::vector<TranslationUnit const*> sorted;
  sorted.reserve(units.size());
  for (auto const& u : units) {
    if (u.lang != lang) {
      throw UsageError("unit " + u.key().to_string() + " is not in language " +
                       std::string(code_of(lang)));
    }
    if (!u.corrected_text) {
      throw ValidationError(u.key().to_string(), "unit lacks corrected_text");
    }
    sorted.push_back(&u);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    return std::tie(a->record_id, a->turn_index) <
           std::tie(b->record_id, b->turn_index);
  });

  auto const& tag = tag_of(lang);
  std::string system = "Translate the following English text into " +
                       std::string(tag.name) +
                       ". Keep the <image> token unchanged.";
  std::string out;
  for (auto const* u : sorted) {
    Json messages = Json::array();
    messages.push_back(Json{{"role", "system"}, {"content", system}});
    messages.push_back(Json{{"role", "user"}, {"content", u->source_text}});
    messages.push_back(
        Json{{"role", "assistant"}, {"content", *u->corrected_text}});
    out += to_jsonl_line(Json{{"messages", std::move(messages)}});
  }
  return out;
}

}  // namespace palo_forge
