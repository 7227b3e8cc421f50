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

#include "palo_forge/run_config.h"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <vector>

#include "palo_forge/errors.h"

namespace palo_forge {
namespace {

template <typename T>
T parse_number(std::string const& field, std::string const& text) {
  T value{};
  auto const* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + text + "' for " + field);
  }
  return value;
}

double parse_double(std::string const& field, std::string const& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("invalid value '" + text + "' for " + field);
  }
  return v;
}

bool parse_bool(std::string const& field, std::string const& text) {
  std::string t;
  for (unsigned char c : text) t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("invalid value '" + text + "' for " + field);
}

ConfigField text(std::string name, std::string help, std::string RunConfig::*m) {
  return {name, std::move(help),
          [m](RunConfig& c, std::string const& v) { c.*m = v; },
          [m](RunConfig const& c) { return Json(c.*m); }};
}

template <typename T>
ConfigField number(std::string name, std::string help, T RunConfig::*m) {
  return {name, std::move(help),
          [m, name](RunConfig& c, std::string const& v) {
            c.*m = parse_number<T>(name, v);
          },
          [m](RunConfig const& c) { return Json(c.*m); }};
}

ConfigField boolean(std::string name, std::string help, bool RunConfig::*m) {
  ConfigField f{name, std::move(help),
                [m, name](RunConfig& c, std::string const& v) {
                  c.*m = parse_bool(name, v);
                },
                [m](RunConfig const& c) { return Json(c.*m); }};
  f.is_flag = true;
  return f;
}

ConfigField threshold(std::string name, std::string help,
                      double ValidationThresholds::*m) {
  return {name, std::move(help),
          [m, name](RunConfig& c, std::string const& v) {
            c.thresholds.*m = parse_double(name, v);
          },
          [m](RunConfig const& c) { return Json(c.thresholds.*m); }};
}

std::vector<ConfigField> make_fields() {
  return {
      text("dataset", "instruction dataset (JSON)", &RunConfig::dataset),
      text("checkpoint", "translation checkpoint file", &RunConfig::checkpoint),
      text("output", "output file or directory", &RunConfig::output),
      text("ledger", "unit ledger (JSON Lines)", &RunConfig::ledger),
      text("review_log", "review event log (JSON Lines)", &RunConfig::review_log),
      text("benchmark", "benchmark items (JSON Lines)", &RunConfig::benchmark),
      text("candidates", "candidate answers (JSON Lines)", &RunConfig::candidates),
      text("scores", "score table document (JSON)", &RunConfig::scores),
      text("rules", "correction rule table (JSON)", &RunConfig::rules),
      text("backends", "backend descriptor file (JSON)", &RunConfig::backends),
      text("ui_dir", "static review UI bundle served under /ui/", &RunConfig::ui_dir),
      text("backend", "translator backend id or 'mock'", &RunConfig::backend),
      text("judge", "judge backend id or 'mock'", &RunConfig::judge),
      text("langs", "target languages: list, 'all' or 'translated'", &RunConfig::langs),
      text("lang", "single target language", &RunConfig::lang),
      text("model_id", "model name for score reports", &RunConfig::model_id),
      text("reference", "judge reference text: target or english", &RunConfig::reference),
      text("listen", "review server address host:port", &RunConfig::listen),
      number("parallelism", "concurrent backend requests", &RunConfig::parallelism),
      number("checkpoint_every", "records between checkpoint flushes",
             &RunConfig::checkpoint_every),
      number("max_attempts", "backend attempts per request", &RunConfig::max_attempts),
      number("seed", "sampling seed", &RunConfig::seed),
      number("sample_size", "review sample size", &RunConfig::sample_size),
      boolean("lenient", "downgrade dataset invariant violations to warnings",
              &RunConfig::lenient),
      boolean("include_context", "send earlier turns as context",
              &RunConfig::include_context),
      boolean("stratify", "stratify the review sample by validation flags",
              &RunConfig::stratify),
      threshold("max_latin_ratio", "ExcessLatin threshold",
                &ValidationThresholds::max_latin_ratio),
      threshold("min_script_ratio", "ScriptMismatch threshold",
                &ValidationThresholds::min_expected_script_ratio),
      threshold("min_length_ratio", "LengthAnomaly lower bound",
                &ValidationThresholds::min_length_ratio),
      threshold("max_length_ratio", "LengthAnomaly upper bound",
                &ValidationThresholds::max_length_ratio),
  };
}

ConfigField const* find_field(std::string_view name) {
  for (auto const& f : config_fields()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string json_scalar(std::string const& key, Json const& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ConfigError("config key '" + key + "' must be a scalar");
}

}  // namespace

std::span<ConfigField const> config_fields() {
  static std::vector<ConfigField> const fields = make_fields();
  return fields;
}

std::string env_name(std::string_view field) {
  std::string out = "PALO_FORGE_";
  for (unsigned char c : field) out.push_back(static_cast<char>(std::toupper(c)));
  return out;
}

std::string option_name(std::string_view field) {
  std::string out(field);
  for (auto& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

std::optional<std::string> system_env(std::string const& name) {
  if (char const* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

RunConfig resolve_config(std::optional<std::string> const& config_document,
                         EnvLookup const& env,
                         std::map<std::string, std::string> const& flags) {
  RunConfig config;
  if (config_document) {
    auto doc = parse_json(*config_document, "config file");
    if (!doc.is_object()) throw ConfigError("config file must be a JSON object");
    for (auto const& [key, value] : doc.items()) {
      auto const* f = find_field(key);
      if (!f) throw ConfigError("unknown config key '" + key + "'");
      f->set(config, json_scalar(key, value));
    }
  }
  for (auto const& f : config_fields()) {
    if (auto v = env(env_name(f.name))) f.set(config, *v);
  }
  for (auto const& [key, value] : flags) {
    auto const* f = find_field(key);
    if (!f) throw ConfigError("unknown option '" + key + "'");
    f->set(config, value);
  }
  if (config.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (config.checkpoint_every < 1) throw ConfigError("checkpoint_every must be >= 1");
  if (config.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  if (config.sample_size < 0) throw ConfigError("sample_size must be >= 0");
  if (config.reference != "target" && config.reference != "english") {
    throw ConfigError("reference must be 'target' or 'english'");
  }
  return config;
}

Json config_to_json(RunConfig const& config) {
  Json j = Json::object();
  for (auto const& f : config_fields()) j[f.name] = f.get(config);
  return j;
}

}  // namespace palo_forge
