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

// Resolved settings for one CLI run.
//
// Every field has a flag (--<name with dashes>), an environment variable
// (PALO_FORGE_<NAME>) and a key in the JSON config file ("<name>").
// Precedence: flag > environment > config file > default.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "palo_forge/json.h"
#include "palo_forge/validation.h"

namespace palo_forge {

struct RunConfig {
  std::string dataset;
  std::string checkpoint;
  std::string output;
  std::string ledger;
  std::string review_log;
  std::string benchmark;
  std::string candidates;
  std::string scores;
  std::string rules;
  std::string backends;
  std::string ui_dir;

  std::string backend = "mock";
  std::string judge = "mock";
  std::string langs = "translated";
  std::string lang;
  std::string model_id = "candidate";
  std::string reference = "target";
  std::string listen = "127.0.0.1:8080";

  int parallelism = 1;
  int checkpoint_every = 25;
  int max_attempts = 5;
  std::uint64_t seed = 42;
  std::int64_t sample_size = 1000;
  bool lenient = false;
  bool include_context = false;
  bool stratify = false;
  ValidationThresholds thresholds;
};

struct ConfigField {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, std::string const&)> set;
  std::function<Json(RunConfig const&)> get;
  bool is_flag = false;
};

std::span<ConfigField const> config_fields();

/// "checkpoint_every" -> "PALO_FORGE_CHECKPOINT_EVERY".
std::string env_name(std::string_view field);
/// "checkpoint_every" -> "checkpoint-every".
std::string option_name(std::string_view field);

using EnvLookup = std::function<std::optional<std::string>(std::string const&)>;

/// Process environment lookup.
std::optional<std::string> system_env(std::string const& name);

/// Applies the config file (if any), then the environment, then `flags`
/// (field name -> raw value) over the defaults. Throws ConfigError for
/// unknown config keys or unparseable values.
RunConfig resolve_config(std::optional<std::string> const& config_document,
                         EnvLookup const& env,
                         std::map<std::string, std::string> const& flags);

Json config_to_json(RunConfig const& config);

}  // namespace palo_forge
