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

#include <map>
#include <optional>
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "palo_forge/errors.h"

namespace palo_forge {
namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](std::string const& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

EnvLookup const kNoEnv = env_of({});

TEST(RunConfigTest, Defaults) {
  auto c = resolve_config(std::nullopt, kNoEnv, {});
  EXPECT_EQ(c.backend, "mock");
  EXPECT_EQ(c.parallelism, 1);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.sample_size, 1000);
  EXPECT_EQ(c.reference, "target");
  EXPECT_DOUBLE_EQ(c.thresholds.max_latin_ratio, 0.30);
}

TEST(RunConfigTest, Names) {
  EXPECT_EQ(env_name("checkpoint_every"), "PALO_FORGE_CHECKPOINT_EVERY");
  EXPECT_EQ(option_name("checkpoint_every"), "checkpoint-every");
  std::set<std::string> names;
  for (auto const& f : config_fields()) EXPECT_TRUE(names.insert(f.name).second) << f.name;
  EXPECT_TRUE(names.count("parallelism"));
  EXPECT_TRUE(names.count("max_latin_ratio"));
}

TEST(RunConfigTest, Precedence) {
  std::string file = R"({"parallelism": 2, "seed": 7, "backend": "file", "lenient": true})";
  auto env = env_of({{"PALO_FORGE_PARALLELISM", "3"}, {"PALO_FORGE_SEED", "8"}});
  auto c = resolve_config(file, env, {{"parallelism", "4"}});
  EXPECT_EQ(c.parallelism, 4);
  EXPECT_EQ(c.seed, 8u);
  EXPECT_EQ(c.backend, "file");
  EXPECT_TRUE(c.lenient);
  EXPECT_EQ(c.max_attempts, 5);
}

TEST(RunConfigTest, Thresholds) {
  auto c = resolve_config(R"({"min_length_ratio": 0.5})",
                          env_of({{"PALO_FORGE_MAX_LENGTH_RATIO", "2.5"}}), {});
  EXPECT_DOUBLE_EQ(c.thresholds.min_length_ratio, 0.5);
  EXPECT_DOUBLE_EQ(c.thresholds.max_length_ratio, 2.5);
}

TEST(RunConfigTest, Errors) {
  EXPECT_THROW(resolve_config(R"({"paralelism": 2})", kNoEnv, {}), ConfigError);
  EXPECT_THROW(resolve_config(R"([1])", kNoEnv, {}), ConfigError);
  EXPECT_THROW(resolve_config(R"({"seed": [1]})", kNoEnv, {}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, kNoEnv, {{"nope", "1"}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, kNoEnv, {{"parallelism", "0"}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, kNoEnv, {{"parallelism", "2x"}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, kNoEnv, {{"lenient", "maybe"}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, kNoEnv, {{"reference", "both"}}), ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, env_of({{"PALO_FORGE_SAMPLE_SIZE", "-1"}}), {}),
               ConfigError);
  EXPECT_THROW(resolve_config(std::nullopt, kNoEnv, {{"max_latin_ratio", ""}}), ConfigError);
}

TEST(RunConfigTest, JsonRoundTrip) {
  auto c = resolve_config(std::nullopt, kNoEnv,
                          {{"seed", "9"}, {"langs", "hi,ar"}, {"stratify", "yes"}});
  auto j = config_to_json(c);
  EXPECT_EQ(j.size(), config_fields().size());
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["stratify"], true);
  auto again = resolve_config(j.dump(), kNoEnv, {});
  EXPECT_EQ(config_to_json(again), j);
}

}  // namespace
}  // namespace palo_forge
