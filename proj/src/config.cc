/*
 * Copyright 2026 The verfu Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "verfu/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "verfu/adversary.h"
#include "verfu/status.h"

namespace verfu {
namespace {

using nlohmann::json;

[[noreturn]] void BadKey(const std::string& key, const std::string& why) {
  throw VerfuError(ErrorCode::kInvalidConfig, "config key '" + key + "': " + why);
}

template <class T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const json& v = j[key];
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) BadKey(key, "expected a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) BadKey(key, "expected a number");
    } else {
      if (!v.is_number_integer()) BadKey(key, "expected an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned()) BadKey(key, "must be >= 0");
    }
    out = v.get<T>();
  } catch (const json::exception& e) {
    BadKey(key, e.what());
  }
}

constexpr const char* kKnownKeys[] = {
    "devices",  "rounds",   "cohort",        "unlearn_rate",     "cadence",      "epochs",
    "lr",       "scale_bits", "bound",       "kappa_paillier",   "kappa_group",  "seed",
    "behavior", "workload", "dim",           "frozen_magnitude", "features",     "classes",
    "samples_per_device", "test_samples", "center_scale", "dirichlet_alpha"};

}  // namespace

size_t RunConfig::ModelDim() const {
  return workload == "frozen" ? dim : task.classes * (task.features + 1);
}

void RunConfig::Validate() const {
  campaign.Validate();
  if (workload != "frozen" && workload != "logistic") BadKey("workload", "must be 'frozen' or 'logistic'");
  if (workload == "frozen") {
    if (dim == 0) BadKey("dim", "must be >= 1");
    if (!(frozen_magnitude >= 0 && frozen_magnitude <= campaign.bound)) {
      BadKey("frozen_magnitude", "must be in [0, bound]");
    }
  } else {
    if (task.features == 0) BadKey("features", "must be >= 1");
    if (task.classes < 2) BadKey("classes", "must be >= 2");
    if (!(task.dirichlet_alpha > 0)) BadKey("dirichlet_alpha", "must be positive");
    if (!(task.center_scale >= 0)) BadKey("center_scale", "must be >= 0");
  }
  if (kappa_paillier < 32 || kappa_paillier % 2 != 0) BadKey("kappa_paillier", "must be an even number >= 32");
  if (kappa_group < 16) BadKey("kappa_group", "must be >= 16");
  try {
    ParseBehavior(behavior);
  } catch (const VerfuError& e) {
    BadKey("behavior", e.what());
  }
  // The codec must fit the smaller of n and q with room for the sign.
  const unsigned min_bits = std::min(kappa_paillier, kappa_group) - 1;
  FixedPointSpec codec = campaign.Codec();
  BigUint modulus = BigUint(1) << (min_bits - 1);
  try {
    codec.ValidateFor(modulus);
  } catch (const VerfuError&) {
    BadKey("scale_bits", "fixed-point sums do not fit the chosen key sizes");
  }
}

RunConfig ParseConfig(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw VerfuError(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw VerfuError(ErrorCode::kInvalidConfig, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys)) {
      BadKey(key, "unknown key");
    }
  }
  RunConfig c;
  Read(j, "devices", c.campaign.devices);
  Read(j, "rounds", c.campaign.rounds);
  Read(j, "cohort", c.campaign.cohort);
  Read(j, "unlearn_rate", c.campaign.unlearn_rate);
  Read(j, "cadence", c.campaign.cadence);
  Read(j, "epochs", c.campaign.training.epochs);
  Read(j, "lr", c.campaign.training.lr);
  Read(j, "scale_bits", c.campaign.scale_bits);
  Read(j, "bound", c.campaign.bound);
  Read(j, "seed", c.campaign.seed);
  Read(j, "kappa_paillier", c.kappa_paillier);
  Read(j, "kappa_group", c.kappa_group);
  Read(j, "behavior", c.behavior);
  Read(j, "workload", c.workload);
  Read(j, "dim", c.dim);
  Read(j, "frozen_magnitude", c.frozen_magnitude);
  Read(j, "features", c.task.features);
  Read(j, "classes", c.task.classes);
  Read(j, "samples_per_device", c.task.samples_per_device);
  Read(j, "test_samples", c.task.test_samples);
  Read(j, "center_scale", c.task.center_scale);
  Read(j, "dirichlet_alpha", c.task.dirichlet_alpha);
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw VerfuError(ErrorCode::kInvalidConfig, "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

uint64_t ResolveSeed(std::optional<uint64_t> flag, const char* env_value, uint64_t config_seed) {
  if (flag) return *flag;
  if (env_value != nullptr && *env_value != '\0') {
    std::string_view text(env_value);
    uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw VerfuError(ErrorCode::kInvalidConfig, "VERFU_SEED is not an unsigned integer");
    }
    return seed;
  }
  return config_seed;
}

std::unique_ptr<Workload> MakeWorkload(const RunConfig& config) {
  const uint64_t seed = config.campaign.seed;
  if (config.workload == "frozen") {
    return std::make_unique<FrozenWorkload>(FrozenWorkload::Seeded(config.dim, config.frozen_magnitude, seed));
  }
  return std::make_unique<LogisticWorkload>(LogisticWorkload::Synthetic(config.task, config.campaign.devices, seed));
}

}  // namespace verfu
