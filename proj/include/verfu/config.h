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

// Campaign configuration files (JSON). Every key is optional; unknown keys
// and bad values raise kInvalidConfig naming the key.

#ifndef VERFU_CONFIG_H_
#define VERFU_CONFIG_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "verfu/keys.h"
#include "verfu/simtrain.h"

namespace verfu {

struct RunConfig {
  CampaignConfig campaign;
  std::string workload = "logistic";  // "logistic" or "frozen"
  size_t dim = 16;                    // frozen workload only
  double frozen_magnitude = 0.5;
  SyntheticTaskSpec task;
  unsigned kappa_paillier = 256;
  unsigned kappa_group = 256;
  std::string behavior = "honest";

  size_t ModelDim() const;
  KeySpec Keys() const { return KeySpec{kappa_paillier, kappa_group, ModelDim()}; }
  void Validate() const;
};

RunConfig ParseConfig(std::string_view json_text);
RunConfig LoadConfig(const std::filesystem::path& path);

// --seed beats VERFU_SEED beats the config file.
uint64_t ResolveSeed(std::optional<uint64_t> flag, const char* env_value, uint64_t config_seed);

std::unique_ptr<Workload> MakeWorkload(const RunConfig& config);

}  // namespace verfu

#endif  // VERFU_CONFIG_H_
