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

// A full campaign: scheduler + round engine + utility tracking.

#ifndef VERFU_CAMPAIGN_H_
#define VERFU_CAMPAIGN_H_

#include <optional>
#include <vector>

#include "verfu/adversary.h"
#include "verfu/engine.h"
#include "verfu/keys.h"
#include "verfu/metrics.h"
#include "verfu/simtrain.h"
#include "verfu/transcript.h"

namespace verfu {

struct CampaignOptions {
  ServerBehavior behavior = Honest{};
  const Trapdoor* adversary_trapdoor = nullptr;
  bool strict = false;  // stop after the first failed verification
  bool record_transcript = true;
  bool evaluate = true;  // track utility when the workload has a test split
};

struct CampaignResult {
  CampaignConfig config;
  std::vector<RoundResult> rounds;
  std::vector<TranscriptRecord> transcript;
  MetricsLedger ledger;
  std::vector<Evaluation> utility;  // utility[r] after round r; [0] is the initial model
  std::vector<EncodedVector> model_sums;  // integer model state after each round
  bool aborted = false;  // strict mode hit a failure

  size_t TotalVerdicts() const;
  size_t FailedVerdicts() const;
  bool AllVerified() const { return FailedVerdicts() == 0; }
};

// Validates the config against the keys and workload (kInvalidConfig), then
// runs every round. The first transcript record is a local setup event that
// publishes the codec parameters.
CampaignResult RunCampaign(const CampaignConfig& config, const KeyMaterial& keys, const Workload& workload,
                           const CampaignOptions& options);

}  // namespace verfu

#endif  // VERFU_CAMPAIGN_H_
