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

#include "verfu/campaign.h"

#include <string>

#include "verfu/messages.h"
#include "verfu/status.h"

namespace verfu {

size_t CampaignResult::TotalVerdicts() const {
  size_t total = 0;
  for (const RoundResult& r : rounds) total += r.verdicts.size();
  return total;
}

size_t CampaignResult::FailedVerdicts() const {
  size_t failed = 0;
  for (const RoundResult& r : rounds) failed += r.Failures();
  return failed;
}

CampaignResult RunCampaign(const CampaignConfig& config, const KeyMaterial& keys, const Workload& workload,
                           const CampaignOptions& options) {
  config.Validate();
  if (workload.dim() != keys.lhh.dim()) {
    throw VerfuError(ErrorCode::kInvalidConfig, "config key 'dim': workload dimension " +
                                                    std::to_string(workload.dim()) + " differs from the keys (" +
                                                    std::to_string(keys.lhh.dim()) + ")");
  }
  const FixedPointSpec codec = config.Codec();
  World world;
  try {
    world = World::Create(keys, codec, config.devices, workload.InitialModel(), config.cohort, config.seed);
  } catch (const VerfuError& e) {
    throw VerfuError(ErrorCode::kInvalidConfig, std::string("config key 'scale_bits': ") + e.what());
  }
  if (RequiresTrapdoor(options.behavior) && options.adversary_trapdoor == nullptr) {
    throw VerfuError(ErrorCode::kTrapdoorRequired, "behavior " + BehaviorName(options.behavior) + " needs the trapdoor");
  }

  CampaignResult result;
  result.config = config;
  if (options.record_transcript) {
    result.transcript.push_back(
        TranscriptRecord{0, Phase::kSetup, Party::Dealer(), Party::Dealer(), kMsgCodec, SerializeCodec(codec)});
  }
  auto evaluate = [&] {
    if (!options.evaluate) return;
    if (auto e = workload.Evaluate(world.model)) result.utility.push_back(*e);
  };
  evaluate();

  CampaignScheduler scheduler(config);
  RoundOptions round_options;
  round_options.training = config.training;
  round_options.behavior = options.behavior;
  round_options.adversary_trapdoor = options.adversary_trapdoor;
  round_options.ledger = &result.ledger;
  round_options.record_transcript = options.record_transcript;
  for (uint32_t t = 1; t <= config.rounds; ++t) {
    RoundPlan plan = scheduler.Next(t, world.devices);
    RoundOutput out = RunRound(world, plan, workload, round_options);
    result.transcript.insert(result.transcript.end(), std::make_move_iterator(out.transcript.begin()),
                             std::make_move_iterator(out.transcript.end()));
    result.model_sums.push_back(world.model_sum);
    const bool failed = !out.result.AllVerified();
    result.rounds.push_back(std::move(out.result));
    evaluate();
    if (failed && options.strict) {
      result.aborted = true;
      break;
    }
  }
  return result;
}

}  // namespace verfu
