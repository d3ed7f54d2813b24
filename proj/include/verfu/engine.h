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

// Single-threaded round engine. Runs the three phases for one cohort,
// records every delivery in the transcript and ledger, and updates the
// world: model, cv bookkeeping, exits.

#ifndef VERFU_ENGINE_H_
#define VERFU_ENGINE_H_

#include <optional>
#include <vector>

#include "verfu/adversary.h"
#include "verfu/codec.h"
#include "verfu/keys.h"
#include "verfu/messages.h"
#include "verfu/metrics.h"
#include "verfu/protocol.h"
#include "verfu/simtrain.h"
#include "verfu/transcript.h"

namespace verfu {

struct World {
  const KeyMaterial* keys = nullptr;
  FixedPointSpec codec;
  std::vector<DeviceState> devices;  // devices[i].id == i
  std::vector<double> model;
  EncodedVector model_sum;  // integer sum of every applied a
  uint32_t round = 0;       // last completed round
  uint32_t cohort_size = 0;  // enforced when non-zero
  uint64_t seed = 0;

  // Throws kOutOfBound when the codec does not fit n or q.
  static World Create(const KeyMaterial& keys, const FixedPointSpec& codec, uint32_t num_devices,
                      std::vector<double> initial_model, uint32_t cohort_size, uint64_t seed);
};

struct RoundResult {
  uint32_t round = 0;
  RoundPlan plan;
  std::vector<double> model;  // w_t
  std::vector<double> delta;  // applied update (zeros when rejected)
  std::optional<EncodedVector> aggregate;  // decrypted a; nullopt when outside the codec range
  EncodedVector expected;  // plaintext sum normal v - sum unlearning cv
  std::vector<VerifierVerdict> verdicts;  // one per unlearning device
  std::vector<DeviceId> exited;
  bool behavior_acted = false;

  bool AllVerified() const;
  size_t Failures() const;
};

struct RoundOutput {
  RoundResult result;
  std::vector<TranscriptRecord> transcript;
};

struct RoundOptions {
  TrainingOptions training;
  ServerBehavior behavior = Honest{};
  const Trapdoor* adversary_trapdoor = nullptr;  // only the test harness sets this
  MetricsLedger* ledger = nullptr;
  bool record_transcript = true;
};

// Preconditions: non-empty cohort of non-exited devices, unlearning subset
// of the cohort, cohort size equal to world.cohort_size when set.
RoundOutput RunRound(World& world, const RoundPlan& plan, const Workload& workload, const RoundOptions& options);

}  // namespace verfu

#endif  // VERFU_ENGINE_H_
