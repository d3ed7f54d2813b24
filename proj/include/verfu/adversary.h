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

// Malicious-server behaviors. A behavior only acts in rounds with at least
// one unlearning device, since nobody verifies the other rounds.

#ifndef VERFU_ADVERSARY_H_
#define VERFU_ADVERSARY_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "verfu/commitment.h"
#include "verfu/lhh.h"
#include "verfu/messages.h"
#include "verfu/paillier.h"

namespace verfu {

struct Honest {};

// Leaves the listed unlearners' terms out of the aggregate. Empty targets
// means every unlearner of the round.
struct SkipUnlearn {
  std::vector<DeviceId> targets;
};

// Removes only numerator/denominator of each target's contribution: the
// ciphertext is scaled by numerator * denominator^-1 mod n before the
// subtraction.
struct PartialUnlearn {
  std::vector<DeviceId> targets;
  uint64_t numerator = 1;
  uint64_t denominator = 2;
};

// Adds `offset` (encoded units) to one coordinate of the aggregate.
struct TamperAggregate {
  size_t coordinate = 0;
  int64_t offset = 1;
};

// Replaces the target's opening with a random digest and randomness. The
// default target is the first normal device of the round.
struct ForgeOpening {
  std::optional<DeviceId> target;
};

// Opens the target's commitment to another digest using the trapdoor.
// With `consistent` set, the server also adds `offset` to coordinate
// `coordinate` of the aggregate and picks the digest that makes the hash
// equation hold, so every check passes.
struct EquivocateWithTrapdoor {
  std::optional<DeviceId> target;
  std::optional<LhhDigest> substitute;  // random when unset
  bool consistent = false;
  size_t coordinate = 0;
  int64_t offset = 1;
};

using ServerBehavior =
    std::variant<Honest, SkipUnlearn, PartialUnlearn, TamperAggregate, ForgeOpening, EquivocateWithTrapdoor>;

std::string BehaviorName(const ServerBehavior& behavior);
bool RequiresTrapdoor(const ServerBehavior& behavior);

// NAME[:args] with NAME one of honest, skip_unlearn[:id,id...],
// partial_unlearn[:num/den[:id,id...]], tamper_aggregate[:coord[:offset]],
// forge_opening[:id], equivocate[:id], equivocate_consistent[:id].
// Throws kInvalidArgument.
ServerBehavior ParseBehavior(std::string_view text);

// Whether the behavior deviates in a round with these uploads: the round
// has an unlearner and any explicit targets take part in their required role.
bool BehaviorActs(const ServerBehavior& behavior, std::span<const UploadMsg> uploads);

// The aggregate the server broadcasts. Honest and opening-only behaviors
// return the honest aggregate. Throws kTargetNotInCohort for explicit
// targets missing from the round, kInvalidArgument for a bad fraction or
// coordinate.
CiphertextVector CorruptAggregate(const ServerBehavior& behavior, std::span<const UploadMsg> uploads,
                                  const PaillierPublicKey& pk, Rng& rng);

// The openings the server forwards. The board is never modified since it
// was broadcast before the openings exist. Throws kTrapdoorRequired when
// equivocation has no trapdoor, kTargetNotInCohort as above.
std::vector<OpeningMsg> CorruptOpenings(const ServerBehavior& behavior, std::vector<OpeningMsg> openings,
                                        std::span<const UploadMsg> uploads, const LhhParams& lhh,
                                        const ComParams& com, const Trapdoor* td, Rng& rng);

}  // namespace verfu

#endif  // VERFU_ADVERSARY_H_
