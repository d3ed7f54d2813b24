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

// Offline replay of a transcript. Every unlearning device's verdict is
// recomputed from the bytes that device received, independently of the
// engine, and the server's broadcasts are cross-checked against what the
// devices sent.

#ifndef VERFU_AUDIT_H_
#define VERFU_AUDIT_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "verfu/keys.h"
#include "verfu/messages.h"
#include "verfu/transcript.h"

namespace verfu {

struct AuditVerdict {
  uint32_t round = 0;
  DeviceId verifier = 0;
  VerdictRecord audit;
  std::optional<VerdictRecord> live;  // the verdict the device logged
  std::string reason;                 // why the recomputed check failed

  bool agrees() const {
    return live && live->decommit_ok == audit.decommit_ok && live->unlearning_ok == audit.unlearning_ok;
  }
};

// A broadcast that disagrees with the messages it should have been built
// from, or a payload that does not parse.
struct AuditFinding {
  uint32_t round = 0;
  std::string what;
};

struct AuditReport {
  std::vector<AuditVerdict> verdicts;
  std::vector<AuditFinding> findings;

  bool AllPassed() const;       // every recomputed verdict passes, no findings
  bool AgreesWithLive() const;  // every recomputed verdict equals the logged one
  // Rounds with a finding, a failed recomputed verdict or a disagreement.
  std::set<uint32_t> FlaggedRounds() const;
};

// Throws kMalformedTranscript when the setup record is missing.
AuditReport AuditTranscript(std::span<const TranscriptRecord> records, const KeyMaterial& keys);

}  // namespace verfu

#endif  // VERFU_AUDIT_H_
