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

// Device and server operations of one round:
//
//   Preparation            devices commit to a hash of v (normal) or cv
//                          (unlearning); the server broadcasts the board.
//   Aggregation/Unlearning devices upload Enc(v) or Enc(cv) with a flag; the
//                          server returns [[a]] = sum normal - sum unlearning.
//   Verification           devices open their commitments; every unlearning
//                          device checks the openings and Hash(a) == H.

#ifndef VERFU_PROTOCOL_H_
#define VERFU_PROTOCOL_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verfu/codec.h"
#include "verfu/commitment.h"
#include "verfu/lhh.h"
#include "verfu/messages.h"
#include "verfu/paillier.h"

namespace verfu {

class Workload;
struct TrainingOptions;

inline int RoleFlag(Role role) { return role == Role::kNormal ? 1 : -1; }

// v = w_local - w_prev after local training on the device's data.
std::vector<double> ComputeGradient(const DeviceState& device, uint32_t round, std::span<const double> w_prev,
                                    const Workload& workload, const TrainingOptions& training);

// cv += v. A device with an empty cv starts from zero.
void Accumulate(DeviceState& device, const EncodedVector& v);

struct PreparedCommitment {
  PrepareMsg msg;
  OpeningMsg opening;  // kept by the device until verification
};

// Normal devices hash v, unlearning devices hash cv (v is ignored).
PreparedCommitment DevicePrepare(const DeviceState& device, const EncodedVector& v, const LhhParams& lhh,
                                 const ComParams& com, Rng& rng);

// Sorted board. Throws kDuplicateDevice, or kMissingDevice when `cohort`
// is non-empty and some member sent nothing (or a non-member did).
CommitmentBoard ServerBoard(std::span<const PrepareMsg> msgs, std::span<const DeviceId> cohort = {});

// Normal devices encrypt v, unlearning devices encrypt cv. Uses CRT
// encryption when the secret key is available (identical ciphertexts).
UploadMsg DeviceUpload(const DeviceState& device, const EncodedVector& v, const PaillierKeyPair& keys, Rng& rng);

// [[a]] = (+) normal uploads (-) unlearning uploads. Throws kEmptyCohort or
// kLengthMismatch.
CiphertextVector ServerAggregateUnlearn(std::span<const UploadMsg> uploads, const PaillierPublicKey& pk);

std::vector<FlagEntry> FlagsOf(std::span<const UploadMsg> uploads);

struct DecryptedUpdate {
  EncodedVector a;
  std::vector<double> delta;  // decode(a, |U|)
};
// Throws kInvalidCiphertext, or kOutOfBound when a lies outside the codec
// range (which honest rounds never produce).
DecryptedUpdate DeviceDecryptUpdate(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
                                    std::span<const Ciphertext> ct, uint64_t cohort_size,
                                    const FixedPointSpec& spec);

// w + delta. Throws kLengthMismatch.
std::vector<double> ApplyUpdate(std::span<const double> w_prev, std::span<const double> delta);

// Plaintext reference of the rescaled update that keeps the surviving
// devices' mean: |U|/(|U|-k) * mean_all - 1/(|U|-k) * sum_unl v, where
// mean_all = (1/|U|) sum v. Throws kDivisionByZero when everyone unlearns.
struct FlaggedGradient {
  std::vector<double> v;
  bool unlearning = false;
};
std::vector<double> RescaledUpdateReference(std::span<const FlaggedGradient> gradients);

// decommit(board[i], encode(h_i), r_i) per opening. Throws kMissingOpening
// when a board entry has no opening. Openings for ids absent from the board
// map to false.
std::map<DeviceId, bool> VerifyDecommitments(const CommitmentBoard& board, std::span<const OpeningMsg> openings,
                                             const ComParams& com);

// H = prod h_i^f_i. Throws kLengthMismatch.
LhhDigest CombineHashes(const LhhParams& lhh, std::span<const OpeningMsg> openings,
                        std::span<const FlagEntry> flags);

// Hash(a mod q) == H.
bool VerifyUnlearning(const EncodedVector& a, const LhhDigest& h, const LhhParams& lhh);

struct VerifierVerdict {
  DeviceId verifier = 0;
  bool decommit_ok = false;
  bool unlearning_ok = false;
  std::string reason;  // empty on success

  bool passed() const { return decommit_ok && unlearning_ok; }
  VerdictRecord record() const { return VerdictRecord{verifier, decommit_ok, unlearning_ok}; }
};

// Everything one unlearning device sees when it verifies.
struct VerifierView {
  DeviceId self = 0;
  OpeningMsg own_opening;  // what the device itself committed to
  CommitmentBoard board;   // as broadcast to this device
  std::vector<FlagEntry> flags;
  std::optional<EncodedVector> a;  // nullopt when the decrypted aggregate fell outside the codec range
  std::vector<OpeningMsg> openings;  // as broadcast to this device
};

// Checks the other devices' openings against the board, then Hash(a) == H
// with H built from the flags, the device's own opening and the received
// openings for everyone else. Never throws on malformed content; problems
// become failure verdicts.
VerifierVerdict VerifyAsDevice(const VerifierView& view, const LhhParams& lhh, const ComParams& com);

}  // namespace verfu

#endif  // VERFU_PROTOCOL_H_
