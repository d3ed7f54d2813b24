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

// Protocol messages and their wire encoding. Every field has a fixed width
// set by the public parameters, integers are big-endian, so a message's size
// depends only on (d, |n^2|, |p|, |q|) and the cohort size.
//
//   prepare     id u32 | commitment
//   board       count u32 | (id u32 | commitment)*
//   upload      id u32 | flag u8 | d ciphertexts
//   aggregate   count u32 | (id u32 | flag u8)* | d ciphertexts
//   opening     id u32 | digest | r
//   openings    count u32 | opening*
//
// Flags travel as 0x01 (+1, normal) and 0xFF (-1, unlearning).

#ifndef VERFU_MESSAGES_H_
#define VERFU_MESSAGES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "verfu/codec.h"
#include "verfu/commitment.h"
#include "verfu/keys.h"
#include "verfu/lhh.h"
#include "verfu/paillier.h"

namespace verfu {

using DeviceId = uint32_t;

enum class Role { kNormal, kUnlearning };

struct DeviceState {
  DeviceId id = 0;
  Role role = Role::kNormal;
  EncodedVector cv;  // sum of this device's accepted normal contributions
  std::vector<uint32_t> selected_rounds;
  bool exited = false;
};

struct PrepareMsg {
  DeviceId id = 0;
  Commitment commitment;
  bool operator==(const PrepareMsg&) const = default;
};

struct BoardEntry {
  DeviceId id = 0;
  Commitment commitment;
  bool operator==(const BoardEntry&) const = default;
};

// Sorted by device id, no duplicates.
struct CommitmentBoard {
  std::vector<BoardEntry> entries;

  const Commitment* Find(DeviceId id) const;
  bool operator==(const CommitmentBoard&) const = default;
};

struct UploadMsg {
  DeviceId id = 0;
  int flag = 1;  // +1 or -1
  CiphertextVector ct;
  bool operator==(const UploadMsg&) const = default;
};

struct FlagEntry {
  DeviceId id = 0;
  int flag = 1;
  bool operator==(const FlagEntry&) const = default;
};

struct AggregateBroadcast {
  std::vector<FlagEntry> flags;
  CiphertextVector ct;
  bool operator==(const AggregateBroadcast&) const = default;
};

struct OpeningMsg {
  DeviceId id = 0;
  LhhDigest digest;
  BigUint randomness;
  bool operator==(const OpeningMsg&) const = default;
};

// Byte widths of every variable-size field, fixed by the public parameters.
struct WireWidths {
  size_t element = 0;     // |p| in bytes
  size_t scalar = 0;      // |q| in bytes
  size_t ciphertext = 0;  // |n^2| in bytes
  size_t dim = 0;

  static WireWidths For(const KeyMaterial& keys);
  size_t prepare() const { return 4 + element; }
  size_t upload() const { return 5 + dim * ciphertext; }
  size_t opening() const { return 4 + element + scalar; }
};

Bytes SerializePrepare(const PrepareMsg& msg, const WireWidths& w);
Bytes SerializeBoard(const CommitmentBoard& board, const WireWidths& w);
Bytes SerializeUpload(const UploadMsg& msg, const WireWidths& w);
Bytes SerializeAggregate(const AggregateBroadcast& msg, const WireWidths& w);
Bytes SerializeOpening(const OpeningMsg& msg, const WireWidths& w);
Bytes SerializeOpenings(std::span<const OpeningMsg> openings, const WireWidths& w);

// Parsers throw kLengthMismatch on a wrong total size and kInvalidArgument on
// an unknown flag byte.
PrepareMsg ParsePrepare(std::span<const uint8_t> bytes, const WireWidths& w);
CommitmentBoard ParseBoard(std::span<const uint8_t> bytes, const WireWidths& w);
UploadMsg ParseUpload(std::span<const uint8_t> bytes, const WireWidths& w);
AggregateBroadcast ParseAggregate(std::span<const uint8_t> bytes, const WireWidths& w);
OpeningMsg ParseOpening(std::span<const uint8_t> bytes, const WireWidths& w);
std::vector<OpeningMsg> ParseOpenings(std::span<const uint8_t> bytes, const WireWidths& w);

// Local verdict record: verifier u32 | decommit_ok u8 | unlearning_ok u8.
struct VerdictRecord {
  DeviceId verifier = 0;
  bool decommit_ok = false;
  bool unlearning_ok = false;
  bool passed() const { return decommit_ok && unlearning_ok; }
};
Bytes SerializeVerdict(const VerdictRecord& v);
VerdictRecord ParseVerdict(std::span<const uint8_t> bytes);

// Codec parameters published at setup: scale_bits u32 | max_terms u64 |
// bound as IEEE-754 bits u64.
Bytes SerializeCodec(const FixedPointSpec& spec);
FixedPointSpec ParseCodec(std::span<const uint8_t> bytes);

}  // namespace verfu

#endif  // VERFU_MESSAGES_H_
