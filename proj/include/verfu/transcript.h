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

// Message transcript. One record per logical delivery: a broadcast to k
// devices produces k records. Serialized as JSON lines with fields
// round, phase, sender, receiver, type, payload_hex, byte_len.

#ifndef VERFU_TRANSCRIPT_H_
#define VERFU_TRANSCRIPT_H_

#include <cstdint>
#include <compare>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verfu/algebra.h"

namespace verfu {

enum class Phase { kSetup, kPreparation, kAggregationUnlearning, kVerification };

std::string_view PhaseName(Phase phase);
// Throws kMalformedTranscript for an unknown name.
Phase ParsePhase(std::string_view name);

struct Party {
  enum class Kind { kDealer, kServer, kDevice };
  Kind kind = Kind::kServer;
  uint32_t id = 0;  // device id; unused otherwise

  static Party Server() { return Party{Kind::kServer, 0}; }
  static Party Dealer() { return Party{Kind::kDealer, 0}; }
  static Party Device(uint32_t id) { return Party{Kind::kDevice, id}; }
  bool is_device() const { return kind == Kind::kDevice; }

  // "server", "dealer" or "device:<id>".
  std::string ToString() const;
  static Party Parse(std::string_view text);

  auto operator<=>(const Party&) const = default;
};

// Message type tags.
inline constexpr const char* kMsgCodec = "codec";
inline constexpr const char* kMsgPrepare = "prepare";
inline constexpr const char* kMsgBoard = "board";
inline constexpr const char* kMsgUpload = "upload";
inline constexpr const char* kMsgAggregate = "aggregate";
inline constexpr const char* kMsgOpening = "opening";
inline constexpr const char* kMsgOpenings = "openings";
inline constexpr const char* kMsgVerdict = "verdict";

struct TranscriptRecord {
  uint32_t round = 0;
  Phase phase = Phase::kSetup;
  Party sender;
  Party receiver;
  std::string type;
  Bytes payload;

  // Local events (sender == receiver) carry no traffic.
  bool is_local() const { return sender == receiver; }
  bool operator==(const TranscriptRecord&) const = default;
};

std::string ToJsonLine(const TranscriptRecord& record);
// Throws kMalformedTranscript on bad JSON, missing fields, bad hex, or a
// byte_len that disagrees with the payload.
TranscriptRecord ParseJsonLine(std::string_view line);

void WriteTranscript(std::ostream& out, std::span<const TranscriptRecord> records);
std::vector<TranscriptRecord> ReadTranscript(std::istream& in);

}  // namespace verfu

#endif  // VERFU_TRANSCRIPT_H_
