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

#include "verfu/transcript.h"

#include <charconv>

#include "json.hpp"
#include "verfu/status.h"

namespace verfu {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void Malformed(const std::string& why) { throw VerfuError(ErrorCode::kMalformedTranscript, why); }

}  // namespace

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kSetup:
      return "Setup";
    case Phase::kPreparation:
      return "Preparation";
    case Phase::kAggregationUnlearning:
      return "AggregationUnlearning";
    case Phase::kVerification:
      return "Verification";
  }
  return "Unknown";
}

Phase ParsePhase(std::string_view name) {
  for (Phase p : {Phase::kSetup, Phase::kPreparation, Phase::kAggregationUnlearning, Phase::kVerification}) {
    if (PhaseName(p) == name) return p;
  }
  Malformed("unknown phase '" + std::string(name) + "'");
}

std::string Party::ToString() const {
  switch (kind) {
    case Kind::kServer:
      return "server";
    case Kind::kDealer:
      return "dealer";
    case Kind::kDevice:
      return "device:" + std::to_string(id);
  }
  return "unknown";
}

Party Party::Parse(std::string_view text) {
  if (text == "server") return Server();
  if (text == "dealer") return Dealer();
  constexpr std::string_view kPrefix = "device:";
  if (text.starts_with(kPrefix)) {
    std::string_view digits = text.substr(kPrefix.size());
    uint32_t id = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) return Device(id);
  }
  Malformed("unknown party '" + std::string(text) + "'");
}

std::string ToJsonLine(const TranscriptRecord& record) {
  ordered_json j;
  j["round"] = record.round;
  j["phase"] = PhaseName(record.phase);
  j["sender"] = record.sender.ToString();
  j["receiver"] = record.receiver.ToString();
  j["type"] = record.type;
  j["payload_hex"] = ToHex(record.payload);
  j["byte_len"] = record.payload.size();
  return j.dump();
}

TranscriptRecord ParseJsonLine(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::exception& e) {
    Malformed(std::string("bad JSON: ") + e.what());
  }
  TranscriptRecord r;
  try {
    r.round = j.at("round").get<uint32_t>();
    r.phase = ParsePhase(j.at("phase").get<std::string>());
    r.sender = Party::Parse(j.at("sender").get<std::string>());
    r.receiver = Party::Parse(j.at("receiver").get<std::string>());
    r.type = j.at("type").get<std::string>();
    std::string hex = j.at("payload_hex").get<std::string>();
    try {
      r.payload = FromHex(hex);
    } catch (const VerfuError&) {
      Malformed("payload_hex is not valid hex");
    }
    if (j.at("byte_len").get<size_t>() != r.payload.size()) Malformed("byte_len does not match payload");
  } catch (const ordered_json::exception& e) {
    Malformed(std::string("bad record: ") + e.what());
  }
  return r;
}

void WriteTranscript(std::ostream& out, std::span<const TranscriptRecord> records) {
  for (const TranscriptRecord& r : records) out << ToJsonLine(r) << '\n';
}

std::vector<TranscriptRecord> ReadTranscript(std::istream& in) {
  std::vector<TranscriptRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(ParseJsonLine(line));
    } catch (const VerfuError& e) {
      Malformed("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace verfu
