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

#include "verfu/audit.h"

#include <algorithm>
#include <map>

#include "verfu/codec.h"
#include "verfu/protocol.h"
#include "verfu/status.h"

namespace verfu {
namespace {

// Messages of one round, keyed by the device on the other end.
struct RoundRecords {
  std::map<DeviceId, Bytes> prepares;
  std::map<DeviceId, Bytes> boards;
  std::map<DeviceId, Bytes> uploads;
  std::map<DeviceId, Bytes> aggregates;
  std::map<DeviceId, Bytes> openings_up;
  std::map<DeviceId, Bytes> openings_down;
  std::map<DeviceId, Bytes> verdicts;
};

bool IsType(const TranscriptRecord& r, const char* type) { return r.type == type; }

class RoundAuditor {
 public:
  RoundAuditor(uint32_t round, const RoundRecords& rec, const KeyMaterial& keys, const FixedPointSpec& codec,
               AuditReport& report)
      : round_(round), rec_(rec), keys_(keys), codec_(codec), widths_(WireWidths::For(keys)), report_(report) {}

  void Run() {
    CheckBoards();
    CheckAggregates();
    CheckOpenings();
    RecomputeVerdicts();
  }

 private:
  void Finding(std::string what) { report_.findings.push_back(AuditFinding{round_, std::move(what)}); }

  static std::string Dev(DeviceId id) { return "device:" + std::to_string(id); }

  void CheckBoards() {
    std::vector<PrepareMsg> prepares;
    try {
      for (const auto& [id, bytes] : rec_.prepares) {
        prepares.push_back(ParsePrepare(bytes, widths_));
        if (prepares.back().id != id) Finding("prepare from " + Dev(id) + " names another device");
      }
      Bytes expected = SerializeBoard(ServerBoard(prepares), widths_);
      for (const auto& [id, bytes] : rec_.boards) {
        if (bytes != expected) Finding("board sent to " + Dev(id) + " differs from the commitments received");
      }
    } catch (const VerfuError& e) {
      Finding(std::string("cannot rebuild the board: ") + e.what());
    }
  }

  void CheckAggregates() {
    if (rec_.uploads.empty()) return;
    try {
      std::vector<UploadMsg> uploads;
      for (const auto& [id, bytes] : rec_.uploads) {
        uploads.push_back(ParseUpload(bytes, widths_));
        if (uploads.back().id != id) Finding("upload from " + Dev(id) + " names another device");
      }
      AggregateBroadcast honest{FlagsOf(uploads), ServerAggregateUnlearn(uploads, keys_.pk())};
      Bytes expected = SerializeAggregate(honest, widths_);
      for (const auto& [id, bytes] : rec_.aggregates) {
        if (bytes != expected) Finding("aggregate sent to " + Dev(id) + " differs from the honest aggregate");
      }
    } catch (const VerfuError& e) {
      Finding(std::string("cannot recompute the aggregate: ") + e.what());
    }
  }

  void CheckOpenings() {
    if (rec_.openings_up.empty() && rec_.openings_down.empty()) return;
    try {
      std::vector<OpeningMsg> sent;
      for (const auto& [id, bytes] : rec_.openings_up) {
        sent.push_back(ParseOpening(bytes, widths_));
        if (sent.back().id != id) Finding("opening from " + Dev(id) + " names another device");
      }
      Bytes expected = SerializeOpenings(sent, widths_);
      for (const auto& [id, bytes] : rec_.openings_down) {
        if (bytes != expected) Finding("openings sent to " + Dev(id) + " differ from the openings received");
      }
    } catch (const VerfuError& e) {
      Finding(std::string("cannot parse openings: ") + e.what());
    }
  }

  // Rebuilds what verifier `id` saw; throws on unparseable content.
  VerifierView ViewOf(DeviceId id) const {
    auto need = [&](const std::map<DeviceId, Bytes>& m, const char* what) -> const Bytes& {
      auto it = m.find(id);
      if (it == m.end()) throw VerfuError(ErrorCode::kMalformedTranscript, std::string("no ") + what + " record");
      return it->second;
    };
    VerifierView view;
    view.self = id;
    view.own_opening = ParseOpening(need(rec_.openings_up, "own opening"), widths_);
    view.board = ParseBoard(need(rec_.boards, "board"), widths_);
    AggregateBroadcast agg = ParseAggregate(need(rec_.aggregates, "aggregate"), widths_);
    view.flags = std::move(agg.flags);
    try {
      view.a = DeviceDecryptUpdate(keys_.sk(), keys_.pk(), agg.ct, std::max<size_t>(view.flags.size(), 1), codec_).a;
    } catch (const VerfuError& e) {
      if (e.code() != ErrorCode::kOutOfBound && e.code() != ErrorCode::kInvalidCiphertext) throw;
    }
    view.openings = ParseOpenings(need(rec_.openings_down, "openings"), widths_);
    return view;
  }

  void RecomputeVerdicts() {
    std::set<DeviceId> verifiers;
    for (const auto& [id, bytes] : rec_.openings_down) verifiers.insert(id);
    for (const auto& [id, bytes] : rec_.verdicts) verifiers.insert(id);
    for (DeviceId id : verifiers) {
      AuditVerdict v;
      v.round = round_;
      v.verifier = id;
      v.audit.verifier = id;
      try {
        VerifierVerdict verdict = VerifyAsDevice(ViewOf(id), keys_.lhh, keys_.com);
        v.audit = verdict.record();
        v.reason = verdict.reason;
      } catch (const VerfuError& e) {
        v.reason = e.what();
      }
      if (auto it = rec_.verdicts.find(id); it != rec_.verdicts.end()) {
        try {
          v.live = ParseVerdict(it->second);
          if (v.live->verifier != id) Finding("verdict of " + Dev(id) + " names another device");
        } catch (const VerfuError& e) {
          Finding("unreadable verdict of " + Dev(id) + ": " + e.what());
        }
      }
      report_.verdicts.push_back(std::move(v));
    }
  }

  uint32_t round_;
  const RoundRecords& rec_;
  const KeyMaterial& keys_;
  const FixedPointSpec& codec_;
  WireWidths widths_;
  AuditReport& report_;
};

}  // namespace

bool AuditReport::AllPassed() const {
  return findings.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const AuditVerdict& v) { return v.audit.passed(); });
}

bool AuditReport::AgreesWithLive() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const AuditVerdict& v) { return v.agrees(); });
}

std::set<uint32_t> AuditReport::FlaggedRounds() const {
  std::set<uint32_t> rounds;
  for (const AuditFinding& f : findings) rounds.insert(f.round);
  for (const AuditVerdict& v : verdicts) {
    if (!v.agrees() || !v.audit.passed()) rounds.insert(v.round);
  }
  return rounds;
}

AuditReport AuditTranscript(std::span<const TranscriptRecord> records, const KeyMaterial& keys) {
  std::optional<FixedPointSpec> codec;
  std::map<uint32_t, RoundRecords> rounds;
  AuditReport report;
  for (const TranscriptRecord& r : records) {
    if (r.phase == Phase::kSetup) {
      if (IsType(r, kMsgCodec)) {
        try {
          codec = ParseCodec(r.payload);
        } catch (const VerfuError& e) {
          throw VerfuError(ErrorCode::kMalformedTranscript, std::string("setup record: ") + e.what());
        }
      }
      continue;
    }
    RoundRecords& rr = rounds[r.round];
    const bool up = r.sender.is_device() && r.receiver == Party::Server();
    const bool down = r.sender == Party::Server() && r.receiver.is_device();
    std::map<DeviceId, Bytes>* slot = nullptr;
    DeviceId id = 0;
    if (up) {
      id = r.sender.id;
      if (IsType(r, kMsgPrepare)) slot = &rr.prepares;
      if (IsType(r, kMsgUpload)) slot = &rr.uploads;
      if (IsType(r, kMsgOpening)) slot = &rr.openings_up;
    } else if (down) {
      id = r.receiver.id;
      if (IsType(r, kMsgBoard)) slot = &rr.boards;
      if (IsType(r, kMsgAggregate)) slot = &rr.aggregates;
      if (IsType(r, kMsgOpenings)) slot = &rr.openings_down;
    } else if (r.is_local() && r.sender.is_device() && IsType(r, kMsgVerdict)) {
      id = r.sender.id;
      slot = &rr.verdicts;
    }
    if (slot == nullptr) {
      report.findings.push_back(AuditFinding{r.round, "unexpected " + r.type + " record from " + r.sender.ToString() +
                                                          " to " + r.receiver.ToString()});
      continue;
    }
    if (!slot->emplace(id, r.payload).second) {
      report.findings.push_back(AuditFinding{r.round, "duplicate " + r.type + " record for device:" + std::to_string(id)});
    }
  }
  if (!codec) throw VerfuError(ErrorCode::kMalformedTranscript, "transcript has no codec setup record");
  for (const auto& [round, rr] : rounds) RoundAuditor(round, rr, keys, *codec, report).Run();
  return report;
}

}  // namespace verfu
