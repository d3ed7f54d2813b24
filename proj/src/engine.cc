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

#include "verfu/engine.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "verfu/status.h"

namespace verfu {
namespace {

std::string DeviceLabel(DeviceId id, uint32_t round) {
  return "device:" + std::to_string(id) + ":round:" + std::to_string(round);
}

void CheckPlan(const World& world, const RoundPlan& plan) {
  if (plan.cohort.empty()) throw VerfuError(ErrorCode::kEmptyCohort, "round has no devices");
  if (world.cohort_size != 0 && plan.cohort.size() != world.cohort_size) {
    throw VerfuError(ErrorCode::kInvalidArgument, "cohort size must stay at " + std::to_string(world.cohort_size));
  }
  if (!std::is_sorted(plan.cohort.begin(), plan.cohort.end()) ||
      std::adjacent_find(plan.cohort.begin(), plan.cohort.end()) != plan.cohort.end()) {
    throw VerfuError(ErrorCode::kDuplicateDevice, "cohort must be sorted without duplicates");
  }
  for (DeviceId id : plan.cohort) {
    if (id >= world.devices.size()) throw VerfuError(ErrorCode::kMissingDevice, "unknown device " + std::to_string(id));
    const DeviceState& dev = world.devices[id];
    if (dev.exited) throw VerfuError(ErrorCode::kInvalidArgument, "device " + std::to_string(id) + " already exited");
    const bool listed = std::binary_search(plan.unlearning.begin(), plan.unlearning.end(), id);
    if (dev.role == Role::kUnlearning && !listed) {
      throw VerfuError(ErrorCode::kInvalidArgument, "unlearning device " + std::to_string(id) + " not listed");
    }
  }
  for (DeviceId id : plan.unlearning) {
    if (!std::binary_search(plan.cohort.begin(), plan.cohort.end(), id)) {
      throw VerfuError(ErrorCode::kTargetNotInCohort, "unlearning device " + std::to_string(id) + " not in cohort");
    }
  }
}

class PhaseClock {
 public:
  PhaseClock(MetricsLedger* ledger, uint32_t round) : ledger_(ledger), round_(round) {}

  template <class Fn>
  void Run(Phase phase, const Party& party, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    Charge(phase, party, start);
  }

  void Charge(Phase phase, const Party& party, std::chrono::steady_clock::time_point start) {
    if (!ledger_) return;
    std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    ledger_->AddCpuTime(round_, phase, party, ms.count());
  }

 private:
  MetricsLedger* ledger_;
  uint32_t round_;
};

}  // namespace

World World::Create(const KeyMaterial& keys, const FixedPointSpec& codec, uint32_t num_devices,
                    std::vector<double> initial_model, uint32_t cohort_size, uint64_t seed) {
  codec.ValidateFor(keys.pk().n);
  codec.ValidateFor(keys.lhh.group.q_order);
  const size_t d = keys.lhh.dim();
  if (initial_model.size() != d) throw VerfuError(ErrorCode::kDimMismatch, "model dimension differs from the keys");
  World world;
  world.keys = &keys;
  world.codec = codec;
  world.devices.resize(num_devices);
  for (DeviceId i = 0; i < num_devices; ++i) {
    world.devices[i].id = i;
    world.devices[i].cv.coords.assign(d, 0);
  }
  world.model = std::move(initial_model);
  world.model_sum.coords.assign(d, 0);
  world.cohort_size = cohort_size;
  world.seed = seed;
  return world;
}

bool RoundResult::AllVerified() const { return Failures() == 0; }

size_t RoundResult::Failures() const {
  return std::count_if(verdicts.begin(), verdicts.end(), [](const VerifierVerdict& v) { return !v.passed(); });
}

RoundOutput RunRound(World& world, const RoundPlan& plan, const Workload& workload, const RoundOptions& options) {
  CheckPlan(world, plan);
  const KeyMaterial& keys = *world.keys;
  const WireWidths widths = WireWidths::For(keys);
  const uint32_t t = plan.round;
  const size_t d = keys.lhh.dim();
  const size_t n = plan.cohort.size();
  PhaseClock clock(options.ledger, t);

  RoundOutput out;
  RoundResult& result = out.result;
  result.round = t;
  result.plan = plan;
  result.expected.coords.assign(d, 0);
  auto emit = [&](Phase phase, const Party& from, const Party& to, const char* type, Bytes payload) {
    TranscriptRecord rec{t, phase, from, to, type, std::move(payload)};
    if (options.ledger) options.ledger->RecordMessage(rec);
    if (options.record_transcript) out.transcript.push_back(std::move(rec));
  };

  for (DeviceId id : plan.unlearning) world.devices[id].role = Role::kUnlearning;
  for (DeviceId id : plan.cohort) world.devices[id].selected_rounds.push_back(t);
  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (DeviceId id : plan.cohort) rngs.push_back(Rng::Derive(world.seed, DeviceLabel(id, t)));
  Rng server_rng = Rng::Derive(world.seed, "server:round:" + std::to_string(t));

  // Preparation.
  std::vector<EncodedVector> v(n);
  std::vector<OpeningMsg> openings(n);
  std::vector<PrepareMsg> prepares(n);
  for (size_t k = 0; k < n; ++k) {
    const DeviceState& dev = world.devices[plan.cohort[k]];
    clock.Run(Phase::kPreparation, Party::Device(dev.id), [&] {
      if (dev.role == Role::kNormal) {
        v[k] = Encode(ComputeGradient(dev, t, world.model, workload, options.training), world.codec);
      }
      PreparedCommitment prep = DevicePrepare(dev, v[k], keys.lhh, keys.com, rngs[k]);
      prepares[k] = prep.msg;
      openings[k] = std::move(prep.opening);
    });
    emit(Phase::kPreparation, Party::Device(dev.id), Party::Server(), kMsgPrepare,
         SerializePrepare(prepares[k], widths));
  }
  CommitmentBoard board;
  clock.Run(Phase::kPreparation, Party::Server(), [&] { board = ServerBoard(prepares, plan.cohort); });
  const Bytes board_bytes = SerializeBoard(board, widths);
  for (DeviceId id : plan.cohort) emit(Phase::kPreparation, Party::Server(), Party::Device(id), kMsgBoard, board_bytes);

  // Aggregation and unlearning.
  std::vector<UploadMsg> uploads(n);
  for (size_t k = 0; k < n; ++k) {
    DeviceState& dev = world.devices[plan.cohort[k]];
    clock.Run(Phase::kAggregationUnlearning, Party::Device(dev.id),
              [&] { uploads[k] = DeviceUpload(dev, v[k], keys.paillier, rngs[k]); });
    emit(Phase::kAggregationUnlearning, Party::Device(dev.id), Party::Server(), kMsgUpload,
         SerializeUpload(uploads[k], widths));
    if (dev.role == Role::kNormal) {
      result.expected += v[k];
      Accumulate(dev, v[k]);
    } else {
      result.expected -= dev.cv;
    }
  }
  AggregateBroadcast broadcast;
  clock.Run(Phase::kAggregationUnlearning, Party::Server(), [&] {
    result.behavior_acted = BehaviorActs(options.behavior, uploads);
    broadcast.ct = result.behavior_acted ? CorruptAggregate(options.behavior, uploads, keys.pk(), server_rng)
                                         : ServerAggregateUnlearn(uploads, keys.pk());
    broadcast.flags = FlagsOf(uploads);
  });
  const Bytes aggregate_bytes = SerializeAggregate(broadcast, widths);
  for (DeviceId id : plan.cohort) {
    emit(Phase::kAggregationUnlearning, Party::Server(), Party::Device(id), kMsgAggregate, aggregate_bytes);
  }
  // Decryption is deterministic, so it runs once; every device is charged
  // the same time.
  auto decrypt_start = std::chrono::steady_clock::now();
  try {
    DecryptedUpdate update = DeviceDecryptUpdate(keys.sk(), keys.pk(), broadcast.ct, n, world.codec);
    result.aggregate = std::move(update.a);
    result.delta = std::move(update.delta);
  } catch (const VerfuError& e) {
    if (e.code() != ErrorCode::kOutOfBound) throw;
    result.delta.assign(d, 0.0);
  }
  for (DeviceId id : plan.cohort) clock.Charge(Phase::kAggregationUnlearning, Party::Device(id), decrypt_start);

  // Verification, only when somebody has to verify.
  if (!plan.unlearning.empty()) {
    for (size_t k = 0; k < n; ++k) {
      emit(Phase::kVerification, Party::Device(plan.cohort[k]), Party::Server(), kMsgOpening,
           SerializeOpening(openings[k], widths));
    }
    std::vector<OpeningMsg> delivered;
    clock.Run(Phase::kVerification, Party::Server(), [&] {
      delivered = result.behavior_acted ? CorruptOpenings(options.behavior, openings, uploads, keys.lhh, keys.com,
                                                          options.adversary_trapdoor, server_rng)
                                        : openings;
    });
    const Bytes openings_bytes = SerializeOpenings(delivered, widths);
    for (DeviceId id : plan.unlearning) {
      emit(Phase::kVerification, Party::Server(), Party::Device(id), kMsgOpenings, openings_bytes);
    }
    for (DeviceId id : plan.unlearning) {
      const size_t k = std::lower_bound(plan.cohort.begin(), plan.cohort.end(), id) - plan.cohort.begin();
      VerifierVerdict verdict;
      clock.Run(Phase::kVerification, Party::Device(id), [&] {
        VerifierView view{id, openings[k], board, broadcast.flags, result.aggregate, delivered};
        verdict = VerifyAsDevice(view, keys.lhh, keys.com);
      });
      emit(Phase::kVerification, Party::Device(id), Party::Device(id), kMsgVerdict, SerializeVerdict(verdict.record()));
      result.verdicts.push_back(std::move(verdict));
    }
  }

  if (result.aggregate) {
    world.model = ApplyUpdate(world.model, result.delta);
    world.model_sum += *result.aggregate;
  }
  for (const VerifierVerdict& verdict : result.verdicts) {
    if (!verdict.passed()) continue;
    world.devices[verdict.verifier].exited = true;
    result.exited.push_back(verdict.verifier);
  }
  world.round = t;
  result.model = world.model;
  return out;
}

}  // namespace verfu
