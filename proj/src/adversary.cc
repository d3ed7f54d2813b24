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

#include "verfu/adversary.h"

#include <algorithm>
#include <charconv>
#include <string>

#include "verfu/codec.h"
#include "verfu/protocol.h"
#include "verfu/status.h"

namespace verfu {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void BadBehavior(std::string_view text, const std::string& why) {
  throw VerfuError(ErrorCode::kInvalidArgument, "behavior '" + std::string(text) + "': " + why);
}

template <class T>
T ParseNumber(std::string_view text, std::string_view whole) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    BadBehavior(whole, "'" + std::string(text) + "' is not a number");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<DeviceId> ParseIds(std::string_view text, std::string_view whole) {
  std::vector<DeviceId> ids;
  for (std::string_view part : Split(text, ',')) ids.push_back(ParseNumber<DeviceId>(part, whole));
  return ids;
}

const UploadMsg* FindUpload(std::span<const UploadMsg> uploads, DeviceId id) {
  for (const UploadMsg& u : uploads) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

bool HasUnlearner(std::span<const UploadMsg> uploads) {
  return std::any_of(uploads.begin(), uploads.end(), [](const UploadMsg& u) { return u.flag < 0; });
}

bool AllAreUnlearners(std::span<const DeviceId> targets, std::span<const UploadMsg> uploads) {
  return std::all_of(targets.begin(), targets.end(), [&](DeviceId id) {
    const UploadMsg* u = FindUpload(uploads, id);
    return u != nullptr && u->flag < 0;
  });
}

// Explicit targets must be unlearners of this round; empty means all.
std::vector<DeviceId> ResolveUnlearnTargets(std::span<const DeviceId> targets, std::span<const UploadMsg> uploads) {
  if (!AllAreUnlearners(targets, uploads)) {
    throw VerfuError(ErrorCode::kTargetNotInCohort, "target is not an unlearning device of this round");
  }
  if (!targets.empty()) return {targets.begin(), targets.end()};
  std::vector<DeviceId> all;
  for (const UploadMsg& u : uploads) {
    if (u.flag < 0) all.push_back(u.id);
  }
  return all;
}

// Explicit target must be in the cohort; default is the first normal device,
// or the first device when everyone unlearns.
DeviceId ResolveOpeningTarget(const std::optional<DeviceId>& target, std::span<const UploadMsg> uploads) {
  if (uploads.empty()) throw VerfuError(ErrorCode::kEmptyCohort, "empty round");
  if (target) {
    if (!FindUpload(uploads, *target)) throw VerfuError(ErrorCode::kTargetNotInCohort, "target not in the cohort");
    return *target;
  }
  for (const UploadMsg& u : uploads) {
    if (u.flag > 0) return u.id;
  }
  return uploads.front().id;
}

bool Contains(std::span<const DeviceId> ids, DeviceId id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); }

CiphertextVector AggregateOrZero(std::span<const UploadMsg> uploads, size_t d, const PaillierPublicKey& pk) {
  if (uploads.empty()) return CiphertextVector(d, Ciphertext{BigUint(1)});  // Enc(0) with r = 1
  return ServerAggregateUnlearn(uploads, pk);
}

CiphertextVector AddOffset(CiphertextVector agg, size_t coordinate, int64_t offset, const PaillierPublicKey& pk,
                           Rng& rng) {
  if (coordinate >= agg.size()) throw VerfuError(ErrorCode::kInvalidArgument, "tamper coordinate out of range");
  if (offset == 0) throw VerfuError(ErrorCode::kInvalidArgument, "tamper offset must be non-zero");
  EncodedVector delta{{offset}};
  agg[coordinate] = CtAdd(pk, agg[coordinate], Encrypt(pk, ToRing(delta, pk.n)[0], rng));
  return agg;
}

LhhDigest RandomDigest(const LhhParams& lhh, const LhhDigest& avoid, Rng& rng) {
  const GroupDesc& g = lhh.group;
  while (true) {
    LhhDigest h{ModPow(lhh.generators.at(0), rng.Between(1, g.q_order), g.p_mod)};
    if (!(h == avoid)) return h;
  }
}

OpeningMsg& FindOpening(std::vector<OpeningMsg>& openings, DeviceId id) {
  for (OpeningMsg& o : openings) {
    if (o.id == id) return o;
  }
  throw VerfuError(ErrorCode::kMissingOpening, "no opening for device " + std::to_string(id));
}

}  // namespace

std::string BehaviorName(const ServerBehavior& behavior) {
  return std::visit(Overloaded{
                        [](const Honest&) { return std::string("honest"); },
                        [](const SkipUnlearn&) { return std::string("skip_unlearn"); },
                        [](const PartialUnlearn&) { return std::string("partial_unlearn"); },
                        [](const TamperAggregate&) { return std::string("tamper_aggregate"); },
                        [](const ForgeOpening&) { return std::string("forge_opening"); },
                        [](const EquivocateWithTrapdoor& e) {
                          return std::string(e.consistent ? "equivocate_consistent" : "equivocate");
                        },
                    },
                    behavior);
}

bool RequiresTrapdoor(const ServerBehavior& behavior) {
  return std::holds_alternative<EquivocateWithTrapdoor>(behavior);
}

ServerBehavior ParseBehavior(std::string_view text) {
  std::vector<std::string_view> parts = Split(text, ':');
  std::string_view name = parts[0];
  auto arg = [&](size_t i) -> std::optional<std::string_view> {
    return i < parts.size() ? std::optional(parts[i]) : std::nullopt;
  };
  auto max_args = [&](size_t n) {
    if (parts.size() > n + 1) BadBehavior(text, "too many arguments");
  };

  if (name == "honest") {
    max_args(0);
    return Honest{};
  }
  if (name == "skip_unlearn") {
    max_args(1);
    SkipUnlearn b;
    if (auto a = arg(1)) b.targets = ParseIds(*a, text);
    return b;
  }
  if (name == "partial_unlearn") {
    max_args(2);
    PartialUnlearn b;
    if (auto a = arg(1)) {
      std::vector<std::string_view> frac = Split(*a, '/');
      if (frac.size() != 2) BadBehavior(text, "fraction must be num/den");
      b.numerator = ParseNumber<uint64_t>(frac[0], text);
      b.denominator = ParseNumber<uint64_t>(frac[1], text);
    }
    if (b.numerator == 0 || b.numerator >= b.denominator) BadBehavior(text, "fraction must lie in (0, 1)");
    if (auto a = arg(2)) b.targets = ParseIds(*a, text);
    return b;
  }
  if (name == "tamper_aggregate") {
    max_args(2);
    TamperAggregate b;
    if (auto a = arg(1)) b.coordinate = ParseNumber<size_t>(*a, text);
    if (auto a = arg(2)) b.offset = ParseNumber<int64_t>(*a, text);
    if (b.offset == 0) BadBehavior(text, "offset must be non-zero");
    return b;
  }
  if (name == "forge_opening") {
    max_args(1);
    ForgeOpening b;
    if (auto a = arg(1)) b.target = ParseNumber<DeviceId>(*a, text);
    return b;
  }
  if (name == "equivocate" || name == "equivocate_consistent") {
    max_args(1);
    EquivocateWithTrapdoor b;
    b.consistent = name == "equivocate_consistent";
    if (auto a = arg(1)) b.target = ParseNumber<DeviceId>(*a, text);
    return b;
  }
  BadBehavior(text, "unknown behavior name");
}

bool BehaviorActs(const ServerBehavior& behavior, std::span<const UploadMsg> uploads) {
  if (!HasUnlearner(uploads)) return false;
  return std::visit(Overloaded{
                        [](const Honest&) { return false; },
                        [&](const SkipUnlearn& b) { return AllAreUnlearners(b.targets, uploads); },
                        [&](const PartialUnlearn& b) { return AllAreUnlearners(b.targets, uploads); },
                        [](const TamperAggregate&) { return true; },
                        [&](const ForgeOpening& b) { return !b.target || FindUpload(uploads, *b.target); },
                        [&](const EquivocateWithTrapdoor& b) {
                          return !b.target || FindUpload(uploads, *b.target);
                        },
                    },
                    behavior);
}

CiphertextVector CorruptAggregate(const ServerBehavior& behavior, std::span<const UploadMsg> uploads,
                                  const PaillierPublicKey& pk, Rng& rng) {
  if (uploads.empty()) throw VerfuError(ErrorCode::kEmptyCohort, "no uploads to aggregate");
  const size_t d = uploads.front().ct.size();
  return std::visit(
      Overloaded{
          [&](const SkipUnlearn& b) {
            std::vector<DeviceId> targets = ResolveUnlearnTargets(b.targets, uploads);
            std::vector<UploadMsg> kept;
            for (const UploadMsg& u : uploads) {
              if (!Contains(targets, u.id)) kept.push_back(u);
            }
            return AggregateOrZero(kept, d, pk);
          },
          [&](const PartialUnlearn& b) {
            if (b.numerator == 0 || b.numerator >= b.denominator) {
              throw VerfuError(ErrorCode::kInvalidArgument, "fraction must lie in (0, 1)");
            }
            std::vector<DeviceId> targets = ResolveUnlearnTargets(b.targets, uploads);
            const BigUint k = Mod(BigUint(static_cast<unsigned long>(b.numerator)) *
                                      ModInv(BigUint(static_cast<unsigned long>(b.denominator)), pk.n),
                                  pk.n);
            std::vector<UploadMsg> kept;
            for (const UploadMsg& u : uploads) {
              if (!Contains(targets, u.id)) kept.push_back(u);
            }
            CiphertextVector agg = AggregateOrZero(kept, d, pk);
            for (DeviceId id : targets) {
              const UploadMsg* u = FindUpload(uploads, id);
              for (size_t j = 0; j < d; ++j) agg[j] = CtSub(pk, agg[j], CtScale(pk, u->ct[j], k));
            }
            return agg;
          },
          [&](const TamperAggregate& b) {
            return AddOffset(ServerAggregateUnlearn(uploads, pk), b.coordinate, b.offset, pk, rng);
          },
          [&](const EquivocateWithTrapdoor& b) {
            CiphertextVector agg = ServerAggregateUnlearn(uploads, pk);
            return b.consistent ? AddOffset(std::move(agg), b.coordinate, b.offset, pk, rng) : agg;
          },
          [&](const auto&) { return ServerAggregateUnlearn(uploads, pk); },
      },
      behavior);
}

std::vector<OpeningMsg> CorruptOpenings(const ServerBehavior& behavior, std::vector<OpeningMsg> openings,
                                        std::span<const UploadMsg> uploads, const LhhParams& lhh,
                                        const ComParams& com, const Trapdoor* td, Rng& rng) {
  if (const auto* b = std::get_if<ForgeOpening>(&behavior)) {
    OpeningMsg& o = FindOpening(openings, ResolveOpeningTarget(b->target, uploads));
    o.digest = RandomDigest(lhh, o.digest, rng);
    o.randomness = rng.Below(com.group.q_order);
    return openings;
  }
  if (const auto* b = std::get_if<EquivocateWithTrapdoor>(&behavior)) {
    if (td == nullptr) throw VerfuError(ErrorCode::kTrapdoorRequired, "equivocation needs the commitment trapdoor");
    const DeviceId target = ResolveOpeningTarget(b->target, uploads);
    OpeningMsg& o = FindOpening(openings, target);
    LhhDigest substitute;
    if (b->consistent) {
      // Shift H by g_coord^offset: h' = h * g_coord^(f * offset).
      if (b->coordinate >= lhh.dim()) throw VerfuError(ErrorCode::kInvalidArgument, "coordinate out of range");
      const int flag = FindUpload(uploads, target)->flag;
      const GroupDesc& g = lhh.group;
      BigUint e = Mod(BigUint(static_cast<long>(flag * b->offset)), g.q_order);
      substitute.value = o.digest.value * ModPow(lhh.generators[b->coordinate], e, g.p_mod) % g.p_mod;
    } else {
      substitute = b->substitute ? *b->substitute : RandomDigest(lhh, o.digest, rng);
    }
    o.randomness = Equivocate(com, *td, EncodeMessage(com, o.digest), o.randomness, EncodeMessage(com, substitute));
    o.digest = std::move(substitute);
    return openings;
  }
  return openings;
}

}  // namespace verfu
