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

#include "verfu/protocol.h"

#include <algorithm>
#include <set>
#include <string>

#include "verfu/simtrain.h"
#include "verfu/status.h"

namespace verfu {
namespace {

const EncodedVector& RoleVector(const DeviceState& device, const EncodedVector& v) {
  return device.role == Role::kNormal ? v : device.cv;
}

std::string Id(DeviceId id) { return std::to_string(id); }

}  // namespace

std::vector<double> ComputeGradient(const DeviceState& device, uint32_t round, std::span<const double> w_prev,
                                    const Workload& workload, const TrainingOptions& training) {
  return workload.LocalTrain(device.id, round, w_prev, training);
}

void Accumulate(DeviceState& device, const EncodedVector& v) {
  if (device.cv.size() == 0) device.cv.coords.assign(v.size(), 0);
  device.cv += v;
}

PreparedCommitment DevicePrepare(const DeviceState& device, const EncodedVector& v, const LhhParams& lhh,
                                 const ComParams& com, Rng& rng) {
  const EncodedVector& m = RoleVector(device, v);
  if (m.size() != lhh.dim()) {
    throw VerfuError(ErrorCode::kDimMismatch, "device " + Id(device.id) + " vector has the wrong dimension");
  }
  LhhDigest h = LhhHashSigned(lhh, m.coords);
  BigUint r = rng.Below(com.group.q_order);
  Commitment c = Commit(com, EncodeMessage(com, h), r);
  return PreparedCommitment{PrepareMsg{device.id, c}, OpeningMsg{device.id, std::move(h), std::move(r)}};
}

CommitmentBoard ServerBoard(std::span<const PrepareMsg> msgs, std::span<const DeviceId> cohort) {
  CommitmentBoard board;
  for (const PrepareMsg& m : msgs) board.entries.push_back(BoardEntry{m.id, m.commitment});
  std::sort(board.entries.begin(), board.entries.end(),
            [](const BoardEntry& a, const BoardEntry& b) { return a.id < b.id; });
  for (size_t i = 1; i < board.entries.size(); ++i) {
    if (board.entries[i].id == board.entries[i - 1].id) {
      throw VerfuError(ErrorCode::kDuplicateDevice, "device " + Id(board.entries[i].id) + " committed twice");
    }
  }
  if (!cohort.empty()) {
    std::set<DeviceId> want(cohort.begin(), cohort.end());
    for (DeviceId id : want) {
      if (!board.Find(id)) throw VerfuError(ErrorCode::kMissingDevice, "no commitment from device " + Id(id));
    }
    if (board.entries.size() != want.size()) {
      throw VerfuError(ErrorCode::kMissingDevice, "commitment from a device outside the cohort");
    }
  }
  return board;
}

UploadMsg DeviceUpload(const DeviceState& device, const EncodedVector& v, const PaillierKeyPair& keys, Rng& rng) {
  const EncodedVector& m = RoleVector(device, v);
  std::vector<BigUint> residues = ToRing(m, keys.pk.n);
  return UploadMsg{device.id, RoleFlag(device.role), VecEncryptCrt(keys, residues, rng)};
}

CiphertextVector ServerAggregateUnlearn(std::span<const UploadMsg> uploads, const PaillierPublicKey& pk) {
  if (uploads.empty()) throw VerfuError(ErrorCode::kEmptyCohort, "no uploads to aggregate");
  const size_t d = uploads.front().ct.size();
  // Multiply positives and negatives separately; one inverse per coordinate.
  CiphertextVector plus(d, Ciphertext{BigUint(1)});
  CiphertextVector minus(d, Ciphertext{BigUint(1)});
  bool any_minus = false;
  for (const UploadMsg& u : uploads) {
    if (u.ct.size() != d) throw VerfuError(ErrorCode::kLengthMismatch, "uploads differ in dimension");
    CiphertextVector& acc = u.flag > 0 ? plus : minus;
    any_minus |= u.flag < 0;
    for (size_t j = 0; j < d; ++j) acc[j].c = acc[j].c * u.ct[j].c % pk.n_sq;
  }
  if (!any_minus) return plus;
  return VecSub(pk, plus, minus);
}

std::vector<FlagEntry> FlagsOf(std::span<const UploadMsg> uploads) {
  std::vector<FlagEntry> flags;
  flags.reserve(uploads.size());
  for (const UploadMsg& u : uploads) flags.push_back(FlagEntry{u.id, u.flag});
  return flags;
}

DecryptedUpdate DeviceDecryptUpdate(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
                                    std::span<const Ciphertext> ct, uint64_t cohort_size,
                                    const FixedPointSpec& spec) {
  std::vector<BigUint> residues = VecDecrypt(sk, pk, ct);
  DecryptedUpdate out;
  out.a = FromRing(residues, pk.n, spec);
  out.delta = Decode(out.a, cohort_size, spec);
  return out;
}

std::vector<double> ApplyUpdate(std::span<const double> w_prev, std::span<const double> delta) {
  if (w_prev.size() != delta.size()) throw VerfuError(ErrorCode::kLengthMismatch, "model and update differ in length");
  std::vector<double> w(w_prev.begin(), w_prev.end());
  for (size_t j = 0; j < w.size(); ++j) w[j] += delta[j];
  return w;
}

std::vector<double> RescaledUpdateReference(std::span<const FlaggedGradient> gradients) {
  if (gradients.empty()) throw VerfuError(ErrorCode::kEmptyCohort, "no gradients");
  const size_t d = gradients.front().v.size();
  const double cohort = static_cast<double>(gradients.size());
  size_t unlearning = 0;
  std::vector<double> total(d, 0.0), removed(d, 0.0);
  for (const FlaggedGradient& g : gradients) {
    if (g.v.size() != d) throw VerfuError(ErrorCode::kLengthMismatch, "gradients differ in length");
    for (size_t j = 0; j < d; ++j) total[j] += g.v[j];
    if (g.unlearning) {
      ++unlearning;
      for (size_t j = 0; j < d; ++j) removed[j] += g.v[j];
    }
  }
  if (unlearning == gradients.size()) throw VerfuError(ErrorCode::kDivisionByZero, "every device is unlearning");
  const double kept = cohort - static_cast<double>(unlearning);
  std::vector<double> out(d);
  for (size_t j = 0; j < d; ++j) out[j] = cohort / kept * (total[j] / cohort) - removed[j] / kept;
  return out;
}

std::map<DeviceId, bool> VerifyDecommitments(const CommitmentBoard& board, std::span<const OpeningMsg> openings,
                                             const ComParams& com) {
  std::map<DeviceId, bool> result;
  for (const OpeningMsg& o : openings) {
    const Commitment* c = board.Find(o.id);
    bool ok = c != nullptr && !result.contains(o.id) && o.randomness >= 0 && o.randomness < com.group.q_order &&
              Decommit(com, *c, EncodeMessage(com, o.digest), o.randomness);
    // A second opening for the same id poisons the entry.
    result[o.id] = result.contains(o.id) ? false : ok;
  }
  for (const BoardEntry& e : board.entries) {
    if (!result.contains(e.id)) throw VerfuError(ErrorCode::kMissingOpening, "no opening for device " + Id(e.id));
  }
  return result;
}

LhhDigest CombineHashes(const LhhParams& lhh, std::span<const OpeningMsg> openings,
                        std::span<const FlagEntry> flags) {
  if (openings.size() != flags.size()) throw VerfuError(ErrorCode::kLengthMismatch, "openings and flags differ");
  std::vector<LhhDigest> digests;
  std::vector<int64_t> coeffs;
  for (size_t i = 0; i < openings.size(); ++i) {
    if (openings[i].id != flags[i].id) throw VerfuError(ErrorCode::kLengthMismatch, "openings and flags misaligned");
    digests.push_back(openings[i].digest);
    coeffs.push_back(flags[i].flag);
  }
  return LhhEval(lhh, digests, coeffs);
}

bool VerifyUnlearning(const EncodedVector& a, const LhhDigest& h, const LhhParams& lhh) {
  if (a.size() != lhh.dim()) return false;
  try {
    return LhhHash(lhh, ToRing(a, lhh.group.q_order)) == h;
  } catch (const VerfuError&) {
    return false;
  }
}

VerifierVerdict VerifyAsDevice(const VerifierView& view, const LhhParams& lhh, const ComParams& com) {
  VerifierVerdict verdict;
  verdict.verifier = view.self;
  auto fail = [&](std::string why) {
    if (verdict.reason.empty()) verdict.reason = std::move(why);
  };

  // Other devices' openings against the board this device received.
  CommitmentBoard others_board;
  for (const BoardEntry& e : view.board.entries) {
    if (e.id != view.self) others_board.entries.push_back(e);
  }
  std::vector<OpeningMsg> others;
  for (const OpeningMsg& o : view.openings) {
    if (o.id != view.self) others.push_back(o);
  }
  verdict.decommit_ok = true;
  try {
    for (const auto& [id, ok] : VerifyDecommitments(others_board, others, com)) {
      if (!ok) {
        verdict.decommit_ok = false;
        fail("opening of device " + Id(id) + " does not match its commitment");
      }
    }
  } catch (const VerfuError& e) {
    verdict.decommit_ok = false;
    fail(e.what());
  }
  if (!view.board.Find(view.self)) {
    verdict.decommit_ok = false;
    fail("own commitment missing from the board");
  }

  // Hash(a) == H over the flagged cohort.
  verdict.unlearning_ok = false;
  if (!view.a) {
    fail("decrypted aggregate outside the codec range");
    return verdict;
  }
  // The verifier must be counted as unlearning, and the flags must cover
  // exactly the board; otherwise the server could drop a device from both
  // sides of the equation.
  auto self_flag = std::find_if(view.flags.begin(), view.flags.end(),
                                [&](const FlagEntry& f) { return f.id == view.self; });
  if (self_flag == view.flags.end() || self_flag->flag != -1) {
    fail("own unlearning flag missing from the aggregate");
    return verdict;
  }
  std::set<DeviceId> flagged;
  for (const FlagEntry& f : view.flags) flagged.insert(f.id);
  if (flagged.size() != view.flags.size() || flagged.size() != view.board.entries.size() ||
      !std::all_of(view.board.entries.begin(), view.board.entries.end(),
                   [&](const BoardEntry& e) { return flagged.contains(e.id); })) {
    fail("flagged devices differ from the board");
    return verdict;
  }
  std::vector<OpeningMsg> aligned;
  for (const FlagEntry& f : view.flags) {
    if (f.id == view.self) {
      aligned.push_back(view.own_opening);
      continue;
    }
    auto it = std::find_if(others.begin(), others.end(), [&](const OpeningMsg& o) { return o.id == f.id; });
    if (it == others.end()) {
      fail("no opening for flagged device " + Id(f.id));
      return verdict;
    }
    aligned.push_back(*it);
  }
  try {
    LhhDigest h = CombineHashes(lhh, aligned, view.flags);
    verdict.unlearning_ok = VerifyUnlearning(*view.a, h, lhh);
  } catch (const VerfuError& e) {
    fail(e.what());
    return verdict;
  }
  if (!verdict.unlearning_ok) fail("Hash(a) does not equal the combined hash");
  return verdict;
}

}  // namespace verfu
