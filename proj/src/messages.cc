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

#include "verfu/messages.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#include "verfu/status.h"

namespace verfu {
namespace {

void PutU32(uint32_t v, Bytes& out) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

void PutU64(uint64_t v, Bytes& out) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

uint8_t FlagByte(int flag) {
  if (flag == 1) return 0x01;
  if (flag == -1) return 0xFF;
  throw VerfuError(ErrorCode::kInvalidArgument, "flag must be +1 or -1");
}

// Sequential reader over a byte span; every read checks the remaining size.
class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint32_t U32() {
    auto s = Take(4);
    return (uint32_t{s[0]} << 24) | (uint32_t{s[1]} << 16) | (uint32_t{s[2]} << 8) | s[3];
  }
  uint64_t U64() {
    uint64_t hi = U32();
    return (hi << 32) | U32();
  }
  int Flag() {
    uint8_t b = Take(1)[0];
    if (b == 0x01) return 1;
    if (b == 0xFF) return -1;
    throw VerfuError(ErrorCode::kInvalidArgument, "unknown flag byte");
  }
  BigUint Big(size_t width) { return FromBytes(Take(width)); }
  size_t remaining() const { return bytes_.size() - pos_; }
  void ExpectEnd() const {
    if (pos_ != bytes_.size()) throw VerfuError(ErrorCode::kLengthMismatch, "trailing bytes in message");
  }

 private:
  std::span<const uint8_t> Take(size_t n) {
    if (remaining() < n) throw VerfuError(ErrorCode::kLengthMismatch, "message truncated");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void ExpectSize(std::span<const uint8_t> bytes, size_t want, const char* what) {
  if (bytes.size() != want) {
    throw VerfuError(ErrorCode::kLengthMismatch, std::string(what) + " has " + std::to_string(bytes.size()) +
                                                     " bytes, expected " + std::to_string(want));
  }
}

void AppendCiphertexts(const CiphertextVector& ct, const WireWidths& w, Bytes& out) {
  if (ct.size() != w.dim) throw VerfuError(ErrorCode::kDimMismatch, "ciphertext vector length != d");
  for (const Ciphertext& c : ct) AppendFixedBytes(c.c, w.ciphertext, out);
}

CiphertextVector ReadCiphertexts(Reader& r, const WireWidths& w) {
  CiphertextVector ct(w.dim);
  for (Ciphertext& c : ct) c.c = r.Big(w.ciphertext);
  return ct;
}

void AppendOpening(const OpeningMsg& msg, const WireWidths& w, Bytes& out) {
  PutU32(msg.id, out);
  AppendFixedBytes(msg.digest.value, w.element, out);
  AppendFixedBytes(msg.randomness, w.scalar, out);
}

OpeningMsg ReadOpening(Reader& r, const WireWidths& w) {
  OpeningMsg msg;
  msg.id = r.U32();
  msg.digest.value = r.Big(w.element);
  msg.randomness = r.Big(w.scalar);
  return msg;
}

}  // namespace

const Commitment* CommitmentBoard::Find(DeviceId id) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), id,
                             [](const BoardEntry& e, DeviceId v) { return e.id < v; });
  return it != entries.end() && it->id == id ? &it->commitment : nullptr;
}

WireWidths WireWidths::For(const KeyMaterial& keys) {
  return WireWidths{keys.lhh.group.element_bytes(), keys.lhh.group.scalar_bytes(), keys.pk().ciphertext_bytes(),
                    keys.lhh.dim()};
}

Bytes SerializePrepare(const PrepareMsg& msg, const WireWidths& w) {
  Bytes out;
  out.reserve(w.prepare());
  PutU32(msg.id, out);
  AppendFixedBytes(msg.commitment.value, w.element, out);
  return out;
}

Bytes SerializeBoard(const CommitmentBoard& board, const WireWidths& w) {
  Bytes out;
  out.reserve(4 + board.entries.size() * w.prepare());
  PutU32(static_cast<uint32_t>(board.entries.size()), out);
  for (const BoardEntry& e : board.entries) {
    PutU32(e.id, out);
    AppendFixedBytes(e.commitment.value, w.element, out);
  }
  return out;
}

Bytes SerializeUpload(const UploadMsg& msg, const WireWidths& w) {
  Bytes out;
  out.reserve(w.upload());
  PutU32(msg.id, out);
  out.push_back(FlagByte(msg.flag));
  AppendCiphertexts(msg.ct, w, out);
  return out;
}

Bytes SerializeAggregate(const AggregateBroadcast& msg, const WireWidths& w) {
  Bytes out;
  out.reserve(4 + 5 * msg.flags.size() + w.dim * w.ciphertext);
  PutU32(static_cast<uint32_t>(msg.flags.size()), out);
  for (const FlagEntry& f : msg.flags) {
    PutU32(f.id, out);
    out.push_back(FlagByte(f.flag));
  }
  AppendCiphertexts(msg.ct, w, out);
  return out;
}

Bytes SerializeOpening(const OpeningMsg& msg, const WireWidths& w) {
  Bytes out;
  out.reserve(w.opening());
  AppendOpening(msg, w, out);
  return out;
}

Bytes SerializeOpenings(std::span<const OpeningMsg> openings, const WireWidths& w) {
  Bytes out;
  out.reserve(4 + openings.size() * w.opening());
  PutU32(static_cast<uint32_t>(openings.size()), out);
  for (const OpeningMsg& o : openings) AppendOpening(o, w, out);
  return out;
}

PrepareMsg ParsePrepare(std::span<const uint8_t> bytes, const WireWidths& w) {
  ExpectSize(bytes, w.prepare(), "prepare message");
  Reader r(bytes);
  PrepareMsg msg;
  msg.id = r.U32();
  msg.commitment.value = r.Big(w.element);
  return msg;
}

CommitmentBoard ParseBoard(std::span<const uint8_t> bytes, const WireWidths& w) {
  Reader r(bytes);
  uint32_t count = r.U32();
  ExpectSize(bytes, 4 + size_t{count} * w.prepare(), "board");
  CommitmentBoard board;
  board.entries.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    BoardEntry e;
    e.id = r.U32();
    e.commitment.value = r.Big(w.element);
    board.entries.push_back(std::move(e));
  }
  return board;
}

UploadMsg ParseUpload(std::span<const uint8_t> bytes, const WireWidths& w) {
  ExpectSize(bytes, w.upload(), "upload message");
  Reader r(bytes);
  UploadMsg msg;
  msg.id = r.U32();
  msg.flag = r.Flag();
  msg.ct = ReadCiphertexts(r, w);
  return msg;
}

AggregateBroadcast ParseAggregate(std::span<const uint8_t> bytes, const WireWidths& w) {
  Reader r(bytes);
  uint32_t count = r.U32();
  ExpectSize(bytes, 4 + 5 * size_t{count} + w.dim * w.ciphertext, "aggregate broadcast");
  AggregateBroadcast msg;
  msg.flags.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    FlagEntry f;
    f.id = r.U32();
    f.flag = r.Flag();
    msg.flags.push_back(f);
  }
  msg.ct = ReadCiphertexts(r, w);
  return msg;
}

OpeningMsg ParseOpening(std::span<const uint8_t> bytes, const WireWidths& w) {
  ExpectSize(bytes, w.opening(), "opening message");
  Reader r(bytes);
  return ReadOpening(r, w);
}

std::vector<OpeningMsg> ParseOpenings(std::span<const uint8_t> bytes, const WireWidths& w) {
  Reader r(bytes);
  uint32_t count = r.U32();
  ExpectSize(bytes, 4 + size_t{count} * w.opening(), "openings broadcast");
  std::vector<OpeningMsg> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) out.push_back(ReadOpening(r, w));
  return out;
}

Bytes SerializeVerdict(const VerdictRecord& v) {
  Bytes out;
  PutU32(v.verifier, out);
  out.push_back(v.decommit_ok ? 1 : 0);
  out.push_back(v.unlearning_ok ? 1 : 0);
  return out;
}

VerdictRecord ParseVerdict(std::span<const uint8_t> bytes) {
  ExpectSize(bytes, 6, "verdict record");
  Reader r(bytes);
  VerdictRecord v;
  v.verifier = r.U32();
  v.decommit_ok = bytes[4] != 0;
  v.unlearning_ok = bytes[5] != 0;
  return v;
}

Bytes SerializeCodec(const FixedPointSpec& spec) {
  Bytes out;
  PutU32(static_cast<uint32_t>(spec.scale_bits), out);
  PutU64(spec.max_terms, out);
  PutU64(std::bit_cast<uint64_t>(spec.bound), out);
  return out;
}

FixedPointSpec ParseCodec(std::span<const uint8_t> bytes) {
  ExpectSize(bytes, 20, "codec record");
  Reader r(bytes);
  FixedPointSpec spec;
  spec.scale_bits = static_cast<int>(r.U32());
  spec.max_terms = r.U64();
  spec.bound = std::bit_cast<double>(r.U64());
  return spec;
}

}  // namespace verfu
