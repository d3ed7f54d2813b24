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

#include "verfu/algebra.h"

#include <openssl/sha.h>

#include <algorithm>
#include <utility>

#include "verfu/status.h"

namespace verfu {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotInvertible: return "NotInvertible";
    case ErrorCode::kMessageOutOfRange: return "MessageOutOfRange";
    case ErrorCode::kInvalidCiphertext: return "InvalidCiphertext";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kCoordinateOutOfRange: return "CoordinateOutOfRange";
    case ErrorCode::kOutOfBound: return "OutOfBound";
    case ErrorCode::kDuplicateDevice: return "DuplicateDevice";
    case ErrorCode::kMissingDevice: return "MissingDevice";
    case ErrorCode::kMissingOpening: return "MissingOpening";
    case ErrorCode::kEmptyCohort: return "EmptyCohort";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kTargetNotInCohort: return "TargetNotInCohort";
    case ErrorCode::kTrapdoorRequired: return "TrapdoorRequired";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMalformedTranscript: return "MalformedTranscript";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::vector<uint32_t> SievePrimes(uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<uint32_t> primes;
  for (uint32_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (uint64_t j = uint64_t{i} * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

const std::vector<uint32_t>& SmallPrimes() {
  static const std::vector<uint32_t> primes = SievePrimes(4096);
  return primes;
}

// True when some small prime s < x divides x.
bool HasSmallFactor(const BigUint& x) {
  for (uint32_t s : SmallPrimes()) {
    if (cmp(x, s) <= 0) return false;
    if (mpz_divisible_ui_p(x.get_mpz_t(), s)) return true;
  }
  return false;
}

BigUint RandomOddWithTopBit(unsigned bits, Rng& rng) {
  BigUint x = rng.Bits(bits);
  mpz_setbit(x.get_mpz_t(), bits - 1);
  mpz_setbit(x.get_mpz_t(), 0);
  return x;
}

constexpr const char* kRfc3526Prime2048 =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1"
    "29024E088A67CC74020BBEA63B139B22514A08798E3404DD"
    "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245"
    "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3D"
    "C2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F"
    "83655D23DCA3AD961C62F356208552BB9ED529077096966D"
    "670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9"
    "DE2BCBF6955817183995497CEA956AE515D2261898FA0510"
    "15728E5A8AACAA68FFFFFFFFFFFFFFFF";

}  // namespace

Rng::Rng(uint64_t seed) : engine_(seed) {}

Rng Rng::Derive(uint64_t seed, std::string_view label) {
  Bytes material(8);
  for (int i = 0; i < 8; ++i) material[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
  material.insert(material.end(), label.begin(), label.end());
  Sha256Digest digest = Sha256(material);
  std::array<uint32_t, 8> words;
  for (size_t i = 0; i < words.size(); ++i) {
    words[i] = (uint32_t{digest[4 * i]} << 24) | (uint32_t{digest[4 * i + 1]} << 16) |
               (uint32_t{digest[4 * i + 2]} << 8) | uint32_t{digest[4 * i + 3]};
  }
  std::seed_seq seq(words.begin(), words.end());
  Rng rng(0);
  rng.engine_.seed(seq);
  return rng;
}

BigUint Rng::Bits(unsigned bits) {
  if (bits == 0) return 0;
  size_t words = (bits + 63) / 64;
  std::vector<uint64_t> limbs(words);
  for (auto& w : limbs) w = engine_();
  BigUint x;
  mpz_import(x.get_mpz_t(), words, -1, sizeof(uint64_t), 0, 0, limbs.data());
  mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits);
  return x;
}

BigUint Rng::Below(const BigUint& bound) {
  if (sgn(bound) <= 0) throw VerfuError(ErrorCode::kInvalidArgument, "Below() needs a positive bound");
  unsigned bits = BitLength(bound);
  while (true) {
    BigUint x = Bits(bits);
    if (x < bound) return x;
  }
}

BigUint Rng::Between(const BigUint& lo, const BigUint& hi) {
  return lo + Below(hi - lo);
}

double Rng::Uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Sha256Digest Sha256(std::span<const uint8_t> data) {
  Sha256Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

unsigned BitLength(const BigUint& x) {
  if (sgn(x) == 0) return 0;
  return static_cast<unsigned>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

size_t ByteWidth(const BigUint& modulus) { return (BitLength(modulus) + 7) / 8; }

void AppendFixedBytes(const BigUint& x, size_t width, Bytes& out) {
  if (sgn(x) < 0 || ByteWidth(x) > width) {
    throw VerfuError(ErrorCode::kOutOfBound, "value does not fit in " + std::to_string(width) + " bytes");
  }
  size_t start = out.size();
  out.resize(start + width, 0);
  size_t used = ByteWidth(x);
  if (used == 0) return;
  size_t count = 0;
  mpz_export(out.data() + start + (width - used), &count, 1, 1, 1, 0, x.get_mpz_t());
}

Bytes ToFixedBytes(const BigUint& x, size_t width) {
  Bytes out;
  out.reserve(width);
  AppendFixedBytes(x, width, out);
  return out;
}

BigUint FromBytes(std::span<const uint8_t> bytes) {
  BigUint x;
  if (!bytes.empty()) mpz_import(x.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return x;
}

std::string ToHex(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(bytes.size() * 2, '0');
  for (size_t i = 0; i < bytes.size(); ++i) {
    out[2 * i] = kDigits[bytes[i] >> 4];
    out[2 * i + 1] = kDigits[bytes[i] & 0xf];
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw VerfuError(ErrorCode::kInvalidArgument, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw VerfuError(ErrorCode::kInvalidArgument, "invalid hex digit");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

BigUint ModPow(const BigUint& base, const BigUint& exp, const BigUint& modulus) {
  BigUint out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

BigUint ModInv(const BigUint& x, const BigUint& modulus) {
  BigUint out;
  if (mpz_invert(out.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw VerfuError(ErrorCode::kNotInvertible, "gcd(x, modulus) != 1");
  }
  return out;
}

BigUint Mod(const BigUint& x, const BigUint& modulus) {
  BigUint out;
  mpz_mod(out.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

bool IsProbablePrime(const BigUint& n, unsigned rounds, Rng& rng) {
  if (n < 2) return false;
  for (uint32_t s : SmallPrimes()) {
    if (n == s) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), s)) return false;
  }
  BigUint n_minus_1 = n - 1;
  BigUint d = n_minus_1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  const BigUint two = 2;
  for (unsigned round = 0; round < rounds; ++round) {
    BigUint a = rng.Between(two, n_minus_1);
    BigUint x = ModPow(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

BigUint GenPrime(unsigned bits, Rng& rng) {
  if (bits < 2) throw VerfuError(ErrorCode::kInvalidArgument, "GenPrime needs at least 2 bits");
  if (bits == 2) return (rng.NextU64() & 1) ? 3 : 2;
  while (true) {
    BigUint candidate = RandomOddWithTopBit(bits, rng);
    if (HasSmallFactor(candidate)) continue;
    if (IsProbablePrime(candidate, kMillerRabinRounds, rng)) return candidate;
  }
}

bool GroupDesc::IsMember(const BigUint& x) const {
  if (sgn(x) <= 0 || x >= p_mod) return false;
  return ModPow(x, q_order, p_mod) == 1;
}

bool ValidateGroup(const GroupDesc& group, Rng& rng) {
  if (group.p_mod != 2 * group.q_order + 1) return false;
  return IsProbablePrime(group.q_order, kMillerRabinRounds, rng) &&
         IsProbablePrime(group.p_mod, kMillerRabinRounds, rng);
}

GroupDesc GenSafePrimeGroup(unsigned p_bits, Rng& rng, std::string seed) {
  if (p_bits < 4) throw VerfuError(ErrorCode::kInvalidArgument, "safe-prime group needs p_bits >= 4");
  const unsigned q_bits = p_bits - 1;
  while (true) {
    BigUint q = RandomOddWithTopBit(q_bits, rng);
    BigUint p = 2 * q + 1;
    if (HasSmallFactor(q) || HasSmallFactor(p)) continue;
    // One cheap round on each before paying for the full test.
    if (!IsProbablePrime(q, 1, rng) || !IsProbablePrime(p, 1, rng)) continue;
    if (IsProbablePrime(q, kMillerRabinRounds, rng) && IsProbablePrime(p, kMillerRabinRounds, rng)) {
      return GroupDesc{std::move(p), std::move(q), std::move(seed)};
    }
  }
}

GroupDesc Rfc3526Group2048(std::string seed) {
  BigUint p(kRfc3526Prime2048, 16);
  BigUint q = (p - 1) / 2;
  return GroupDesc{std::move(p), std::move(q), std::move(seed)};
}

GroupDesc MakeGroup(unsigned p_bits, uint64_t rng_seed, std::string seed) {
  if (p_bits == 2048) return Rfc3526Group2048(std::move(seed));
  Rng rng = Rng::Derive(rng_seed, "group:" + std::to_string(p_bits));
  return GenSafePrimeGroup(p_bits, rng, std::move(seed));
}

BigUint DeriveGenerator(const GroupDesc& group, std::string_view label) {
  for (uint32_t counter = 0;; ++counter) {
    // Expand to |p| + 64 bits so the reduction mod p is close to uniform.
    Bytes wide;
    for (uint8_t block = 0; wide.size() * 8 < BitLength(group.p_mod) + 64; ++block) {
      Bytes material(group.seed.begin(), group.seed.end());
      material.insert(material.end(), label.begin(), label.end());
      for (int shift = 24; shift >= 0; shift -= 8) material.push_back(static_cast<uint8_t>(counter >> shift));
      material.push_back(block);
      Sha256Digest digest = Sha256(material);
      wide.insert(wide.end(), digest.begin(), digest.end());
    }
    BigUint h = FromBytes(wide) % group.p_mod;
    BigUint g = h * h % group.p_mod;
    if (g != 1 && g != 0) return g;
  }
}

}  // namespace verfu
