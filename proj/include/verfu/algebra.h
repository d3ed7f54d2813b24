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

// Arbitrary-precision modular arithmetic shared by every cryptographic
// module: a seedable random source, probable-prime generation, safe-prime
// groups and deterministic hash-to-subgroup generator derivation.

#ifndef VERFU_ALGEBRA_H_
#define VERFU_ALGEBRA_H_

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verfu {

using BigUint = mpz_class;
using Bytes = std::vector<uint8_t>;
using Sha256Digest = std::array<uint8_t, 32>;

// Seedable random source. All protocol randomness flows through instances of
// this class; nothing reads ambient entropy.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Independent stream keyed by (seed, label). Streams for different labels
  // do not depend on how many values were drawn from any other stream.
  static Rng Derive(uint64_t seed, std::string_view label);

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, bound). bound must be positive.
  BigUint Below(const BigUint& bound);
  // Uniform in [lo, hi).
  BigUint Between(const BigUint& lo, const BigUint& hi);
  // Uniform integer with at most `bits` bits.
  BigUint Bits(unsigned bits);
  double Uniform01();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

Sha256Digest Sha256(std::span<const uint8_t> data);

unsigned BitLength(const BigUint& x);
// ceil(bits(modulus) / 8): the fixed serialization width under `modulus`.
size_t ByteWidth(const BigUint& modulus);

// Big-endian, left-padded to `width` bytes. Throws kOutOfBound if x does not
// fit.
Bytes ToFixedBytes(const BigUint& x, size_t width);
void AppendFixedBytes(const BigUint& x, size_t width, Bytes& out);
BigUint FromBytes(std::span<const uint8_t> bytes);

std::string ToHex(std::span<const uint8_t> bytes);
Bytes FromHex(std::string_view hex);

BigUint ModPow(const BigUint& base, const BigUint& exp, const BigUint& modulus);
// Throws kNotInvertible when gcd(x, modulus) != 1.
BigUint ModInv(const BigUint& x, const BigUint& modulus);
// Euclidean residue of a signed value.
BigUint Mod(const BigUint& x, const BigUint& modulus);

// Miller-Rabin with `rounds` random bases drawn from rng.
bool IsProbablePrime(const BigUint& n, unsigned rounds, Rng& rng);

inline constexpr unsigned kMillerRabinRounds = 40;

// Probable prime of exactly `bits` bits. bits >= 2.
BigUint GenPrime(unsigned bits, Rng& rng);

struct GroupDesc {
  BigUint p_mod;    // safe prime, p_mod = 2 q_order + 1
  BigUint q_order;  // prime order of the quadratic-residue subgroup
  std::string seed;

  bool IsMember(const BigUint& x) const;
  size_t element_bytes() const { return ByteWidth(p_mod); }
  size_t scalar_bytes() const { return ByteWidth(q_order); }
};

// Checks p = 2q + 1 and primality of both.
bool ValidateGroup(const GroupDesc& group, Rng& rng);

// Random safe-prime group with p of exactly `p_bits` bits.
GroupDesc GenSafePrimeGroup(unsigned p_bits, Rng& rng, std::string seed);

// The 2048-bit MODP safe prime from RFC 3526 (group 14).
GroupDesc Rfc3526Group2048(std::string seed);

// p_bits == 2048 selects the RFC 3526 prime; any other size generates a safe
// prime deterministically from (p_bits, rng_seed).
GroupDesc MakeGroup(unsigned p_bits, uint64_t rng_seed, std::string seed);

// H(seed || label || ctr)^2 mod p with ctr = 0, 1, ... until the result is
// not 1. H is SHA-256.
BigUint DeriveGenerator(const GroupDesc& group, std::string_view label);

}  // namespace verfu

#endif  // VERFU_ALGEBRA_H_
