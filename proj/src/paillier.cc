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

#include "verfu/paillier.h"

#include <string>

#include "verfu/status.h"

namespace verfu {
namespace {

BigUint Gcd(const BigUint& a, const BigUint& b) {
  BigUint out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigUint Lcm(const BigUint& a, const BigUint& b) {
  BigUint out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// L(x) = (x - 1) / d
BigUint LFunction(const BigUint& x, const BigUint& d) { return (x - 1) / d; }

BigUint SampleUnit(const BigUint& n, Rng& rng) {
  while (true) {
    BigUint r = rng.Below(n);
    if (sgn(r) != 0 && Gcd(r, n) == 1) return r;
  }
}

void CheckMessage(const PaillierPublicKey& pk, const BigUint& m) {
  if (sgn(m) < 0 || m >= pk.n) {
    throw VerfuError(ErrorCode::kMessageOutOfRange, "plaintext must lie in [0, n)");
  }
}

void CheckCiphertext(const PaillierPublicKey& pk, const Ciphertext& ct) {
  if (sgn(ct.c) <= 0 || ct.c >= pk.n_sq || Gcd(ct.c, pk.n) != 1) {
    throw VerfuError(ErrorCode::kInvalidCiphertext, "ciphertext is not a unit modulo n^2");
  }
}

// (1 + n)^m = 1 + m n (mod n^2)
BigUint GPow(const PaillierPublicKey& pk, const BigUint& m) { return (1 + m * pk.n) % pk.n_sq; }

void CheckLengths(size_t a, size_t b) {
  if (a != b) {
    throw VerfuError(ErrorCode::kLengthMismatch,
                     "vector lengths differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

PaillierPublicKey PaillierPublicKey::FromModulus(const BigUint& n) {
  return PaillierPublicKey{n, n + 1, n * n};
}

PaillierKeyPair PaillierKeysFromPrimes(const BigUint& p, const BigUint& q) {
  if (p == q || p < 2 || q < 2) throw VerfuError(ErrorCode::kInvalidArgument, "need two distinct primes");
  BigUint n = p * q;
  if (Gcd(n, (p - 1) * (q - 1)) != 1) {
    throw VerfuError(ErrorCode::kInvalidArgument, "gcd(pq, (p-1)(q-1)) != 1");
  }
  PaillierKeyPair keys;
  keys.pk = PaillierPublicKey::FromModulus(n);
  PaillierSecretKey& sk = keys.sk;
  sk.p = p;
  sk.q = q;
  sk.lambda = Lcm(p - 1, q - 1);
  sk.mu = ModInv(LFunction(ModPow(keys.pk.g, sk.lambda, keys.pk.n_sq), n), n);
  sk.p_sq = p * p;
  sk.q_sq = q * q;
  sk.hp = ModInv(LFunction(ModPow(keys.pk.g % sk.p_sq, p - 1, sk.p_sq), p), p);
  sk.hq = ModInv(LFunction(ModPow(keys.pk.g % sk.q_sq, q - 1, sk.q_sq), q), q);
  sk.p_inv_q = ModInv(p, q);
  sk.n_mod_phi_p_sq = n % (p * (p - 1));
  sk.n_mod_phi_q_sq = n % (q * (q - 1));
  sk.p_sq_inv_q_sq = ModInv(sk.p_sq, sk.q_sq);
  return keys;
}

PaillierKeyPair PaillierKeygen(unsigned n_bits, Rng& rng) {
  if (n_bits < 8) throw VerfuError(ErrorCode::kInvalidArgument, "Paillier modulus needs at least 8 bits");
  const unsigned p_bits = n_bits / 2;
  const unsigned q_bits = n_bits - p_bits;
  while (true) {
    BigUint p = GenPrime(p_bits, rng);
    BigUint q = GenPrime(q_bits, rng);
    if (p == q) continue;
    BigUint n = p * q;
    if (BitLength(n) != n_bits) continue;
    if (Gcd(n, (p - 1) * (q - 1)) != 1) continue;
    return PaillierKeysFromPrimes(p, q);
  }
}

Ciphertext EncryptWithRandomness(const PaillierPublicKey& pk, const BigUint& m, const BigUint& r) {
  CheckMessage(pk, m);
  return Ciphertext{GPow(pk, m) * ModPow(r, pk.n, pk.n_sq) % pk.n_sq};
}

Ciphertext Encrypt(const PaillierPublicKey& pk, const BigUint& m, Rng& rng) {
  CheckMessage(pk, m);
  return EncryptWithRandomness(pk, m, SampleUnit(pk.n, rng));
}

Ciphertext EncryptCrt(const PaillierKeyPair& keys, const BigUint& m, Rng& rng) {
  const PaillierPublicKey& pk = keys.pk;
  const PaillierSecretKey& sk = keys.sk;
  CheckMessage(pk, m);
  BigUint r = SampleUnit(pk.n, rng);
  BigUint rp = ModPow(r % sk.p_sq, sk.n_mod_phi_p_sq, sk.p_sq);
  BigUint rq = ModPow(r % sk.q_sq, sk.n_mod_phi_q_sq, sk.q_sq);
  BigUint diff = Mod((rq - rp) * sk.p_sq_inv_q_sq, sk.q_sq);
  BigUint rn = rp + sk.p_sq * diff;
  return Ciphertext{GPow(pk, m) * rn % pk.n_sq};
}

BigUint Decrypt(const PaillierSecretKey& sk, const PaillierPublicKey& pk, const Ciphertext& ct) {
  CheckCiphertext(pk, ct);
  return LFunction(ModPow(ct.c, sk.lambda, pk.n_sq), pk.n) * sk.mu % pk.n;
}

BigUint DecryptCrt(const PaillierSecretKey& sk, const PaillierPublicKey& pk, const Ciphertext& ct) {
  CheckCiphertext(pk, ct);
  BigUint mp = LFunction(ModPow(ct.c % sk.p_sq, sk.p - 1, sk.p_sq), sk.p) * sk.hp % sk.p;
  BigUint mq = LFunction(ModPow(ct.c % sk.q_sq, sk.q - 1, sk.q_sq), sk.q) * sk.hq % sk.q;
  BigUint diff = Mod((mq - mp) * sk.p_inv_q, sk.q);
  return mp + sk.p * diff;
}

Ciphertext CtAdd(const PaillierPublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  return Ciphertext{a.c * b.c % pk.n_sq};
}

Ciphertext CtSub(const PaillierPublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  return Ciphertext{a.c * ModInv(b.c, pk.n_sq) % pk.n_sq};
}

Ciphertext CtScale(const PaillierPublicKey& pk, const Ciphertext& a, const BigUint& k) {
  return Ciphertext{ModPow(a.c, k, pk.n_sq)};
}

CiphertextVector VecEncrypt(const PaillierPublicKey& pk, std::span<const BigUint> m, Rng& rng) {
  CiphertextVector out;
  out.reserve(m.size());
  for (const BigUint& x : m) out.push_back(Encrypt(pk, x, rng));
  return out;
}

CiphertextVector VecEncryptCrt(const PaillierKeyPair& keys, std::span<const BigUint> m, Rng& rng) {
  CiphertextVector out;
  out.reserve(m.size());
  for (const BigUint& x : m) out.push_back(EncryptCrt(keys, x, rng));
  return out;
}

std::vector<BigUint> VecDecrypt(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
                                std::span<const Ciphertext> ct) {
  std::vector<BigUint> out;
  out.reserve(ct.size());
  for (const Ciphertext& c : ct) out.push_back(DecryptCrt(sk, pk, c));
  return out;
}

CiphertextVector VecAdd(const PaillierPublicKey& pk, std::span<const Ciphertext> a,
                        std::span<const Ciphertext> b) {
  CheckLengths(a.size(), b.size());
  CiphertextVector out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(CtAdd(pk, a[i], b[i]));
  return out;
}

CiphertextVector VecSub(const PaillierPublicKey& pk, std::span<const Ciphertext> a,
                        std::span<const Ciphertext> b) {
  CheckLengths(a.size(), b.size());
  CiphertextVector out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(CtSub(pk, a[i], b[i]));
  return out;
}

}  // namespace verfu
