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

// Paillier additively homomorphic encryption with g = n + 1, lifted
// coordinate-wise over vectors.

#ifndef VERFU_PAILLIER_H_
#define VERFU_PAILLIER_H_

#include <span>
#include <vector>

#include "verfu/algebra.h"

namespace verfu {

struct PaillierPublicKey {
  BigUint n;
  BigUint g;     // always n + 1
  BigUint n_sq;  // cached n^2

  static PaillierPublicKey FromModulus(const BigUint& n);

  // Serialized ciphertext width: ceil(bits(n^2) / 8).
  size_t ciphertext_bytes() const { return ByteWidth(n_sq); }
  bool operator==(const PaillierPublicKey& other) const { return n == other.n; }
};

struct PaillierSecretKey {
  BigUint lambda;  // lcm(p - 1, q - 1)
  BigUint mu;      // L(g^lambda mod n^2)^-1 mod n
  BigUint p;
  BigUint q;

  // CRT material for the accelerated decrypt/encrypt paths.
  BigUint p_sq;
  BigUint q_sq;
  BigUint hp;  // L_p(g^(p-1) mod p^2)^-1 mod p
  BigUint hq;
  BigUint p_inv_q;  // p^-1 mod q
  BigUint n_mod_phi_p_sq;  // n mod p(p-1)
  BigUint n_mod_phi_q_sq;  // n mod q(q-1)
  BigUint p_sq_inv_q_sq;   // (p^2)^-1 mod q^2
};

struct PaillierKeyPair {
  PaillierPublicKey pk;
  PaillierSecretKey sk;
};

struct Ciphertext {
  BigUint c;
  bool operator==(const Ciphertext& other) const { return c == other.c; }
};

using CiphertextVector = std::vector<Ciphertext>;

// Primes of n_bits / 2 bits each; n has exactly n_bits bits.
PaillierKeyPair PaillierKeygen(unsigned n_bits, Rng& rng);

// Builds keys from caller-chosen primes. Throws kInvalidArgument unless
// p != q and gcd(pq, (p-1)(q-1)) = 1.
PaillierKeyPair PaillierKeysFromPrimes(const BigUint& p, const BigUint& q);

// c = g^m r^n mod n^2 with r uniform in Z*_n. Throws kMessageOutOfRange when
// m >= n.
Ciphertext Encrypt(const PaillierPublicKey& pk, const BigUint& m, Rng& rng);
Ciphertext EncryptWithRandomness(const PaillierPublicKey& pk, const BigUint& m, const BigUint& r);

// Same ciphertext as Encrypt for the same random draw, computing r^n mod n^2
// through the factorization. Only holders of sk can use it.
Ciphertext EncryptCrt(const PaillierKeyPair& keys, const BigUint& m, Rng& rng);

// m = L(c^lambda mod n^2) mu mod n. Throws kInvalidCiphertext if c is not a
// unit below n^2.
BigUint Decrypt(const PaillierSecretKey& sk, const PaillierPublicKey& pk, const Ciphertext& ct);
// CRT decryption; agrees with Decrypt on every valid ciphertext.
BigUint DecryptCrt(const PaillierSecretKey& sk, const PaillierPublicKey& pk, const Ciphertext& ct);

Ciphertext CtAdd(const PaillierPublicKey& pk, const Ciphertext& a, const Ciphertext& b);
// Throws kNotInvertible for malformed b.
Ciphertext CtSub(const PaillierPublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext CtScale(const PaillierPublicKey& pk, const Ciphertext& a, const BigUint& k);

CiphertextVector VecEncrypt(const PaillierPublicKey& pk, std::span<const BigUint> m, Rng& rng);
CiphertextVector VecEncryptCrt(const PaillierKeyPair& keys, std::span<const BigUint> m, Rng& rng);
std::vector<BigUint> VecDecrypt(const PaillierSecretKey& sk, const PaillierPublicKey& pk,
                                std::span<const Ciphertext> ct);
CiphertextVector VecAdd(const PaillierPublicKey& pk, std::span<const Ciphertext> a,
                        std::span<const Ciphertext> b);
CiphertextVector VecSub(const PaillierPublicKey& pk, std::span<const Ciphertext> a,
                        std::span<const Ciphertext> b);

}  // namespace verfu

#endif  // VERFU_PAILLIER_H_
