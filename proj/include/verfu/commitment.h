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

// Pedersen commitments com(x, r) = g^x h^r mod p with h = g^alpha. Knowing
// alpha lets the holder open any commitment to any message (equivocation);
// without it the scheme is binding under discrete log.

#ifndef VERFU_COMMITMENT_H_
#define VERFU_COMMITMENT_H_

#include <utility>

#include "verfu/algebra.h"
#include "verfu/lhh.h"

namespace verfu {

struct ComParams {
  GroupDesc group;
  BigUint g;
  BigUint h;
};

struct Trapdoor {
  BigUint alpha;  // h = g^alpha
};

struct Commitment {
  BigUint value;
  bool operator==(const Commitment& other) const { return value == other.value; }
};

struct Opening {
  BigUint message;     // field encoding of the committed digest
  BigUint randomness;  // in [0, q)
};

// g = DeriveGenerator(group, "com_g"), alpha uniform in [1, q).
std::pair<ComParams, Trapdoor> ComSetup(const GroupDesc& group, Rng& rng);
// Explicit parameters for tests; both generators must be subgroup members.
ComParams ComParamsFromGenerators(const GroupDesc& group, const BigUint& g, const BigUint& h);

// SHA-256 of the fixed-width digest bytes, reduced mod q.
BigUint EncodeMessage(const ComParams& params, const LhhDigest& digest);

Commitment Commit(const ComParams& params, const BigUint& x, const BigUint& r);
bool Decommit(const ComParams& params, const Commitment& c, const BigUint& x, const BigUint& r);

// r' = r + (x - x_new) alpha^-1 mod q, so that com(x, r) = com(x_new, r').
BigUint Equivocate(const ComParams& params, const Trapdoor& td, const BigUint& x, const BigUint& r,
                   const BigUint& x_new);

}  // namespace verfu

#endif  // VERFU_COMMITMENT_H_
