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

#include "verfu/commitment.h"

#include "verfu/status.h"

namespace verfu {

std::pair<ComParams, Trapdoor> ComSetup(const GroupDesc& group, Rng& rng) {
  BigUint g = DeriveGenerator(group, "com_g");
  BigUint alpha = rng.Between(1, group.q_order);
  BigUint h = ModPow(g, alpha, group.p_mod);
  return {ComParams{group, g, h}, Trapdoor{alpha}};
}

ComParams ComParamsFromGenerators(const GroupDesc& group, const BigUint& g, const BigUint& h) {
  if (g == 1 || h == 1 || !group.IsMember(g) || !group.IsMember(h)) {
    throw VerfuError(ErrorCode::kInvalidArgument, "commitment generators must be non-identity subgroup elements");
  }
  return ComParams{group, g, h};
}

BigUint EncodeMessage(const ComParams& params, const LhhDigest& digest) {
  Bytes bytes = ToFixedBytes(digest.value, params.group.element_bytes());
  return FromBytes(Sha256(bytes)) % params.group.q_order;
}

Commitment Commit(const ComParams& params, const BigUint& x, const BigUint& r) {
  const BigUint& p = params.group.p_mod;
  return Commitment{ModPow(params.g, x, p) * ModPow(params.h, r, p) % p};
}

bool Decommit(const ComParams& params, const Commitment& c, const BigUint& x, const BigUint& r) {
  return Commit(params, x, r) == c;
}

BigUint Equivocate(const ComParams& params, const Trapdoor& td, const BigUint& x, const BigUint& r,
                   const BigUint& x_new) {
  const BigUint& q = params.group.q_order;
  return Mod(r + (x - x_new) * ModInv(td.alpha, q), q);
}

}  // namespace verfu
