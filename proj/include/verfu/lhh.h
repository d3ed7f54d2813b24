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

// Linear homomorphic hash over a prime-order subgroup:
//
//   h(m) = prod_i g_i^m[i] mod p,    m in F_q^d
//
// so that h(x) h(y) = h(x + y) and prod_i h(x_i)^f_i = h(sum_i f_i x_i).

#ifndef VERFU_LHH_H_
#define VERFU_LHH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "verfu/algebra.h"

namespace verfu {

struct LhhParams {
  GroupDesc group;
  std::vector<BigUint> generators;

  size_t dim() const { return generators.size(); }
};

struct LhhDigest {
  BigUint value;

  bool operator==(const LhhDigest& other) const { return value == other.value; }
};

// Generators are DeriveGenerator(group, "g_0") ... "g_{dim-1}".
LhhParams LhhSetup(const GroupDesc& group, size_t dim);
// Convenience form that also builds the group (see MakeGroup).
LhhParams LhhSetup(unsigned p_bits, size_t dim, uint64_t seed);
// Explicit generators, each checked for subgroup membership.
LhhParams LhhParamsFromGenerators(const GroupDesc& group, std::vector<BigUint> generators);

// Throws kDimMismatch or kCoordinateOutOfRange. Residues above q/2 are
// exponentiated as inverses of their (small) negation; the result is
// bit-identical to LhhHashNaive.
LhhDigest LhhHash(const LhhParams& params, std::span<const BigUint> m);
LhhDigest LhhHashNaive(const LhhParams& params, std::span<const BigUint> m);

// Hash of a signed integer vector, reduced into F_q first.
LhhDigest LhhHashSigned(const LhhParams& params, std::span<const int64_t> m);

// prod_i digests[i]^coeffs[i] mod p; negative coefficients use the group
// inverse. Throws kLengthMismatch.
LhhDigest LhhEval(const LhhParams& params, std::span<const LhhDigest> digests,
                  std::span<const int64_t> coeffs);
LhhDigest LhhEval(const LhhParams& params, std::span<const LhhDigest> digests,
                  std::span<const BigUint> coeffs);

}  // namespace verfu

#endif  // VERFU_LHH_H_
