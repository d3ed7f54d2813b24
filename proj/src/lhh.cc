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

#include "verfu/lhh.h"

#include <string>
#include <utility>

#include "verfu/status.h"

namespace verfu {
namespace {

void CheckInput(const LhhParams& params, std::span<const BigUint> m) {
  if (m.size() != params.dim()) {
    throw VerfuError(ErrorCode::kDimMismatch, "expected " + std::to_string(params.dim()) +
                                                  " coordinates, got " + std::to_string(m.size()));
  }
  for (const BigUint& x : m) {
    if (sgn(x) < 0 || x >= params.group.q_order) {
      throw VerfuError(ErrorCode::kCoordinateOutOfRange, "hash input coordinate outside [0, q)");
    }
  }
}

}  // namespace

LhhParams LhhSetup(const GroupDesc& group, size_t dim) {
  if (dim == 0) throw VerfuError(ErrorCode::kInvalidArgument, "LHH dimension must be positive");
  LhhParams params{group, {}};
  params.generators.reserve(dim);
  for (size_t i = 0; i < dim; ++i) {
    params.generators.push_back(DeriveGenerator(group, "g_" + std::to_string(i)));
  }
  return params;
}

LhhParams LhhSetup(unsigned p_bits, size_t dim, uint64_t seed) {
  return LhhSetup(MakeGroup(p_bits, seed, "verfu-lhh-" + std::to_string(seed)), dim);
}

LhhParams LhhParamsFromGenerators(const GroupDesc& group, std::vector<BigUint> generators) {
  if (generators.empty()) throw VerfuError(ErrorCode::kInvalidArgument, "LHH dimension must be positive");
  for (const BigUint& g : generators) {
    if (g == 1 || !group.IsMember(g)) {
      throw VerfuError(ErrorCode::kInvalidArgument, "generator is not a non-identity subgroup element");
    }
  }
  return LhhParams{group, std::move(generators)};
}

LhhDigest LhhHashNaive(const LhhParams& params, std::span<const BigUint> m) {
  CheckInput(params, m);
  const BigUint& p = params.group.p_mod;
  BigUint acc = 1;
  for (size_t i = 0; i < m.size(); ++i) acc = acc * ModPow(params.generators[i], m[i], p) % p;
  return LhhDigest{acc};
}

LhhDigest LhhHash(const LhhParams& params, std::span<const BigUint> m) {
  CheckInput(params, m);
  const BigUint& p = params.group.p_mod;
  const BigUint& q = params.group.q_order;
  const BigUint half_q = q / 2;
  BigUint positive = 1;
  BigUint negative = 1;
  for (size_t i = 0; i < m.size(); ++i) {
    if (sgn(m[i]) == 0) continue;
    if (m[i] <= half_q) {
      positive = positive * ModPow(params.generators[i], m[i], p) % p;
    } else {
      // g^m = (g^(q - m))^-1 in the order-q subgroup.
      negative = negative * ModPow(params.generators[i], q - m[i], p) % p;
    }
  }
  if (negative == 1) return LhhDigest{positive};
  return LhhDigest{positive * ModInv(negative, p) % p};
}

LhhDigest LhhHashSigned(const LhhParams& params, std::span<const int64_t> m) {
  std::vector<BigUint> residues;
  residues.reserve(m.size());
  for (int64_t x : m) {
    BigUint v;
    mpz_set_si(v.get_mpz_t(), x);
    residues.push_back(Mod(v, params.group.q_order));
  }
  return LhhHash(params, residues);
}

LhhDigest LhhEval(const LhhParams& params, std::span<const LhhDigest> digests,
                  std::span<const int64_t> coeffs) {
  if (digests.size() != coeffs.size() || digests.empty()) {
    throw VerfuError(ErrorCode::kLengthMismatch, "digests and coefficients must be equal, non-empty lists");
  }
  const BigUint& p = params.group.p_mod;
  BigUint positive = 1;
  BigUint negative = 1;
  for (size_t i = 0; i < digests.size(); ++i) {
    int64_t f = coeffs[i];
    if (f == 0) continue;
    BigUint magnitude;
    mpz_set_si(magnitude.get_mpz_t(), f);
    mpz_abs(magnitude.get_mpz_t(), magnitude.get_mpz_t());
    BigUint& side = f > 0 ? positive : negative;
    side = side * ModPow(digests[i].value, magnitude, p) % p;
  }
  if (negative == 1) return LhhDigest{positive};
  return LhhDigest{positive * ModInv(negative, p) % p};
}

LhhDigest LhhEval(const LhhParams& params, std::span<const LhhDigest> digests,
                  std::span<const BigUint> coeffs) {
  if (digests.size() != coeffs.size() || digests.empty()) {
    throw VerfuError(ErrorCode::kLengthMismatch, "digests and coefficients must be equal, non-empty lists");
  }
  const BigUint& p = params.group.p_mod;
  const BigUint& q = params.group.q_order;
  BigUint acc = 1;
  for (size_t i = 0; i < digests.size(); ++i) {
    acc = acc * ModPow(digests[i].value, Mod(coeffs[i], q), p) % p;
  }
  return LhhDigest{acc};
}

}  // namespace verfu
