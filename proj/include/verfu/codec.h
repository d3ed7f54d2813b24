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

// Fixed-point encoding of real gradients. The same signed integer vector is
// embedded into Z_n (for encryption) and F_q (for hashing) with a centered
// representation, so that sums computed under either modulus lift back to the
// same integers.

#ifndef VERFU_CODEC_H_
#define VERFU_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "verfu/algebra.h"

namespace verfu {

struct FixedPointSpec {
  int scale_bits = 24;
  double bound = 4.0;  // max |x| accepted by Encode
  // Max number of bounded terms in any single sum. A historical contribution
  // counts once per round it accumulates.
  uint64_t max_terms = 1;

  // max_terms * bound * 2^scale_bits, the largest legal |coordinate| of a sum.
  BigUint SumBound() const;
  // Throws kOutOfBound unless 2 * SumBound() < modulus and SumBound() fits in
  // an int64.
  void ValidateFor(const BigUint& modulus) const;
};

struct EncodedVector {
  std::vector<int64_t> coords;

  size_t size() const { return coords.size(); }
  bool operator==(const EncodedVector& other) const = default;
};

// round(x * 2^scale_bits), ties away from zero. Throws kOutOfBound when
// |x_j| > bound.
EncodedVector Encode(std::span<const double> x, const FixedPointSpec& spec);

// Negative values map to modulus - |x|. Throws kOutOfBound when |x| is not
// below modulus / 2.
std::vector<BigUint> ToRing(const EncodedVector& v, const BigUint& modulus);

// Centered lift: r <= modulus / 2 stays, larger residues become r - modulus.
// Throws kOutOfBound if a lifted value exceeds spec.SumBound(); honest
// protocol sums never do.
EncodedVector FromRing(std::span<const BigUint> residues, const BigUint& modulus,
                       const FixedPointSpec& spec);

// x_j = coord_j / (divisor * 2^scale_bits).
std::vector<double> Decode(const EncodedVector& v, uint64_t divisor, const FixedPointSpec& spec);

EncodedVector& operator+=(EncodedVector& a, const EncodedVector& b);
EncodedVector& operator-=(EncodedVector& a, const EncodedVector& b);

}  // namespace verfu

#endif  // VERFU_CODEC_H_
