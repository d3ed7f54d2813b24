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

#include "verfu/codec.h"

#include <cmath>
#include <limits>
#include <string>

#include "verfu/status.h"

namespace verfu {
namespace {

BigUint FromSigned(int64_t x) {
  BigUint v;
  mpz_set_si(v.get_mpz_t(), x);
  return v;
}

void CheckSameLength(const EncodedVector& a, const EncodedVector& b) {
  if (a.size() != b.size()) {
    throw VerfuError(ErrorCode::kLengthMismatch, "encoded vectors differ in length: " +
                                                     std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

}  // namespace

BigUint FixedPointSpec::SumBound() const {
  // bound * 2^scale_bits rounded up, times max_terms.
  double per_term = std::ceil(std::ldexp(bound, scale_bits));
  BigUint term(per_term);
  return term * BigUint(static_cast<unsigned long>(max_terms));
}

void FixedPointSpec::ValidateFor(const BigUint& modulus) const {
  if (scale_bits < 0 || bound <= 0 || max_terms == 0) {
    throw VerfuError(ErrorCode::kInvalidArgument, "fixed-point spec needs scale_bits >= 0, bound > 0, max_terms > 0");
  }
  BigUint sum_bound = SumBound();
  if (2 * sum_bound >= modulus) {
    throw VerfuError(ErrorCode::kOutOfBound, "max_terms * bound * 2^scale_bits must stay below modulus / 2");
  }
  if (sum_bound > BigUint(static_cast<unsigned long>(std::numeric_limits<int64_t>::max() / 2))) {
    throw VerfuError(ErrorCode::kOutOfBound, "fixed-point sums would overflow 64-bit coordinates");
  }
}

EncodedVector Encode(std::span<const double> x, const FixedPointSpec& spec) {
  EncodedVector out;
  out.coords.reserve(x.size());
  for (double value : x) {
    if (!std::isfinite(value) || std::fabs(value) > spec.bound) {
      throw VerfuError(ErrorCode::kOutOfBound, "value " + std::to_string(value) + " exceeds codec bound " +
                                                   std::to_string(spec.bound));
    }
    // std::llround rounds halfway cases away from zero.
    out.coords.push_back(std::llround(std::ldexp(value, spec.scale_bits)));
  }
  return out;
}

std::vector<BigUint> ToRing(const EncodedVector& v, const BigUint& modulus) {
  std::vector<BigUint> out;
  out.reserve(v.size());
  for (int64_t x : v.coords) {
    BigUint value = FromSigned(x);
    BigUint magnitude = abs(value);
    if (2 * magnitude >= modulus) {
      throw VerfuError(ErrorCode::kOutOfBound, "coordinate magnitude not below modulus / 2");
    }
    out.push_back(x >= 0 ? value : modulus - magnitude);
  }
  return out;
}

EncodedVector FromRing(std::span<const BigUint> residues, const BigUint& modulus,
                       const FixedPointSpec& spec) {
  const BigUint half = modulus / 2;
  const BigUint limit = spec.SumBound();
  EncodedVector out;
  out.coords.reserve(residues.size());
  for (const BigUint& r : residues) {
    BigUint lifted = r <= half ? BigUint(r) : BigUint(r - modulus);
    if (abs(lifted) > limit) {
      throw VerfuError(ErrorCode::kOutOfBound, "decoded coordinate exceeds the codec sum bound");
    }
    out.coords.push_back(mpz_get_si(lifted.get_mpz_t()));
  }
  return out;
}

std::vector<double> Decode(const EncodedVector& v, uint64_t divisor, const FixedPointSpec& spec) {
  if (divisor == 0) throw VerfuError(ErrorCode::kDivisionByZero, "decode divisor must be >= 1");
  const double denominator = static_cast<double>(divisor) * std::ldexp(1.0, spec.scale_bits);
  std::vector<double> out;
  out.reserve(v.size());
  for (int64_t x : v.coords) out.push_back(static_cast<double>(x) / denominator);
  return out;
}

EncodedVector& operator+=(EncodedVector& a, const EncodedVector& b) {
  CheckSameLength(a, b);
  for (size_t i = 0; i < a.size(); ++i) a.coords[i] += b.coords[i];
  return a;
}

EncodedVector& operator-=(EncodedVector& a, const EncodedVector& b) {
  CheckSameLength(a, b);
  for (size_t i = 0; i < a.size(); ++i) a.coords[i] -= b.coords[i];
  return a;
}

}  // namespace verfu
