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

#include <gtest/gtest.h>

#include <cmath>

#include "verfu/paillier.h"
#include "verfu/status.h"

namespace verfu {
namespace {

FixedPointSpec Spec(int scale_bits, double bound, uint64_t max_terms) {
  FixedPointSpec s;
  s.scale_bits = scale_bits;
  s.bound = bound;
  s.max_terms = max_terms;
  return s;
}

TEST(CodecTest, EncodeExamples) {
  FixedPointSpec s = Spec(4, 4.0, 1);
  std::vector<double> x{0.0, 1.5, -0.25, 0.03125, -0.03125};
  // 0.03125 * 16 = 0.5 rounds away from zero.
  EXPECT_EQ(Encode(x, s).coords, (std::vector<int64_t>{0, 24, -4, 1, -1}));
  std::vector<double> too_big{4.5};
  try {
    Encode(too_big, s);
    FAIL();
  } catch (const VerfuError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfBound);
  }
  std::vector<double> nan{std::nan("")};
  EXPECT_THROW(Encode(nan, s), VerfuError);
}

TEST(CodecTest, RingExamples) {
  FixedPointSpec s = Spec(0, 4.0, 1);
  EncodedVector v{{0, -4, 4}};
  std::vector<BigUint> r = ToRing(v, 35);
  EXPECT_EQ(r, (std::vector<BigUint>{0, 31, 4}));
  EXPECT_EQ(FromRing(r, 35, s), v);
  EXPECT_EQ(FromRing(std::vector<BigUint>{31}, 35, s).coords[0], -4);
}

TEST(CodecTest, FullCenteredRangeRoundTripsModulo101) {
  FixedPointSpec s = Spec(0, 50.0, 1);
  for (int64_t x = -50; x <= 50; ++x) {
    EncodedVector v{{x}};
    EXPECT_EQ(FromRing(ToRing(v, 101), 101, s), v) << x;
  }
  EXPECT_THROW(ToRing(EncodedVector{{51}}, 101), VerfuError);
}

TEST(CodecTest, FromRingRejectsValuesBeyondTheSumBound) {
  FixedPointSpec s = Spec(0, 3.0, 2);  // sums up to 6
  EXPECT_EQ(FromRing(std::vector<BigUint>{6}, 101, s).coords[0], 6);
  try {
    FromRing(std::vector<BigUint>{7}, 101, s);
    FAIL();
  } catch (const VerfuError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfBound);
  }
}

TEST(CodecTest, DecodeExamples) {
  FixedPointSpec s = Spec(4, 4.0, 1);
  EXPECT_EQ(Decode(EncodedVector{{24}}, 1, s)[0], 1.5);
  EXPECT_EQ(Decode(EncodedVector{{0}}, 7, s)[0], 0.0);
  EXPECT_EQ(Decode(EncodedVector{{48}}, 2, s)[0], 1.5);
  EXPECT_THROW(Decode(EncodedVector{{1}}, 0, s), VerfuError);
}

TEST(CodecTest, QuantizationBound) {
  FixedPointSpec s = Spec(24, 4.0, 1);
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x{(rng.Uniform01() * 2 - 1) * 4.0};
    EXPECT_LE(std::fabs(Decode(Encode(x, s), 1, s)[0] - x[0]), std::ldexp(1.0, -24));
  }
}

TEST(CodecTest, RandomRoundTrip) {
  FixedPointSpec s = Spec(24, 4.0, 1);
  Rng rng(2);
  PaillierKeyPair k = PaillierKeygen(128, rng);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x{(rng.Uniform01() * 2 - 1) * 4.0, (rng.Uniform01() * 2 - 1) * 4.0};
    EncodedVector v = Encode(x, s);
    EXPECT_EQ(FromRing(ToRing(v, k.pk.n), k.pk.n, s), v);
  }
}

TEST(CodecTest, SumConsistencyUnderBothModuli) {
  const uint64_t k_terms = 40;
  FixedPointSpec s = Spec(24, 4.0, k_terms);
  Rng rng(3);
  PaillierKeyPair keys = PaillierKeygen(128, rng);
  GroupDesc g = MakeGroup(128, 3, "sum");
  s.ValidateFor(keys.pk.n);
  s.ValidateFor(g.q_order);
  for (int t = 0; t < 200; ++t) {
    size_t terms = 1 + rng.NextU64() % k_terms;
    EncodedVector plain{{0, 0, 0}};
    std::vector<BigUint> sum_n(3, 0), sum_q(3, 0);
    for (size_t i = 0; i < terms; ++i) {
      std::vector<double> x(3);
      for (double& xi : x) xi = (rng.Uniform01() * 2 - 1) * 4.0;
      EncodedVector v = Encode(x, s);
      // Integer oracle on plain int64.
      for (size_t j = 0; j < 3; ++j) plain.coords[j] += v.coords[j];
      auto rn = ToRing(v, keys.pk.n);
      auto rq = ToRing(v, g.q_order);
      for (size_t j = 0; j < 3; ++j) {
        sum_n[j] = (sum_n[j] + rn[j]) % keys.pk.n;
        sum_q[j] = (sum_q[j] + rq[j]) % g.q_order;
      }
    }
    EXPECT_EQ(FromRing(sum_n, keys.pk.n, s), plain);
    EXPECT_EQ(FromRing(sum_q, g.q_order, s), plain);
  }
}

TEST(CodecTest, ValidateRejectsSpecsThatDoNotFit) {
  EXPECT_THROW(Spec(24, 4.0, 1).ValidateFor(BigUint(1) << 20), VerfuError);
  EXPECT_NO_THROW(Spec(24, 4.0, 2000).ValidateFor(BigUint(1) << 64));
}

}  // namespace
}  // namespace verfu
