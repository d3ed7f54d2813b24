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

#include "verfu/algebra.h"

#include <gtest/gtest.h>

#include <set>

#include "verfu/status.h"

namespace verfu {
namespace {

// Independent oracles on machine integers.
uint64_t SchoolbookPow(uint64_t base, uint64_t exp, uint64_t mod) {
  uint64_t acc = 1 % mod;
  for (uint64_t i = 0; i < exp; ++i) acc = acc * (base % mod) % mod;
  return acc;
}

bool TrialDivisionPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

TEST(ModPowTest, MatchesSchoolbook) {
  EXPECT_EQ(ModPow(2, 10, 1000), 24);
  EXPECT_EQ(SchoolbookPow(2, 10, 1000), 24u);
  EXPECT_EQ(ModPow(2, 11, 23), 1);
  EXPECT_EQ(ModPow(12345, 0, 97), 1);
  EXPECT_EQ(ModPow(0, 0, 97), 1);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    uint64_t b = rng.NextU64() % 1000, e = rng.NextU64() % 300, m = 2 + rng.NextU64() % 5000;
    EXPECT_EQ(ModPow(BigUint(static_cast<unsigned long>(b)), BigUint(static_cast<unsigned long>(e)),
                     BigUint(static_cast<unsigned long>(m))),
              BigUint(static_cast<unsigned long>(SchoolbookPow(b, e, m))));
  }
}

TEST(ModInvTest, SmallCasesAndErrors) {
  EXPECT_EQ(ModInv(3, 7), 5);
  EXPECT_EQ(ModInv(1, 91), 1);
  try {
    ModInv(4, 8);
    FAIL() << "expected NotInvertible";
  } catch (const VerfuError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotInvertible);
  }
}

TEST(ModInvTest, InverseOfInverseIsIdentity) {
  Rng rng(11);
  BigUint m = GenPrime(128, rng) * GenPrime(128, rng);
  for (int i = 0; i < 200; ++i) {
    BigUint x = rng.Between(1, m);
    BigUint y = ModInv(x, m);
    EXPECT_EQ(x * y % m, 1);
    EXPECT_EQ(ModInv(y, m), x);
  }
}

TEST(GenPrimeTest, SixteenBitIsDeterministicAndPrime) {
  Rng a(1), b(1);
  BigUint p = GenPrime(16, a);
  EXPECT_EQ(p, GenPrime(16, b));
  EXPECT_EQ(BitLength(p), 16u);
  EXPECT_TRUE(TrialDivisionPrime(p.get_ui()));
}

TEST(GenPrimeTest, EightBitLandsOnAnEightBitPrime) {
  std::set<unsigned long> primes;
  for (unsigned long n = 128; n < 256; ++n) {
    if (TrialDivisionPrime(n)) primes.insert(n);
  }
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    BigUint p = GenPrime(8, rng);
    EXPECT_TRUE(primes.contains(p.get_ui())) << p;
  }
}

TEST(GenPrimeTest, LargePrimePassesFreshMillerRabin) {
  Rng rng(5);
  BigUint p = GenPrime(256, rng);
  EXPECT_EQ(BitLength(p), 256u);
  EXPECT_NE(mpz_probab_prime_p(p.get_mpz_t(), 50), 0);
  Rng other(999);
  EXPECT_TRUE(IsProbablePrime(p, 40, other));
  EXPECT_FALSE(IsProbablePrime(p * 3, 40, other));
}

TEST(GroupTest, ToyGroupSubgroupEnumeration) {
  GroupDesc g{23, 11, "toy"};
  std::set<unsigned long> members;
  for (unsigned long x = 1; x < 23; ++x) {
    if (g.IsMember(x)) members.insert(x);
  }
  EXPECT_EQ(members, (std::set<unsigned long>{1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18}));
  Rng rng(1);
  EXPECT_TRUE(ValidateGroup(g, rng));
  EXPECT_FALSE(ValidateGroup(GroupDesc{29, 14, "bad"}, rng));
}

TEST(GroupTest, Rfc3526PrimeIsSafe) {
  GroupDesc g = Rfc3526Group2048("t");
  EXPECT_EQ(BitLength(g.p_mod), 2048u);
  EXPECT_EQ(g.p_mod, 2 * g.q_order + 1);
  EXPECT_NE(mpz_probab_prime_p(g.p_mod.get_mpz_t(), 10), 0);
  EXPECT_NE(mpz_probab_prime_p(g.q_order.get_mpz_t(), 10), 0);
}

TEST(GroupTest, GeneratedGroupIsSafeAndDeterministic) {
  GroupDesc a = MakeGroup(128, 7, "s");
  GroupDesc b = MakeGroup(128, 7, "s");
  EXPECT_EQ(a.p_mod, b.p_mod);
  EXPECT_EQ(BitLength(a.p_mod), 128u);
  EXPECT_EQ(a.p_mod, 2 * a.q_order + 1);
  EXPECT_NE(mpz_probab_prime_p(a.q_order.get_mpz_t(), 30), 0);
  EXPECT_NE(mpz_probab_prime_p(a.p_mod.get_mpz_t(), 30), 0);
}

TEST(GroupTest, DerivedGeneratorsAreSubgroupMembers) {
  GroupDesc g = MakeGroup(64, 3, "gen-test");
  BigUint g0 = DeriveGenerator(g, "g_0");
  BigUint g1 = DeriveGenerator(g, "g_1");
  EXPECT_EQ(g0, DeriveGenerator(g, "g_0"));
  EXPECT_NE(g0, g1);
  EXPECT_NE(g0, 1);
  EXPECT_EQ(ModPow(g0, g.q_order, g.p_mod), 1);
  EXPECT_EQ(ModPow(g1, g.q_order, g.p_mod), 1);
}

TEST(GroupTest, LagrangeOnRandomSubgroupElements) {
  GroupDesc g = MakeGroup(128, 9, "lagrange");
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    BigUint x = ModPow(rng.Between(2, g.p_mod - 1), 2, g.p_mod);
    EXPECT_EQ(ModPow(x, g.q_order, g.p_mod), 1);
  }
}

TEST(BytesTest, FixedWidthRoundTrip) {
  EXPECT_EQ(ByteWidth(BigUint(255)), 1u);
  EXPECT_EQ(ByteWidth(BigUint(256)), 2u);
  Bytes b = ToFixedBytes(BigUint(0x0102), 4);
  EXPECT_EQ(b, (Bytes{0, 0, 1, 2}));
  EXPECT_EQ(FromBytes(b), 0x0102);
  EXPECT_EQ(ToHex(b), "00000102");
  EXPECT_EQ(FromHex("00000102"), b);
  EXPECT_THROW(ToFixedBytes(BigUint(0x10000), 2), VerfuError);
  EXPECT_THROW(FromHex("0g"), VerfuError);
}

TEST(RngTest, DerivedStreamsAreIndependentAndReproducible) {
  Rng a = Rng::Derive(1, "x"), b = Rng::Derive(1, "x"), c = Rng::Derive(1, "y");
  uint64_t va = a.NextU64();
  EXPECT_EQ(va, b.NextU64());
  EXPECT_NE(va, c.NextU64());
  for (int i = 0; i < 1000; ++i) {
    BigUint x = a.Below(BigUint(10));
    EXPECT_TRUE(x >= 0 && x < 10);
    double u = a.Uniform01();
    EXPECT_TRUE(u >= 0 && u < 1);
  }
}

}  // namespace
}  // namespace verfu
