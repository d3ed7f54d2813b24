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

#include <gtest/gtest.h>

#include "verfu/adversary.h"
#include "verfu/keys.h"
#include "verfu/protocol.h"
#include "verfu/status.h"

namespace verfu {
namespace {

FixedPointSpec IntegerCodec() {
  FixedPointSpec s;
  s.scale_bits = 0;
  s.bound = 8;
  s.max_terms = 3;
  return s;
}

// Three devices with d = 2: devices 0 and 1 contribute v = (1,2) and (3,4),
// device 2 unlearns cv = (2,2). The honest aggregate is (2,4).
class ThreeDeviceRound : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    keys_ = new KeyMaterial(GenerateKeyMaterial({128, 128, 2}, 21));
  }
  static void TearDownTestSuite() { delete keys_; }

  void SetUp() override {
    devices_.resize(3);
    for (DeviceId i = 0; i < 3; ++i) devices_[i].id = i;
    devices_[2].role = Role::kUnlearning;
    devices_[2].cv = EncodedVector{{2, 2}};
    v_ = {EncodedVector{{1, 2}}, EncodedVector{{3, 4}}, EncodedVector{{0, 0}}};
    for (DeviceId i = 0; i < 3; ++i) {
      prepared_.push_back(DevicePrepare(devices_[i], v_[i], keys_->lhh, keys_->com, rng_));
      prepares_.push_back(prepared_.back().msg);
      uploads_.push_back(DeviceUpload(devices_[i], v_[i], keys_->paillier, rng_));
      openings_.push_back(prepared_.back().opening);
    }
    board_ = ServerBoard(prepares_, std::vector<DeviceId>{0, 1, 2});
  }

  EncodedVector Decrypt(const CiphertextVector& ct) {
    return DeviceDecryptUpdate(keys_->sk(), keys_->pk(), ct, 3, IntegerCodec()).a;
  }

  VerifierVerdict Verify(const CiphertextVector& ct, const std::vector<OpeningMsg>& openings) {
    VerifierView view{2, prepared_[2].opening, board_, FlagsOf(uploads_), Decrypt(ct), openings};
    return VerifyAsDevice(view, keys_->lhh, keys_->com);
  }

  static KeyMaterial* keys_;
  Rng rng_{99};
  std::vector<DeviceState> devices_;
  std::vector<EncodedVector> v_;
  std::vector<PreparedCommitment> prepared_;
  std::vector<PrepareMsg> prepares_;
  std::vector<UploadMsg> uploads_;
  std::vector<OpeningMsg> openings_;
  CommitmentBoard board_;
};
KeyMaterial* ThreeDeviceRound::keys_ = nullptr;

TEST_F(ThreeDeviceRound, HonestAggregateAndVerification) {
  CiphertextVector ct = ServerAggregateUnlearn(uploads_, keys_->pk());
  DecryptedUpdate up = DeviceDecryptUpdate(keys_->sk(), keys_->pk(), ct, 3, IntegerCodec());
  EXPECT_EQ(up.a, (EncodedVector{{2, 4}}));
  EXPECT_DOUBLE_EQ(up.delta[0], 2.0 / 3);
  EXPECT_DOUBLE_EQ(up.delta[1], 4.0 / 3);
  EXPECT_EQ(FlagsOf(uploads_), (std::vector<FlagEntry>{{0, 1}, {1, 1}, {2, -1}}));
  EXPECT_EQ(uploads_[2].flag, -1);

  EXPECT_TRUE(VerifyUnlearning(up.a, CombineHashes(keys_->lhh, openings_, FlagsOf(uploads_)), keys_->lhh));
  VerifierVerdict v = Verify(ct, openings_);
  EXPECT_TRUE(v.passed()) << v.reason;
  EXPECT_EQ(v.verifier, 2u);
}

TEST_F(ThreeDeviceRound, UnlearnerCommitsToItsHistory) {
  EXPECT_EQ(prepared_[2].opening.digest, LhhHashSigned(keys_->lhh, std::vector<int64_t>{2, 2}));
  EXPECT_EQ(prepared_[0].opening.digest, LhhHashSigned(keys_->lhh, std::vector<int64_t>{1, 2}));
  ASSERT_NE(board_.Find(2), nullptr);
  EXPECT_TRUE(Decommit(keys_->com, *board_.Find(2), EncodeMessage(keys_->com, prepared_[2].opening.digest),
                       prepared_[2].opening.randomness));
}

TEST_F(ThreeDeviceRound, SkipUnlearnIsDetected) {
  Rng rng(1);
  CiphertextVector ct = CorruptAggregate(SkipUnlearn{}, uploads_, keys_->pk(), rng);
  EXPECT_EQ(Decrypt(ct), (EncodedVector{{4, 6}}));
  VerifierVerdict v = Verify(ct, openings_);
  EXPECT_TRUE(v.decommit_ok);
  EXPECT_FALSE(v.unlearning_ok);
}

TEST_F(ThreeDeviceRound, PartialUnlearnIsDetected) {
  Rng rng(1);
  // Half of cv = (1,1) removed: (4,6) - (1,1).
  CiphertextVector ct = CorruptAggregate(PartialUnlearn{{}, 1, 2}, uploads_, keys_->pk(), rng);
  EXPECT_EQ(Decrypt(ct), (EncodedVector{{3, 5}}));
  EXPECT_FALSE(Verify(ct, openings_).unlearning_ok);
  EXPECT_THROW(CorruptAggregate(PartialUnlearn{{}, 2, 2}, uploads_, keys_->pk(), rng), VerfuError);
}

TEST_F(ThreeDeviceRound, TamperedAggregateIsDetected) {
  Rng rng(1);
  CiphertextVector ct = CorruptAggregate(TamperAggregate{0, 1}, uploads_, keys_->pk(), rng);
  EXPECT_EQ(Decrypt(ct), (EncodedVector{{3, 4}}));
  EXPECT_FALSE(Verify(ct, openings_).unlearning_ok);
}

TEST_F(ThreeDeviceRound, ForgedOpeningFailsDecommitment) {
  Rng rng(1);
  CiphertextVector ct = ServerAggregateUnlearn(uploads_, keys_->pk());
  std::vector<OpeningMsg> forged =
      CorruptOpenings(ForgeOpening{}, openings_, uploads_, keys_->lhh, keys_->com, nullptr, rng);
  EXPECT_NE(forged[0], openings_[0]);
  EXPECT_EQ(forged[1], openings_[1]);
  VerifierVerdict v = Verify(ct, forged);
  EXPECT_FALSE(v.decommit_ok);
  EXPECT_FALSE(v.passed());
}

TEST_F(ThreeDeviceRound, EquivocationPassesDecommitButFailsTheHash) {
  Rng rng(1);
  CiphertextVector ct = ServerAggregateUnlearn(uploads_, keys_->pk());
  EquivocateWithTrapdoor eq;
  std::vector<OpeningMsg> opened =
      CorruptOpenings(eq, openings_, uploads_, keys_->lhh, keys_->com, &*keys_->trapdoor, rng);
  VerifierVerdict v = Verify(ct, opened);
  EXPECT_TRUE(v.decommit_ok);
  EXPECT_FALSE(v.unlearning_ok);
  EXPECT_THROW(CorruptOpenings(eq, openings_, uploads_, keys_->lhh, keys_->com, nullptr, rng), VerfuError);
}

TEST_F(ThreeDeviceRound, ConsistentEquivocationPassesEveryCheck) {
  // The control case: with the trapdoor the server can shift the aggregate
  // and still satisfy both checks, so binding is what the scheme rests on.
  Rng rng(1);
  EquivocateWithTrapdoor eq;
  eq.consistent = true;
  eq.coordinate = 1;
  eq.offset = 3;
  CiphertextVector ct = CorruptAggregate(eq, uploads_, keys_->pk(), rng);
  EXPECT_EQ(Decrypt(ct), (EncodedVector{{2, 7}}));
  std::vector<OpeningMsg> opened =
      CorruptOpenings(eq, openings_, uploads_, keys_->lhh, keys_->com, &*keys_->trapdoor, rng);
  EXPECT_TRUE(Verify(ct, opened).passed());
}

TEST_F(ThreeDeviceRound, DroppingTheVerifierFromTheRoundIsDetected) {
  CiphertextVector ct = ServerAggregateUnlearn(std::span(uploads_).first(2), keys_->pk());
  std::vector<FlagEntry> flags{{0, 1}, {1, 1}};
  VerifierView view{2, prepared_[2].opening, board_, flags, Decrypt(ct), openings_};
  EXPECT_FALSE(VerifyAsDevice(view, keys_->lhh, keys_->com).unlearning_ok);
  // Flipping the verifier's flag to +1 is caught as well.
  flags = {{0, 1}, {1, 1}, {2, 1}};
  view.flags = flags;
  EXPECT_FALSE(VerifyAsDevice(view, keys_->lhh, keys_->com).unlearning_ok);
}

TEST_F(ThreeDeviceRound, MissingOrOutOfRangeInputsFailWithoutThrowing) {
  CiphertextVector ct = ServerAggregateUnlearn(uploads_, keys_->pk());
  std::vector<OpeningMsg> missing{openings_[0], openings_[2]};
  EXPECT_FALSE(Verify(ct, missing).passed());
  VerifierView view{2, prepared_[2].opening, board_, FlagsOf(uploads_), std::nullopt, openings_};
  VerifierVerdict v = VerifyAsDevice(view, keys_->lhh, keys_->com);
  EXPECT_TRUE(v.decommit_ok);
  EXPECT_FALSE(v.unlearning_ok);
  EXPECT_FALSE(v.reason.empty());
}

TEST_F(ThreeDeviceRound, DecommitmentTampering) {
  std::map<DeviceId, bool> ok = VerifyDecommitments(board_, openings_, keys_->com);
  EXPECT_EQ(ok.size(), 3u);
  for (auto [id, good] : ok) EXPECT_TRUE(good) << id;

  std::vector<OpeningMsg> bad = openings_;
  bad[1].randomness = (bad[1].randomness + 1) % keys_->com.group.q_order;
  EXPECT_FALSE(VerifyDecommitments(board_, bad, keys_->com).at(1));
  bad = openings_;
  bad[0].digest = bad[1].digest;
  EXPECT_FALSE(VerifyDecommitments(board_, bad, keys_->com).at(0));
  bad = openings_;
  bad.push_back(openings_[0]);  // duplicate id
  EXPECT_FALSE(VerifyDecommitments(board_, bad, keys_->com).at(0));
  bad = {openings_[0], openings_[1]};
  EXPECT_THROW(VerifyDecommitments(board_, bad, keys_->com), VerfuError);
}

TEST_F(ThreeDeviceRound, BoardRejectsDuplicatesAndStrangers) {
  std::vector<PrepareMsg> dup{prepares_[0], prepares_[0]};
  try {
    ServerBoard(dup);
    FAIL();
  } catch (const VerfuError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateDevice);
  }
  try {
    ServerBoard(std::span(prepares_).first(2), std::vector<DeviceId>{0, 1, 2});
    FAIL();
  } catch (const VerfuError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingDevice);
  }
  std::vector<PrepareMsg> reversed{prepares_[2], prepares_[0], prepares_[1]};
  EXPECT_EQ(ServerBoard(reversed), board_);
}

TEST(ProtocolTest, EveryoneUnlearningGivesTheNegatedHistory) {
  KeyMaterial keys = GenerateKeyMaterial({128, 128, 2}, 4);
  Rng rng(8);
  std::vector<UploadMsg> uploads;
  std::vector<OpeningMsg> openings;
  for (DeviceId i = 0; i < 2; ++i) {
    DeviceState d{i, Role::kUnlearning, EncodedVector{{int64_t(i) + 1, 5}}, {}, false};
    openings.push_back(DevicePrepare(d, EncodedVector{{0, 0}}, keys.lhh, keys.com, rng).opening);
    uploads.push_back(DeviceUpload(d, EncodedVector{{0, 0}}, keys.paillier, rng));
  }
  CiphertextVector ct = ServerAggregateUnlearn(uploads, keys.pk());
  EncodedVector a = DeviceDecryptUpdate(keys.sk(), keys.pk(), ct, 2, IntegerCodec()).a;
  EXPECT_EQ(a, (EncodedVector{{-3, -10}}));
  EXPECT_TRUE(VerifyUnlearning(a, CombineHashes(keys.lhh, openings, FlagsOf(uploads)), keys.lhh));
}

TEST(ProtocolTest, RescaledUpdateKeepsTheSurvivorsMean) {
  std::vector<FlaggedGradient> g{{{1, 2}, false}, {{3, 4}, true}};
  std::vector<double> out = RescaledUpdateReference(g);
  EXPECT_DOUBLE_EQ(out[0], 1);
  EXPECT_DOUBLE_EQ(out[1], 2);
  // With nothing unlearned the reference is the plain mean.
  g[1].unlearning = false;
  out = RescaledUpdateReference(g);
  EXPECT_DOUBLE_EQ(out[0], 2);
  EXPECT_DOUBLE_EQ(out[1], 3);
  g[0].unlearning = g[1].unlearning = true;
  try {
    RescaledUpdateReference(g);
    FAIL();
  } catch (const VerfuError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivisionByZero);
  }
}

TEST(ProtocolTest, AccumulateAndApplyUpdate) {
  DeviceState d;
  Accumulate(d, EncodedVector{{1, -2}});
  Accumulate(d, EncodedVector{{3, 3}});
  EXPECT_EQ(d.cv, (EncodedVector{{4, 1}}));
  EXPECT_EQ(ApplyUpdate(std::vector<double>{1, 1}, std::vector<double>{0.5, -1}), (std::vector<double>{1.5, 0}));
  EXPECT_THROW(ApplyUpdate(std::vector<double>{1}, std::vector<double>{0.5, -1}), VerfuError);
}

TEST(AdversaryTest, ParseBehaviorNames) {
  EXPECT_EQ(BehaviorName(ParseBehavior("honest")), "honest");
  auto skip = std::get<SkipUnlearn>(ParseBehavior("skip_unlearn:3,5"));
  EXPECT_EQ(skip.targets, (std::vector<DeviceId>{3, 5}));
  auto partial = std::get<PartialUnlearn>(ParseBehavior("partial_unlearn:1/4:7"));
  EXPECT_EQ(partial.numerator, 1u);
  EXPECT_EQ(partial.denominator, 4u);
  EXPECT_EQ(partial.targets, (std::vector<DeviceId>{7}));
  auto tamper = std::get<TamperAggregate>(ParseBehavior("tamper_aggregate:2:-5"));
  EXPECT_EQ(tamper.coordinate, 2u);
  EXPECT_EQ(tamper.offset, -5);
  EXPECT_EQ(std::get<ForgeOpening>(ParseBehavior("forge_opening:4")).target, 4u);
  EXPECT_TRUE(std::get<EquivocateWithTrapdoor>(ParseBehavior("equivocate_consistent")).consistent);
  EXPECT_TRUE(RequiresTrapdoor(ParseBehavior("equivocate:1")));
  EXPECT_FALSE(RequiresTrapdoor(ParseBehavior("forge_opening")));
  for (const char* bad : {"", "nope", "skip_unlearn:x", "partial_unlearn:3", "tamper_aggregate:1:2:3"}) {
    EXPECT_THROW(ParseBehavior(bad), VerfuError) << bad;
  }
}

TEST(AdversaryTest, BehaviorsOnlyActWithUnlearnersAndTargetsPresent) {
  std::vector<UploadMsg> normal{{0, 1, {}}, {1, 1, {}}};
  std::vector<UploadMsg> mixed{{0, 1, {}}, {1, -1, {}}};
  EXPECT_FALSE(BehaviorActs(TamperAggregate{}, normal));
  EXPECT_TRUE(BehaviorActs(TamperAggregate{}, mixed));
  EXPECT_FALSE(BehaviorActs(Honest{}, mixed));
  EXPECT_TRUE(BehaviorActs(SkipUnlearn{{1}}, mixed));
  EXPECT_FALSE(BehaviorActs(SkipUnlearn{{0}}, mixed));
  EXPECT_FALSE(BehaviorActs(ForgeOpening{5}, mixed));
}

}  // namespace
}  // namespace verfu
