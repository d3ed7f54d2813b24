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

#include "verfu/simtrain.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "verfu/messages.h"
#include "verfu/status.h"

namespace verfu {
namespace {

LogisticWorkload SmallTask(uint64_t seed) {
  SyntheticTaskSpec spec;
  spec.features = 5;
  spec.classes = 3;
  spec.samples_per_device = 30;
  spec.test_samples = 300;
  return LogisticWorkload::Synthetic(spec, 4, seed);
}

TEST(LogisticTest, GradientMatchesCentralDifferences) {
  LogisticWorkload task = SmallTask(1);
  Rng rng(2);
  std::vector<double> w(task.dim());
  for (double& x : w) x = rng.Uniform01() - 0.5;
  const Dataset& data = task.device_data(0);
  std::vector<double> grad = task.LossGradient(w, data);
  const double h = 1e-5;
  for (size_t j = 0; j < w.size(); ++j) {
    std::vector<double> up = w, down = w;
    up[j] += h;
    down[j] -= h;
    double numeric = (task.Loss(up, data) - task.Loss(down, data)) / (2 * h);
    EXPECT_NEAR(grad[j], numeric, 1e-9) << j;
  }
}

TEST(LogisticTest, HandComputedTwoClassExample) {
  // One sample x = (1), y = 0, w = 0: p = (1/2, 1/2), loss = ln 2,
  // gradient rows (p - onehot) * (x, 1) = (-1/2, -1/2) and (1/2, 1/2).
  Dataset one{{{1.0}}, {0}};
  LogisticWorkload task = LogisticWorkload::FromData(1, 2, {one}, one);
  std::vector<double> w(4, 0.0);
  EXPECT_DOUBLE_EQ(task.Loss(w, one), std::log(2.0));
  EXPECT_EQ(task.LossGradient(w, one), (std::vector<double>{-0.5, -0.5, 0.5, 0.5}));
  // One epoch at lr 1 moves by minus the gradient.
  EXPECT_EQ(task.LocalTrain(0, 1, w, {1, 1.0}), (std::vector<double>{0.5, 0.5, -0.5, -0.5}));
  // Ties predict the lowest class, so the zero model is right on this sample.
  EXPECT_EQ(task.Evaluate(w)->accuracy, 1.0);
}

TEST(LogisticTest, ZeroLearningRateGivesZeroUpdate) {
  LogisticWorkload task = SmallTask(3);
  std::vector<double> w = task.InitialModel();
  std::vector<double> v = task.LocalTrain(1, 1, w, {5, 0.0});
  EXPECT_EQ(v, std::vector<double>(task.dim(), 0.0));
}

TEST(LogisticTest, SyntheticTaskIsDeterministicAndLearnable) {
  LogisticWorkload a = SmallTask(4), b = SmallTask(4);
  EXPECT_EQ(a.device_data(2).y, b.device_data(2).y);
  EXPECT_EQ(a.test_data().x, b.test_data().x);
  EXPECT_EQ(a.test_data().size(), 300u);
  std::vector<double> w = a.InitialModel();
  double before = a.Evaluate(w)->loss;
  for (int r = 1; r <= 20; ++r) {
    std::vector<double> v = a.LocalTrain(0, r, w, {5, 0.1});
    for (size_t j = 0; j < w.size(); ++j) w[j] += v[j];
  }
  EXPECT_LT(a.Evaluate(w)->loss, before);
}

TEST(DirichletTest, RowsAreDistributionsAndDeterministic) {
  Rng a(7), b(7);
  auto pa = DirichletProportions(50, 4, 0.5, a);
  auto pb = DirichletProportions(50, 4, 0.5, b);
  EXPECT_EQ(pa, pb);
  for (const auto& row : pa) {
    ASSERT_EQ(row.size(), 4u);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
    for (double p : row) EXPECT_GE(p, 0.0);
  }
}

TEST(FrozenWorkloadTest, ScriptedAndSeeded) {
  FrozenWorkload s = FrozenWorkload::Scripted({{{1, 2}, {3, 4}}});
  EXPECT_EQ(s.dim(), 2u);
  EXPECT_EQ(s.LocalTrain(0, 2, std::vector<double>{9, 9}, {}), (std::vector<double>{3, 4}));
  FrozenWorkload r = FrozenWorkload::Seeded(8, 0.5, 11);
  std::vector<double> x = r.LocalTrain(3, 7, std::vector<double>(8, 0.0), {});
  EXPECT_EQ(x, r.LocalTrain(3, 7, std::vector<double>(8, 1.0), {}));
  EXPECT_NE(x, r.LocalTrain(3, 8, std::vector<double>(8, 0.0), {}));
  for (double xi : x) EXPECT_LE(std::fabs(xi), 0.5);
}

TEST(RecoveryTest, WorkedExamples) {
  std::vector<double> dip{0.9, 0.85, 0.88, 0.90};
  EXPECT_EQ(RecoveryRounds(dip, 1), 3u);
  std::vector<double> acc{0.80, 0.82, 0.84, 0.70, 0.78, 0.8395, 0.85};
  EXPECT_EQ(RecoveryRounds(acc, 3), 3u);
  std::vector<double> flat{0.5, 0.6, 0.6};
  EXPECT_EQ(RecoveryRounds(flat, 2), 1u);
  std::vector<double> never{0.5, 0.9, 0.1, 0.2};
  EXPECT_EQ(RecoveryRounds(never, 2), std::nullopt);
}

CampaignConfig SmallCampaign() {
  CampaignConfig c;
  c.devices = 40;
  c.rounds = 20;
  c.cohort = 8;
  c.unlearn_rate = 0.25;
  c.cadence = 5;
  c.seed = 3;
  return c;
}

TEST(CampaignConfigTest, DerivedQuantitiesAndValidation) {
  CampaignConfig c = SmallCampaign();
  EXPECT_EQ(c.TotalUnlearners(), 10u);
  EXPECT_EQ(c.UnlearningEvents(), 4u);
  EXPECT_EQ(c.Codec().max_terms, 160u);
  EXPECT_NO_THROW(c.Validate());
  CampaignConfig bad = c;
  bad.cohort = 0;
  EXPECT_THROW(bad.Validate(), VerfuError);
  bad = c;
  bad.unlearn_rate = 1.5;
  EXPECT_THROW(bad.Validate(), VerfuError);
  bad = c;
  bad.unlearn_rate = 0.95;  // leaves fewer than one cohort of devices
  EXPECT_THROW(bad.Validate(), VerfuError);
}

TEST(SchedulerTest, PlansAreValidAndQuotasAreMet) {
  CampaignConfig c = SmallCampaign();
  CampaignScheduler s(c);
  std::vector<DeviceState> devices(c.devices);
  for (DeviceId i = 0; i < c.devices; ++i) devices[i].id = i;
  size_t unlearned = 0;
  for (uint32_t t = 1; t <= c.rounds; ++t) {
    RoundPlan plan = s.Next(t, devices);
    EXPECT_EQ(plan.round, t);
    EXPECT_EQ(plan.cohort.size(), c.cohort);
    EXPECT_TRUE(std::is_sorted(plan.cohort.begin(), plan.cohort.end()));
    EXPECT_EQ(std::set<DeviceId>(plan.cohort.begin(), plan.cohort.end()).size(), plan.cohort.size());
    EXPECT_TRUE(std::includes(plan.cohort.begin(), plan.cohort.end(), plan.unlearning.begin(), plan.unlearning.end()));
    EXPECT_EQ(s.IsUnlearningEvent(t), t % c.cadence == 0);
    if (!s.IsUnlearningEvent(t)) EXPECT_TRUE(plan.unlearning.empty());
    for (DeviceId id : plan.cohort) {
      EXPECT_FALSE(devices[id].exited);
      devices[id].selected_rounds.push_back(t);
    }
    // Every unlearner succeeds and leaves.
    for (DeviceId id : plan.unlearning) {
      EXPECT_FALSE(devices[id].selected_rounds.size() == 1 && t > 5) << "unlearner with no history";
      devices[id].exited = true;
      ++unlearned;
    }
  }
  EXPECT_EQ(unlearned, c.TotalUnlearners());
}

TEST(SchedulerTest, FailedUnlearnersRetryFirst) {
  CampaignConfig c = SmallCampaign();
  CampaignScheduler s(c);
  std::vector<DeviceState> devices(c.devices);
  for (DeviceId i = 0; i < c.devices; ++i) devices[i].id = i;
  RoundPlan at5;
  for (uint32_t t = 1; t <= 5; ++t) at5 = s.Next(t, devices);
  ASSERT_FALSE(at5.unlearning.empty());
  // Nobody exits: all of them keep the unlearning role.
  for (DeviceId id : at5.unlearning) devices[id].role = Role::kUnlearning;
  for (uint32_t t = 6; t <= 9; ++t) {
    RoundPlan p = s.Next(t, devices);
    for (DeviceId id : at5.unlearning) EXPECT_FALSE(std::binary_search(p.cohort.begin(), p.cohort.end(), id));
  }
  RoundPlan at10 = s.Next(10, devices);
  EXPECT_TRUE(std::includes(at10.unlearning.begin(), at10.unlearning.end(), at5.unlearning.begin(),
                            at5.unlearning.end()));
}

TEST(OracleTest, RetrainOracleIsSelfConsistent) {
  CampaignConfig c = SmallCampaign();
  FrozenWorkload w = FrozenWorkload::Seeded(4, 0.5, 9);
  OracleTrajectory o = RetrainOracle(c, w);
  ASSERT_EQ(o.plans.size(), c.rounds);
  ASSERT_EQ(o.model_sums.size(), c.rounds);
  EXPECT_EQ(o.model_sums, o.retained_sums);
  // Reference: recompute the retained contributions directly from the plans.
  FixedPointSpec codec = c.Codec();
  std::set<DeviceId> gone;
  for (const RoundPlan& p : o.plans) gone.insert(p.unlearning.begin(), p.unlearning.end());
  EncodedVector direct{std::vector<int64_t>(4, 0)};
  for (const RoundPlan& p : o.plans) {
    for (DeviceId id : p.cohort) {
      if (gone.contains(id)) continue;
      direct += Encode(w.LocalTrain(id, p.round, std::vector<double>(4, 0.0), {}), codec);
    }
  }
  EXPECT_EQ(o.model_sums.back(), direct);
}

}  // namespace
}  // namespace verfu
