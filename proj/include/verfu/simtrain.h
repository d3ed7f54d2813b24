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

// Training workloads, the campaign scheduler, and the plaintext oracle the
// protocol engine is checked against.

#ifndef VERFU_SIMTRAIN_H_
#define VERFU_SIMTRAIN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "verfu/algebra.h"
#include "verfu/codec.h"
#include "verfu/messages.h"

namespace verfu {

struct TrainingOptions {
  uint32_t epochs = 5;
  double lr = 0.01;
};

struct Evaluation {
  double accuracy = 0;  // fraction in [0, 1]
  double loss = 0;      // mean cross-entropy
};

class Workload {
 public:
  virtual ~Workload() = default;

  virtual size_t dim() const = 0;
  virtual std::vector<double> InitialModel() const { return std::vector<double>(dim(), 0.0); }
  // v = w_local - w after local training. Deterministic in (device, round, w).
  virtual std::vector<double> LocalTrain(DeviceId device, uint32_t round, std::span<const double> w,
                                         const TrainingOptions& training) const = 0;
  // nullopt for workloads without a test split.
  virtual std::optional<Evaluation> Evaluate(std::span<const double> w) const { return std::nullopt; }
};

// Gradients that ignore the model, so unlearning cancels exactly.
class FrozenWorkload : public Workload {
 public:
  // script[device][round - 1] is the d-vector for that device and round.
  static FrozenWorkload Scripted(std::vector<std::vector<std::vector<double>>> script);
  // Uniform values in [-magnitude, magnitude] drawn from a per (device,
  // round) stream.
  static FrozenWorkload Seeded(size_t dim, double magnitude, uint64_t seed);

  size_t dim() const override { return dim_; }
  std::vector<double> LocalTrain(DeviceId device, uint32_t round, std::span<const double> w,
                                 const TrainingOptions& training) const override;

 private:
  FrozenWorkload() = default;

  size_t dim_ = 0;
  std::vector<std::vector<std::vector<double>>> script_;
  bool seeded_ = false;
  double magnitude_ = 0;
  uint64_t seed_ = 0;
};

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<uint32_t> y;
  size_t size() const { return y.size(); }
};

struct SyntheticTaskSpec {
  size_t features = 16;
  size_t classes = 4;
  size_t samples_per_device = 40;
  size_t test_samples = 2000;  // split evenly across classes
  double center_scale = 1.0;   // stddev of blob centers; samples add N(0, 1)
  double dirichlet_alpha = 1.0;
};

// Label proportions per device, each row ~ Dirichlet(alpha, ..., alpha).
std::vector<std::vector<double>> DirichletProportions(size_t devices, size_t classes, double alpha, Rng& rng);

// Softmax regression. Parameters are row-major classes x (features + 1),
// the last column being the bias.
class LogisticWorkload : public Workload {
 public:
  static LogisticWorkload Synthetic(const SyntheticTaskSpec& spec, size_t num_devices, uint64_t seed);
  static LogisticWorkload FromData(size_t features, size_t classes, std::vector<Dataset> device_data, Dataset test);

  size_t dim() const override { return classes_ * (features_ + 1); }
  // E epochs of full-batch gradient descent on the device's mean
  // cross-entropy.
  std::vector<double> LocalTrain(DeviceId device, uint32_t round, std::span<const double> w,
                                 const TrainingOptions& training) const override;
  std::optional<Evaluation> Evaluate(std::span<const double> w) const override;

  // Mean cross-entropy and its gradient over `data`.
  double Loss(std::span<const double> w, const Dataset& data) const;
  std::vector<double> LossGradient(std::span<const double> w, const Dataset& data) const;

  const Dataset& device_data(DeviceId id) const { return devices_.at(id); }
  const Dataset& test_data() const { return test_; }
  size_t features() const { return features_; }
  size_t classes() const { return classes_; }

 private:
  LogisticWorkload() = default;
  void Logits(std::span<const double> w, const std::vector<double>& x, std::vector<double>& out) const;

  size_t features_ = 0;
  size_t classes_ = 0;
  std::vector<Dataset> devices_;
  Dataset test_;
};

struct CampaignConfig {
  uint32_t devices = 500;
  uint32_t rounds = 100;
  uint32_t cohort = 20;
  double unlearn_rate = 0.0;
  uint32_t cadence = 5;  // unlearning events at rounds cadence, 2 cadence, ...
  TrainingOptions training;
  int scale_bits = 24;
  double bound = 4.0;
  uint64_t seed = 1;

  // max_terms = cohort * rounds covers any single device's cv.
  FixedPointSpec Codec() const;
  uint32_t TotalUnlearners() const;  // round(unlearn_rate * devices)
  uint32_t UnlearningEvents() const { return rounds / cadence; }
  // Throws kInvalidConfig naming the offending key.
  void Validate() const;
};

struct RoundPlan {
  uint32_t round = 0;
  std::vector<DeviceId> cohort;      // sorted
  std::vector<DeviceId> unlearning;  // sorted subset of cohort
};

// Picks each round's cohort. Unlearning events fire every `cadence` rounds
// and spread round(rate * N) requests evenly over the events; devices whose
// verification failed retry at the next event. New unlearners are drawn from
// devices that have contributed before when possible.
class CampaignScheduler {
 public:
  explicit CampaignScheduler(const CampaignConfig& config);

  bool IsUnlearningEvent(uint32_t round) const;
  // Throws kInvalidConfig if the pool cannot fill the cohort.
  RoundPlan Next(uint32_t round, std::span<const DeviceState> devices);

 private:
  CampaignConfig config_;
  Rng rng_;
  std::vector<uint32_t> quotas_;  // new unlearners per event
  uint32_t carry_ = 0;
};

struct OracleTrajectory {
  std::vector<RoundPlan> plans;               // plans[r - 1]
  std::vector<EncodedVector> model_sums;      // sum of a over rounds 1..r
  std::vector<EncodedVector> retained_sums;   // contributions of devices still present after round r
};

// Plaintext integer replay of a campaign with every exit succeeding. Needs a
// workload whose gradients ignore the model.
OracleTrajectory RetrainOracle(const CampaignConfig& config, const Workload& workload);

std::optional<Evaluation> Evaluate(std::span<const double> model, const Workload& workload);

// Smallest k >= 1 with acc[u + k - 1] >= acc[u - 1] - tolerance, where
// acc[r] is the accuracy after round r. nullopt if it never happens.
std::optional<size_t> RecoveryRounds(std::span<const double> acc, size_t unlearn_round, double tolerance = 0.001);

}  // namespace verfu

#endif  // VERFU_SIMTRAIN_H_
