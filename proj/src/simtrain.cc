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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "verfu/status.h"

namespace verfu {
namespace {

[[noreturn]] void BadConfig(const std::string& key, const std::string& why) {
  throw VerfuError(ErrorCode::kInvalidConfig, "config key '" + key + "': " + why);
}

// Uniform index in [0, n) without modulo bias.
size_t UniformIndex(Rng& rng, size_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = rng.NextU64();
  } while (x >= limit);
  return static_cast<size_t>(x % n);
}

// k distinct elements of `pool`, partial Fisher-Yates.
std::vector<DeviceId> Sample(std::vector<DeviceId> pool, size_t k, Rng& rng) {
  k = std::min(k, pool.size());
  for (size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + UniformIndex(rng, pool.size() - i)]);
  pool.resize(k);
  return pool;
}

EncodedVector Zeros(size_t d) { return EncodedVector{std::vector<int64_t>(d, 0)}; }

}  // namespace

// ---------------------------------------------------------------------------
// Frozen workload.

FrozenWorkload FrozenWorkload::Scripted(std::vector<std::vector<std::vector<double>>> script) {
  FrozenWorkload w;
  for (const auto& device : script) {
    for (const auto& v : device) {
      if (w.dim_ == 0) w.dim_ = v.size();
      if (v.size() != w.dim_) throw VerfuError(ErrorCode::kDimMismatch, "scripted gradients differ in length");
    }
  }
  if (w.dim_ == 0) throw VerfuError(ErrorCode::kInvalidArgument, "empty gradient script");
  w.script_ = std::move(script);
  return w;
}

FrozenWorkload FrozenWorkload::Seeded(size_t dim, double magnitude, uint64_t seed) {
  if (dim == 0 || !(magnitude >= 0)) throw VerfuError(ErrorCode::kInvalidArgument, "bad frozen workload parameters");
  FrozenWorkload w;
  w.dim_ = dim;
  w.seeded_ = true;
  w.magnitude_ = magnitude;
  w.seed_ = seed;
  return w;
}

std::vector<double> FrozenWorkload::LocalTrain(DeviceId device, uint32_t round, std::span<const double>,
                                               const TrainingOptions&) const {
  if (seeded_) {
    Rng rng = Rng::Derive(seed_, "frozen:" + std::to_string(device) + ":" + std::to_string(round));
    std::vector<double> v(dim_);
    for (double& x : v) x = (2 * rng.Uniform01() - 1) * magnitude_;
    return v;
  }
  if (device >= script_.size() || round == 0 || round > script_[device].size()) {
    throw VerfuError(ErrorCode::kInvalidArgument, "no scripted gradient for device " + std::to_string(device) +
                                                      " round " + std::to_string(round));
  }
  return script_[device][round - 1];
}

// ---------------------------------------------------------------------------
// Synthetic logistic workload.

std::vector<std::vector<double>> DirichletProportions(size_t devices, size_t classes, double alpha, Rng& rng) {
  if (classes == 0 || !(alpha > 0)) throw VerfuError(ErrorCode::kInvalidArgument, "Dirichlet needs classes > 0, alpha > 0");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<std::vector<double>> out(devices, std::vector<double>(classes));
  for (auto& row : out) {
    double total = 0;
    for (double& x : row) total += (x = gamma(rng.engine()));
    if (total <= 0) {
      std::fill(row.begin(), row.end(), 1.0 / classes);
      continue;
    }
    for (double& x : row) x /= total;
  }
  return out;
}

LogisticWorkload LogisticWorkload::Synthetic(const SyntheticTaskSpec& spec, size_t num_devices, uint64_t seed) {
  if (spec.features == 0 || spec.classes < 2) {
    throw VerfuError(ErrorCode::kInvalidArgument, "synthetic task needs features >= 1 and classes >= 2");
  }
  Rng rng = Rng::Derive(seed, "synthetic-task");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> centers(spec.classes, std::vector<double>(spec.features));
  for (auto& c : centers) {
    for (double& x : c) x = spec.center_scale * normal(rng.engine());
  }
  auto draw = [&](uint32_t label) {
    std::vector<double> x(spec.features);
    for (size_t j = 0; j < spec.features; ++j) x[j] = centers[label][j] + normal(rng.engine());
    return x;
  };

  auto proportions = DirichletProportions(num_devices, spec.classes, spec.dirichlet_alpha, rng);
  std::vector<Dataset> devices(num_devices);
  for (size_t i = 0; i < num_devices; ++i) {
    std::discrete_distribution<uint32_t> label(proportions[i].begin(), proportions[i].end());
    for (size_t s = 0; s < spec.samples_per_device; ++s) {
      uint32_t y = label(rng.engine());
      devices[i].x.push_back(draw(y));
      devices[i].y.push_back(y);
    }
  }
  Dataset test;
  const size_t per_class = spec.test_samples / spec.classes;
  for (uint32_t c = 0; c < spec.classes; ++c) {
    for (size_t s = 0; s < per_class; ++s) {
      test.x.push_back(draw(c));
      test.y.push_back(c);
    }
  }
  return FromData(spec.features, spec.classes, std::move(devices), std::move(test));
}

LogisticWorkload LogisticWorkload::FromData(size_t features, size_t classes, std::vector<Dataset> device_data,
                                            Dataset test) {
  auto check = [&](const Dataset& d) {
    if (d.x.size() != d.y.size()) throw VerfuError(ErrorCode::kLengthMismatch, "dataset x/y sizes differ");
    for (size_t i = 0; i < d.size(); ++i) {
      if (d.x[i].size() != features || d.y[i] >= classes) {
        throw VerfuError(ErrorCode::kInvalidArgument, "sample does not match the task shape");
      }
    }
  };
  for (const Dataset& d : device_data) check(d);
  check(test);
  LogisticWorkload w;
  w.features_ = features;
  w.classes_ = classes;
  w.devices_ = std::move(device_data);
  w.test_ = std::move(test);
  return w;
}

void LogisticWorkload::Logits(std::span<const double> w, const std::vector<double>& x,
                              std::vector<double>& out) const {
  const size_t stride = features_ + 1;
  out.assign(classes_, 0.0);
  for (size_t c = 0; c < classes_; ++c) {
    const double* row = w.data() + c * stride;
    double z = row[features_];
    for (size_t j = 0; j < features_; ++j) z += row[j] * x[j];
    out[c] = z;
  }
}

double LogisticWorkload::Loss(std::span<const double> w, const Dataset& data) const {
  if (w.size() != dim()) throw VerfuError(ErrorCode::kDimMismatch, "model has the wrong dimension");
  if (data.size() == 0) return 0;
  std::vector<double> z;
  double total = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    Logits(w, data.x[i], z);
    double m = *std::max_element(z.begin(), z.end());
    double s = 0;
    for (double v : z) s += std::exp(v - m);
    total += m + std::log(s) - z[data.y[i]];
  }
  return total / static_cast<double>(data.size());
}

std::vector<double> LogisticWorkload::LossGradient(std::span<const double> w, const Dataset& data) const {
  if (w.size() != dim()) throw VerfuError(ErrorCode::kDimMismatch, "model has the wrong dimension");
  const size_t stride = features_ + 1;
  std::vector<double> grad(dim(), 0.0);
  if (data.size() == 0) return grad;
  std::vector<double> z;
  for (size_t i = 0; i < data.size(); ++i) {
    Logits(w, data.x[i], z);
    double m = *std::max_element(z.begin(), z.end());
    double s = 0;
    for (double& v : z) s += (v = std::exp(v - m));
    for (size_t c = 0; c < classes_; ++c) {
      double coef = z[c] / s - (data.y[i] == c ? 1.0 : 0.0);
      double* row = grad.data() + c * stride;
      for (size_t j = 0; j < features_; ++j) row[j] += coef * data.x[i][j];
      row[features_] += coef;
    }
  }
  for (double& g : grad) g /= static_cast<double>(data.size());
  return grad;
}

std::vector<double> LogisticWorkload::LocalTrain(DeviceId device, uint32_t, std::span<const double> w,
                                                 const TrainingOptions& training) const {
  const Dataset& data = devices_.at(device);
  std::vector<double> local(w.begin(), w.end());
  for (uint32_t e = 0; e < training.epochs; ++e) {
    std::vector<double> g = LossGradient(local, data);
    for (size_t j = 0; j < local.size(); ++j) local[j] -= training.lr * g[j];
  }
  for (size_t j = 0; j < local.size(); ++j) local[j] -= w[j];
  return local;
}

std::optional<Evaluation> LogisticWorkload::Evaluate(std::span<const double> w) const {
  if (test_.size() == 0) return std::nullopt;
  std::vector<double> z;
  size_t correct = 0;
  for (size_t i = 0; i < test_.size(); ++i) {
    Logits(w, test_.x[i], z);
    // Ties resolve to the lowest class index.
    size_t best = std::max_element(z.begin(), z.end()) - z.begin();
    if (best == test_.y[i]) ++correct;
  }
  return Evaluation{static_cast<double>(correct) / static_cast<double>(test_.size()), Loss(w, test_)};
}

// ---------------------------------------------------------------------------
// Campaigns.

FixedPointSpec CampaignConfig::Codec() const {
  FixedPointSpec spec;
  spec.scale_bits = scale_bits;
  spec.bound = bound;
  spec.max_terms = uint64_t{cohort} * rounds;
  return spec;
}

uint32_t CampaignConfig::TotalUnlearners() const {
  return static_cast<uint32_t>(std::llround(unlearn_rate * devices));
}

void CampaignConfig::Validate() const {
  if (devices == 0) BadConfig("devices", "must be >= 1");
  if (rounds == 0) BadConfig("rounds", "must be >= 1");
  if (cohort == 0 || cohort > devices) BadConfig("cohort", "must be in [1, devices]");
  if (!(unlearn_rate >= 0 && unlearn_rate <= 1)) BadConfig("unlearn_rate", "must be in [0, 1]");
  if (cadence == 0) BadConfig("cadence", "must be >= 1");
  if (!(training.lr >= 0) || !std::isfinite(training.lr)) BadConfig("lr", "must be a finite value >= 0");
  if (scale_bits < 0 || scale_bits > 52) BadConfig("scale_bits", "must be in [0, 52]");
  if (!(bound > 0) || !std::isfinite(bound)) BadConfig("bound", "must be positive");
  const uint32_t total = TotalUnlearners();
  if (total > 0) {
    if (UnlearningEvents() == 0) BadConfig("cadence", "no unlearning event fits in the campaign");
    if (uint64_t{total} > uint64_t{UnlearningEvents()} * cohort) {
      BadConfig("unlearn_rate", "more unlearning requests than cohort slots at unlearning events");
    }
  }
  if (devices - total < cohort) BadConfig("cohort", "larger than the devices that never unlearn");
}

CampaignScheduler::CampaignScheduler(const CampaignConfig& config)
    : config_(config), rng_(Rng::Derive(config.seed, "schedule")) {
  config_.Validate();
  const uint32_t events = config_.UnlearningEvents();
  const uint32_t total = config_.TotalUnlearners();
  for (uint32_t k = 0; k < events; ++k) quotas_.push_back(total / events + (k < total % events ? 1 : 0));
}

bool CampaignScheduler::IsUnlearningEvent(uint32_t round) const {
  return round > 0 && round % config_.cadence == 0 && round / config_.cadence <= quotas_.size();
}

RoundPlan CampaignScheduler::Next(uint32_t round, std::span<const DeviceState> devices) {
  RoundPlan plan;
  plan.round = round;
  std::vector<DeviceId> unlearning;
  std::vector<bool> taken(devices.size(), false);

  if (IsUnlearningEvent(round)) {
    uint32_t want = quotas_[round / config_.cadence - 1] + carry_;
    std::vector<DeviceId> participated, fresh;
    for (const DeviceState& d : devices) {
      if (d.exited) continue;
      if (d.role == Role::kUnlearning) {
        if (unlearning.size() < config_.cohort) unlearning.push_back(d.id);  // retry
      } else {
        (d.selected_rounds.empty() ? fresh : participated).push_back(d.id);
      }
    }
    size_t take = std::min<size_t>(want, config_.cohort - unlearning.size());
    std::vector<DeviceId> chosen = Sample(participated, take, rng_);
    if (chosen.size() < take) {
      for (DeviceId id : Sample(fresh, take - chosen.size(), rng_)) chosen.push_back(id);
    }
    carry_ = want - static_cast<uint32_t>(chosen.size());
    unlearning.insert(unlearning.end(), chosen.begin(), chosen.end());
  }
  for (DeviceId id : unlearning) taken[id] = true;

  std::vector<DeviceId> pool;
  for (const DeviceState& d : devices) {
    if (!d.exited && d.role == Role::kNormal && !taken[d.id]) pool.push_back(d.id);
  }
  const size_t slots = config_.cohort - unlearning.size();
  if (pool.size() < slots) BadConfig("cohort", "not enough active devices to fill round " + std::to_string(round));
  std::vector<DeviceId> normals = Sample(std::move(pool), slots, rng_);

  std::sort(unlearning.begin(), unlearning.end());
  plan.unlearning = unlearning;
  plan.cohort = std::move(unlearning);
  plan.cohort.insert(plan.cohort.end(), normals.begin(), normals.end());
  std::sort(plan.cohort.begin(), plan.cohort.end());
  return plan;
}

OracleTrajectory RetrainOracle(const CampaignConfig& config, const Workload& workload) {
  config.Validate();
  const FixedPointSpec spec = config.Codec();
  const size_t d = workload.dim();
  const std::vector<double> w0 = workload.InitialModel();
  std::vector<DeviceState> devices(config.devices);
  for (DeviceId i = 0; i < config.devices; ++i) {
    devices[i].id = i;
    devices[i].cv = Zeros(d);
  }
  CampaignScheduler scheduler(config);
  OracleTrajectory out;
  EncodedVector sum = Zeros(d);
  for (uint32_t r = 1; r <= config.rounds; ++r) {
    RoundPlan plan = scheduler.Next(r, devices);
    for (DeviceId id : plan.unlearning) devices[id].role = Role::kUnlearning;
    EncodedVector a = Zeros(d);
    for (DeviceId id : plan.cohort) {
      DeviceState& dev = devices[id];
      dev.selected_rounds.push_back(r);
      if (dev.role == Role::kUnlearning) {
        a -= dev.cv;
      } else {
        EncodedVector v = Encode(workload.LocalTrain(id, r, w0, config.training), spec);
        a += v;
        dev.cv += v;
      }
    }
    for (DeviceId id : plan.unlearning) devices[id].exited = true;
    sum += a;
    out.model_sums.push_back(sum);

    EncodedVector retained = Zeros(d);
    for (const DeviceState& dev : devices) {
      if (!dev.exited) retained += dev.cv;
    }
    out.retained_sums.push_back(std::move(retained));
    out.plans.push_back(std::move(plan));
  }
  return out;
}

std::optional<Evaluation> Evaluate(std::span<const double> model, const Workload& workload) {
  return workload.Evaluate(model);
}

std::optional<size_t> RecoveryRounds(std::span<const double> acc, size_t unlearn_round, double tolerance) {
  if (unlearn_round == 0 || unlearn_round > acc.size()) return std::nullopt;
  const double target = acc[unlearn_round - 1] - tolerance;
  for (size_t idx = unlearn_round; idx < acc.size(); ++idx) {
    if (acc[idx] >= target) return idx - unlearn_round + 1;
  }
  return std::nullopt;
}

}  // namespace verfu
