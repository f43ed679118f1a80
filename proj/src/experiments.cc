// Copyright 2026 The BCDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bcdp/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>

#include <Eigen/Dense>

#include "absl/strings/str_format.h"
#include "bcdp/calibration.h"
#include "bcdp/mean_estimation.h"
#include "bcdp/mechanisms.h"
#include "bcdp/priors.h"
#include "bcdp/random.h"
#include "bcdp/regression.h"

namespace bcdp {

namespace {

// Runs task(0..count-1) on a pool and returns the error of the lowest failing
// index, so the reported failure does not depend on scheduling.
absl::Status ParallelFor(std::size_t count, int threads,
                         const std::function<absl::Status(std::size_t)>& task) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  absl::Status failure;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      absl::Status s = task(i);
      if (!s.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::move(s);
        }
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  return failure;
}

absl::Status ValidateZeta(const ZetaPolicy& zeta) {
  if (!zeta.heuristic && !(zeta.value >= 0.0 && zeta.value <= 1.0)) {
    return absl::InvalidArgumentError("zeta must lie in [0, 1]");
  }
  return absl::OkStatus();
}

absl::Status ValidateCommon(int trials, int threads, const ZetaPolicy& zeta) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (threads < 0) return absl::InvalidArgumentError("threads must be >= 0");
  return ValidateZeta(zeta);
}

double SquaredError(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

double ZetaPolicy::For(double q) const {
  return heuristic ? HeuristicZeta(q) : value;
}

absl::Status ValidateMeanConfig(const MeanExperimentConfig& config) {
  if (config.d < 1) return absl::InvalidArgumentError("d must be >= 1");
  if (config.n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (absl::Status s = ValidateCommon(config.trials, config.threads, config.zeta);
      !s.ok()) {
    return s;
  }
  if (config.delta.size() != static_cast<std::size_t>(config.d)) {
    return absl::InvalidArgumentError("delta must have d entries");
  }
  if (config.q_grid.empty()) return absl::InvalidArgumentError("empty q grid");
  for (double q : config.q_grid) {
    if (absl::Status s = ValidateCorrelatedBernoulli(config.d, q); !s.ok()) {
      return s;
    }
    PrivacyDemand demand{config.epsilon, config.delta, q, config.zeta.For(q)};
    if (absl::Status s = ValidateDemand(demand); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status ValidateOlsConfig(const OlsExperimentConfig& config) {
  if (config.d < 2) {
    return absl::InvalidArgumentError("d must be >= 2 (features plus label)");
  }
  if (absl::Status s = ValidateCommon(config.trials, config.threads, config.zeta);
      !s.ok()) {
    return s;
  }
  if (config.n_grid.empty()) return absl::InvalidArgumentError("empty n grid");
  for (int n : config.n_grid) {
    if (n < 1) return absl::InvalidArgumentError("every n must be >= 1");
  }
  if (config.delta.size() != static_cast<std::size_t>(config.d)) {
    return absl::InvalidArgumentError("delta must have d entries");
  }
  if (absl::Status s = ValidateCorrelatedBernoulli(config.d - 1, config.q);
      !s.ok()) {
    return s;
  }
  PrivacyDemand demand{config.epsilon, config.delta, config.q,
                       config.zeta.For(config.q)};
  if (absl::Status s = ValidateDemand(demand); !s.ok()) return s;
  if (config.theta_star.has_value()) {
    if (config.theta_star->size() != static_cast<std::size_t>(config.d - 1)) {
      return absl::InvalidArgumentError("theta_star must have d - 1 entries");
    }
    for (double v : *config.theta_star) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("theta_star must be finite");
      }
    }
  }
  return absl::OkStatus();
}

std::vector<double> DefaultThetaStar(int d) {
  std::vector<double> theta(std::max(d - 1, 0));
  for (std::size_t j = 0; j < theta.size(); ++j) {
    theta[j] = (j % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(d - 1);
  }
  return theta;
}

double Quantile(std::span<const double> values, double p) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

std::vector<TrialSummary> Summarize(std::span<const TrialRecord> records) {
  std::vector<TrialSummary> out;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    std::vector<double> values;
    while (end < records.size() && records[end].key == records[begin].key &&
           records[end].mechanism == records[begin].mechanism) {
      values.push_back(records[end].value);
      ++end;
    }
    out.push_back(TrialSummary{.key = records[begin].key,
                               .mechanism = records[begin].mechanism,
                               .median = Quantile(values, 0.5),
                               .p25 = Quantile(values, 0.25),
                               .p75 = Quantile(values, 0.75)});
    begin = end;
  }
  return out;
}

absl::StatusOr<ExperimentResult> RunMeanExperiment(
    const MeanExperimentConfig& config) {
  if (absl::Status s = ValidateMeanConfig(config); !s.ok()) return s;
  const std::size_t d = config.d;
  const std::size_t num_q = config.q_grid.size();
  const std::size_t trials = config.trials;

  std::vector<CoordinateBudget> budgets;
  for (double q : config.q_grid) {
    absl::StatusOr<CoordinateBudget> b = CalibrateBudgets(
        PrivacyDemand{config.epsilon, config.delta, q, config.zeta.For(q)});
    if (!b.ok()) return b.status();
    budgets.push_back(*std::move(b));
  }
  double baseline_alpha = config.epsilon;
  for (double v : config.delta) baseline_alpha = std::min(baseline_alpha, v);
  const LdpChannelSpec baseline{.alpha = baseline_alpha,
                                .dim = config.d,
                                .radius = std::sqrt(static_cast<double>(d))};
  const BallChannel channel;

  auto draw_users = [&](std::size_t g, Rng& rng) {
    const double data_q = config.iid_data ? 0.0 : config.q_grid[g];
    std::vector<std::vector<double>> users(config.n);
    for (auto& x : users) x = SampleCorrelatedSigns(config.d, data_q, rng);
    return users;
  };
  std::vector<std::vector<std::vector<double>>> shared_users(num_q);
  if (!config.redraw_data) {
    for (std::uint64_t g = 0; g < num_q; ++g) {
      Rng rng = MakeStream(config.seed, {g, kDataStream});
      shared_users[g] = draw_users(g, rng);
    }
  }

  std::vector<double> bcdp_mse(num_q * trials);
  std::vector<double> baseline_mse(num_q * trials);
  absl::Status status = ParallelFor(
      num_q * trials, config.threads, [&](std::size_t task) -> absl::Status {
        const std::uint64_t g = task / trials;
        const std::uint64_t t = task % trials;
        std::vector<std::vector<double>> own_users;
        if (config.redraw_data) {
          Rng rng = MakeStream(config.seed, {g, t, kDataStream});
          own_users = draw_users(g, rng);
        }
        const std::vector<std::vector<double>>& users =
            config.redraw_data ? own_users : shared_users[g];
        std::vector<double> mean(d, 0.0);
        for (const auto& x : users) {
          for (std::size_t i = 0; i < d; ++i) mean[i] += x[i];
        }
        for (double& m : mean) m /= config.n;

        MeanAccumulator acc(d);
        std::vector<double> base_sum(d, 0.0);
        for (std::uint64_t u = 0; u < users.size(); ++u) {
          Rng rng = MakeStream(config.seed, {g, t, kMechanismStream, u});
          absl::StatusOr<LayeredReport> r =
              MMeanSample(users[u], budgets[g], channel, rng);
          if (!r.ok()) return r.status();
          if (absl::Status s = acc.Add(*r); !s.ok()) return s;

          Rng base_rng = MakeStream(config.seed, {g, t, kMechanismStream + 1, u});
          absl::StatusOr<std::vector<double>> y =
              BallChannelSample(users[u], baseline, base_rng);
          if (!y.ok()) return y.status();
          for (std::size_t i = 0; i < d; ++i) base_sum[i] += (*y)[i];
        }
        absl::StatusOr<EstimateVector> est = acc.Finish();
        if (!est.ok()) return est.status();
        for (double& v : base_sum) v /= config.n;
        bcdp_mse[task] = SquaredError(est->mean_hat, mean);
        baseline_mse[task] = SquaredError(ProjectToBox(base_sum), mean);
        return absl::OkStatus();
      });
  if (!status.ok()) return status;

  ExperimentResult result;
  for (std::size_t g = 0; g < num_q; ++g) {
    for (const auto& [tag, mse] :
         {std::pair{kBcdpTag, &bcdp_mse}, std::pair{kBaselineTag, &baseline_mse}}) {
      for (std::size_t t = 0; t < trials; ++t) {
        result.records.push_back(TrialRecord{.key = config.q_grid[g],
                                             .mechanism = tag,
                                             .trial = static_cast<int>(t),
                                             .value = (*mse)[g * trials + t]});
      }
    }
  }
  result.summary = Summarize(result.records);
  return result;
}

absl::StatusOr<ExperimentResult> RunOlsExperiment(
    const OlsExperimentConfig& config) {
  if (absl::Status s = ValidateOlsConfig(config); !s.ok()) return s;
  const int p = config.d - 1;
  const std::vector<double> theta_vec =
      config.theta_star.value_or(DefaultThetaStar(config.d));
  const Eigen::Map<const Eigen::VectorXd> theta_star(theta_vec.data(), p);
  const PrivacyDemand demand{config.epsilon, config.delta, config.q,
                             config.zeta.For(config.q)};
  const FeasibleSet feasible = DefaultFeasibleSet(p);
  const BallChannel ball;
  const IdentityChannel identity;
  const std::size_t num_n = config.n_grid.size();
  const std::size_t trials = config.trials;

  std::vector<double> private_excess(num_n * trials);
  std::vector<double> identity_excess(num_n * trials);
  absl::Status status = ParallelFor(
      num_n * trials, config.threads, [&](std::size_t task) -> absl::Status {
        const std::uint64_t g = task / trials;
        const std::uint64_t t = task % trials;
        const int n = config.n_grid[g];
        Rng data_rng = MakeStream(config.seed, {g, t, kDataStream});
        RegressionDataset data{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
        for (int i = 0; i < n; ++i) {
          const std::vector<double> z = SampleCorrelatedSigns(p, config.q, data_rng);
          for (int j = 0; j < p; ++j) data.features(i, j) = z[j];
          data.labels[i] =
              std::clamp(data.features.row(i).dot(theta_star), -1.0, 1.0);
        }
        absl::StatusOr<OlsResult> r = RunPrivateOls(
            data, demand, feasible, ball,
            DeriveSeed(config.seed, {g, t, kMechanismStream}), true);
        if (!r.ok()) return r.status();
        private_excess[task] = *r->diagnostics.excess_risk;
        if (config.identity_debug) {
          absl::StatusOr<OlsResult> id = RunPrivateOls(
              data, demand, feasible, identity,
              DeriveSeed(config.seed, {g, t, kMechanismStream + 1}), true);
          if (!id.ok()) return id.status();
          identity_excess[task] = *id->diagnostics.excess_risk;
        }
        return absl::OkStatus();
      });
  if (!status.ok()) return status;

  ExperimentResult result;
  for (std::size_t g = 0; g < num_n; ++g) {
    auto emit = [&](const char* tag, const std::vector<double>& values) {
      for (std::size_t t = 0; t < trials; ++t) {
        result.records.push_back(TrialRecord{.key = double(config.n_grid[g]),
                                             .mechanism = tag,
                                             .trial = static_cast<int>(t),
                                             .value = values[g * trials + t]});
      }
    };
    emit(kBcdpTag, private_excess);
    if (config.identity_debug) emit(kIdentityTag, identity_excess);
  }
  result.summary = Summarize(result.records);
  return result;
}

std::string FormatRawCsv(std::span<const TrialRecord> records,
                         const std::string& key_name,
                         const std::string& value_name) {
  std::string out = absl::StrFormat("%s,mechanism,trial,%s\n", key_name, value_name);
  for (const TrialRecord& r : records) {
    absl::StrAppendFormat(&out, "%.15g,%s,%d,%.17g\n", r.key, r.mechanism,
                          r.trial, r.value);
  }
  return out;
}

std::string FormatSummaryCsv(std::span<const TrialSummary> summary,
                             const std::string& key_name) {
  std::string out = absl::StrFormat("%s,mechanism,median,p25,p75\n", key_name);
  for (const TrialSummary& s : summary) {
    absl::StrAppendFormat(&out, "%.15g,%s,%.17g,%.17g,%.17g\n", s.key,
                          s.mechanism, s.median, s.p25, s.p75);
  }
  return out;
}

}  // namespace bcdp
