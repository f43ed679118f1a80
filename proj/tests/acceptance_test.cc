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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "bcdp/audit.h"
#include "bcdp/calibration.h"
#include "bcdp/cli.h"
#include "bcdp/experiments.h"
#include "bcdp/finite_mechanism.h"
#include "bcdp/fixtures.h"
#include "bcdp/mechanisms.h"
#include "bcdp/random.h"
#include "bcdp/regression.h"

namespace bcdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict Pass(std::string detail) { return {true, std::move(detail)}; }
Verdict Fail(std::string detail) { return {false, std::move(detail)}; }

FiniteMechanism RandomMechanism(const ProductDomain& domain, int outputs,
                                std::mt19937_64& rng, double zero_rate) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> kernel(domain.num_points() * outputs);
  for (std::size_t x = 0; x < domain.num_points(); ++x) {
    double total = 0.0;
    for (int y = 0; y < outputs; ++y) {
      double p = unif(rng) < zero_rate ? 0.0 : unif(rng);
      if (y == 0 && p == 0.0) p = 0.1;
      kernel[x * outputs + y] = p;
      total += p;
    }
    for (int y = 0; y < outputs; ++y) kernel[x * outputs + y] /= total;
  }
  return *FiniteMechanism::Create(domain, outputs, std::move(kernel));
}

DiscretePrior RandomPrior(const ProductDomain& domain, std::mt19937_64& rng,
                          double zero_rate) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> pmf(domain.num_points());
  double total = 0.0;
  for (double& p : pmf) {
    p = unif(rng) < zero_rate ? 0.0 : unif(rng);
    total += p;
  }
  if (total == 0.0) {
    pmf[0] = 1.0;
    total = 1.0;
  }
  for (double& p : pmf) p /= total;
  return *DiscretePrior::Create(domain, std::move(pmf));
}

ProductDomain RandomDomain(std::mt19937_64& rng, int max_d, int max_size) {
  std::uniform_int_distribution<int> dim(1, max_d);
  std::uniform_int_distribution<int> size(2, max_size);
  std::vector<int> sizes(dim(rng));
  for (int& s : sizes) s = size(rng);
  return ProductDomain(sizes);
}

// --- 1 ---------------------------------------------------------------------
Verdict TableMechanismAudit() {
  absl::StatusOr<FiniteMechanism> m = TableMechanism(0.5, 0.5, 0.5);
  absl::StatusOr<DiscretePrior> prior = IndependentBernoulliPrior(2);
  if (!m.ok() || !prior.ok()) return Fail("fixture construction failed");
  absl::StatusOr<AuditReport> r = Audit(*m, *prior);
  if (!r.ok()) return Fail(std::string(r.status().message()));
  const double err = std::max(std::abs(r->bcdp_levels[0] - std::log(2.0)),
                              std::abs(r->bcdp_levels[1] - std::log(2.0)));
  const std::string detail = absl::StrFormat(
      "bcdp=(%.12f, %.12f) ldp=%g max_err=%.2e", r->bcdp_levels[0],
      r->bcdp_levels[1], r->ldp_level, err);
  return (err <= 1e-9 && r->ldp_level == kInf) ? Pass(detail) : Fail(detail);
}

// --- 2 ---------------------------------------------------------------------
Verdict XorComposition() {
  const FiniteMechanism m = XorMechanism();
  absl::StatusOr<DiscretePrior> prior = IndependentBernoulliPrior(3);
  absl::StatusOr<FiniteMechanism> twice = ComposeProduct(m, m);
  if (!prior.ok() || !twice.ok()) return Fail("fixture construction failed");
  absl::StatusOr<std::vector<double>> once = ExactBcdpLevels(m, *prior);
  absl::StatusOr<std::vector<double>> both = ExactBcdpLevels(*twice, *prior);
  if (!once.ok() || !both.ok()) return Fail("audit failed");
  const std::string detail =
      absl::StrFormat("single=%.3g composed=%g", (*once)[0], (*both)[0]);
  return (std::abs((*once)[0]) <= 1e-12 && (*both)[0] == kInf) ? Pass(detail)
                                                                 : Fail(detail);
}

// --- 3 ---------------------------------------------------------------------
Verdict SoundnessSweep() {
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<int> dim(1, 4), size(2, 3);
  std::uniform_real_distribution<double> alpha(0.05, 3.0);
  int violations = 0, refined_violations = 0, finite_levels = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<FiniteMechanism> factors;
    std::vector<int> sizes(dim(rng));
    for (int& s : sizes) {
      s = size(rng);
      factors.push_back(*RandomizedResponseKernel(s, alpha(rng)));
    }
    absl::StatusOr<FiniteMechanism> m = TensorProduct(factors);
    if (!m.ok()) return Fail(std::string(m.status().message()));
    const DiscretePrior prior = RandomPrior(ProductDomain(sizes), rng, 0.1);
    absl::StatusOr<AuditReport> r = Audit(*m, prior);
    if (!r.ok()) return Fail(std::string(r.status().message()));
    absl::StatusOr<std::vector<double>> bound =
        CdpToBcdpBound(r->cdp_levels, r->tv_bounds);
    absl::StatusOr<std::vector<double>> refined =
        CdpToBcdpBound(r->cdp_levels, r->tv_bounds, r->ldp_level);
    if (!bound.ok() || !refined.ok()) return Fail("bound evaluation failed");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      finite_levels += std::isfinite(r->bcdp_levels[i]);
      if (r->bcdp_levels[i] > (*bound)[i] + 1e-9) ++violations;
      if (r->bcdp_levels[i] > (*refined)[i] + 1e-9) ++refined_violations;
    }
  }
  const std::string detail =
      absl::StrFormat("violations=%d refined_violations=%d finite_levels=%d",
                      violations, refined_violations, finite_levels);
  return (violations == 0 && refined_violations == 0) ? Pass(detail) : Fail(detail);
}

// --- 4 ---------------------------------------------------------------------
Verdict LinearRelaxation() {
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int violations = 0, unit_q = 0;
  double worst = -kInf;
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = dim(rng);
    std::vector<double> delta(d), q(d), c(d);
    for (int i = 0; i < d; ++i) {
      delta[i] = 0.01 + 4.0 * unif(rng);
      // q must lie in (0, 1]; include the fully correlated end.
      q[i] = unif(rng) < 0.1 ? 1.0 : 1.0 - unif(rng);
      unit_q += q[i] == 1.0;
      c[i] = unif(rng);
    }
    absl::StatusOr<FeasibilityMatrix> a = FeasibilityMatrix::Create(delta, q);
    if (!a.ok()) return Fail(std::string(a.status().message()));
    const std::vector<double> ac = a->Apply(c);
    const double scale = unif(rng) / *std::max_element(ac.begin(), ac.end());
    for (double& v : c) v *= scale;
    if (!a->IsFeasible(c)) return Fail("scaled budget not feasible");
    absl::StatusOr<std::vector<double>> implied = CdpToBcdpBound(c, q);
    if (!implied.ok()) return Fail(std::string(implied.status().message()));
    for (int i = 0; i < d; ++i) {
      const double excess = (*implied)[i] - delta[i];
      worst = std::max(worst, excess);
      if (excess > 1e-12) ++violations;
    }
  }
  const std::string detail = absl::StrFormat(
      "violations=%d worst_excess=%.3e q1_coords=%d", violations, worst, unit_q);
  return violations == 0 ? Pass(detail) : Fail(detail);
}

// --- 5 ---------------------------------------------------------------------
Verdict BallChannelStatistics() {
  constexpr int d = 5;
  constexpr int kSamples = 1000000;
  const double radius = std::sqrt(5.0);
  std::mt19937_64 rng(5005);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int bad_mean = 0, bad_norm = 0;
  double worst_z = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> v(d);
    double norm = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    const double target = radius * std::pow(unif(rng), 1.0 / d);
    for (double& x : v) x *= target / norm;
    for (double alpha : {0.2, 1.0, 3.0}) {
      const LdpChannelSpec spec{.alpha = alpha, .dim = d, .radius = radius};
      const double b = *BallChannelBound(spec);
      Rng sample_rng = MakeStream(5005, {static_cast<std::uint64_t>(k),
                                         static_cast<std::uint64_t>(alpha * 10)});
      std::vector<double> sum(d, 0.0);
      for (int s = 0; s < kSamples; ++s) {
        absl::StatusOr<std::vector<double>> z = BallChannelSample(v, spec, sample_rng);
        if (!z.ok()) return Fail(std::string(z.status().message()));
        double sq = 0.0;
        for (int j = 0; j < d; ++j) {
          sum[j] += (*z)[j];
          sq += (*z)[j] * (*z)[j];
        }
        if (std::abs(std::sqrt(sq) - b) > 1e-9 * b) ++bad_norm;
      }
      const double tol = 4.0 * b / std::sqrt(double{kSamples});
      for (int j = 0; j < d; ++j) {
        const double dev = std::abs(sum[j] / kSamples - v[j]);
        worst_z = std::max(worst_z, dev / tol);
        if (dev > tol) ++bad_mean;
      }
    }
  }
  const std::string detail =
      absl::StrFormat("mean_violations=%d norm_violations=%d worst_dev/tol=%.3f",
                      bad_mean, bad_norm, worst_z);
  return (bad_mean == 0 && bad_norm == 0) ? Pass(detail) : Fail(detail);
}

// Shared random pairs for criteria 6 and 7.
struct AuditedPair {
  FiniteMechanism mechanism;
  DiscretePrior prior;
  AuditReport report;
};

std::vector<AuditedPair> RandomAuditedPairs() {
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<int> outputs(2, 4);
  std::vector<AuditedPair> pairs;
  for (int trial = 0; trial < 1000; ++trial) {
    const ProductDomain domain = RandomDomain(rng, 3, 3);
    FiniteMechanism m = RandomMechanism(domain, outputs(rng), rng, 0.1);
    DiscretePrior prior = RandomPrior(domain, rng, 0.1);
    absl::StatusOr<AuditReport> r = Audit(m, prior);
    if (!r.ok()) continue;
    pairs.push_back({std::move(m), std::move(prior), *std::move(r)});
  }
  return pairs;
}

bool NotAbove(double lhs, double rhs) {
  return lhs <= rhs || lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

// --- 6 ---------------------------------------------------------------------
Verdict OrderingInvariant(const std::vector<AuditedPair>& pairs) {
  if (pairs.size() != 1000) return Fail("audit failed on some random pair");
  std::mt19937_64 rng(6007);
  int order_violations = 0, post_violations = 0;
  for (const AuditedPair& p : pairs) {
    const AuditReport& r = p.report;
    if (!NotAbove(r.bdp_level, r.ldp_level)) ++order_violations;
    for (double b : r.bcdp_levels) order_violations += !NotAbove(b, r.bdp_level);

    std::uniform_int_distribution<int> width(1, p.mechanism.num_outputs());
    const int m = width(rng);
    std::uniform_int_distribution<int> target(0, m - 1);
    std::vector<int> map(p.mechanism.num_outputs());
    for (int& t : map) t = target(rng);
    absl::StatusOr<FiniteMechanism> post = Postprocess(p.mechanism, map, m);
    if (!post.ok()) return Fail(std::string(post.status().message()));
    absl::StatusOr<AuditReport> after = Audit(*post, p.prior);
    if (!after.ok()) return Fail(std::string(after.status().message()));
    post_violations += !NotAbove(after->ldp_level, r.ldp_level);
    post_violations += !NotAbove(after->bdp_level, r.bdp_level);
    for (std::size_t i = 0; i < r.bcdp_levels.size(); ++i) {
      post_violations += !NotAbove(after->bcdp_levels[i], r.bcdp_levels[i]);
      post_violations += !NotAbove(after->cdp_levels[i], r.cdp_levels[i]);
    }
  }
  const std::string detail = absl::StrFormat(
      "pairs=%d order_violations=%d postprocess_violations=%d", pairs.size(),
      order_violations, post_violations);
  return (order_violations == 0 && post_violations == 0) ? Pass(detail) : Fail(detail);
}

// --- 7 ---------------------------------------------------------------------
Verdict HtTightness(const std::vector<AuditedPair>& pairs) {
  if (pairs.size() != 1000) return Fail("audit failed on some random pair");
  int fail_at_level = 0, missed_tightness = 0, probes = 0;
  for (const AuditedPair& p : pairs) {
    const std::vector<double>& levels = p.report.bcdp_levels;
    absl::StatusOr<HtCheckResult> at = HtTradeoffCheck(p.mechanism, p.prior, levels);
    if (!at.ok()) return Fail(std::string(at.status().message()));
    fail_at_level += !at->holds;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      // Infinite levels cannot be lowered; levels below 1e-6 would go negative.
      if (!std::isfinite(levels[i]) || levels[i] < 1e-6) continue;
      std::vector<double> lowered = levels;
      lowered[i] -= 1e-6;
      absl::StatusOr<HtCheckResult> below =
          HtTradeoffCheck(p.mechanism, p.prior, lowered);
      if (!below.ok()) return Fail(std::string(below.status().message()));
      ++probes;
      missed_tightness += below->holds;
    }
  }
  const std::string detail =
      absl::StrFormat("fails_at_level=%d probes=%d still_holding_when_lowered=%d",
                      fail_at_level, probes, missed_tightness);
  return (fail_at_level == 0 && missed_tightness == 0 && probes > 0) ? Pass(detail)
                                                                     : Fail(detail);
}

// --- 8 ---------------------------------------------------------------------
Verdict CalibrationAlgebra() {
  std::mt19937_64 rng(8008);
  std::uniform_int_distribution<int> dim(1, 12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int monotone = 0, cap = 0, slack = 0;
  double worst_slack = -kInf;
  for (int trial = 0; trial < 100000; ++trial) {
    const int d = dim(rng);
    PrivacyDemand demand;
    demand.epsilon = 0.01 + 5.0 * unif(rng);
    demand.delta.resize(d);
    for (double& v : demand.delta) v = unif(rng) < 0.05 ? 0.0 : 6.0 * unif(rng);
    const double u = unif(rng);
    demand.q = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : unif(rng));
    demand.zeta = unif(rng);
    absl::StatusOr<CoordinateBudget> b = CalibrateBudgets(demand);
    if (!b.ok()) return Fail(std::string(b.status().message()));
    const std::vector<double>& c = b->internal();
    for (int i = 1; i < d; ++i) monotone += c[i] < c[i - 1];
    const double top = std::min(
        demand.epsilon, *std::max_element(demand.delta.begin(), demand.delta.end()));
    cap += c.back() > top;
    const double v = CalibrationSlackViolation(demand, *b);
    worst_slack = std::max(worst_slack, v);
    slack += v > 1e-12;
  }
  bool uniform_ok = true;
  for (double eps : {0.1, 1.0, 2.0, 7.5}) {
    for (int d : {1, 4, 10}) {
      absl::StatusOr<CoordinateBudget> b = CalibrateBudgets(
          {.epsilon = eps, .delta = std::vector<double>(d, eps), .q = 0.3, .zeta = 1.0});
      if (!b.ok()) return Fail(std::string(b.status().message()));
      for (double c : b->internal()) uniform_ok &= c == eps;
    }
  }
  const std::string detail = absl::StrFormat(
      "monotone_violations=%d cap_violations=%d slack_violations=%d worst=%.3e "
      "uniform_exact=%s",
      monotone, cap, slack, worst_slack, uniform_ok ? "yes" : "no");
  return (monotone == 0 && cap == 0 && slack == 0 && uniform_ok) ? Pass(detail)
                                                                 : Fail(detail);
}

// --- 9 ---------------------------------------------------------------------
Verdict MeanExperiment() {
  MeanExperimentConfig config;  // d=10, n=2000, 200 trials, default q grid
  config.seed = 20261019;
  absl::StatusOr<ExperimentResult> r = RunMeanExperiment(config);
  if (!r.ok()) return Fail(std::string(r.status().message()));
  std::vector<double> bcdp, baseline;
  for (const TrialSummary& s : r->summary) {
    (s.mechanism == kBcdpTag ? bcdp : baseline).push_back(s.median);
  }
  if (bcdp.size() != config.q_grid.size()) return Fail("unexpected summary shape");
  const double factor = baseline[0] / bcdp[0];
  bool monotone = true;
  for (std::size_t k = 1; k < bcdp.size(); ++k) monotone &= bcdp[k] >= 0.9 * bcdp[k - 1];
  std::string medians;
  for (std::size_t k = 0; k < bcdp.size(); ++k) {
    absl::StrAppendFormat(&medians, "%s%.4g", k ? "," : "", bcdp[k]);
  }
  const std::string detail = absl::StrFormat(
      "q0: bcdp=%.4g baseline=%.4g factor=%.2f; bcdp medians over q=[%s]", bcdp[0],
      baseline[0], factor, medians);
  return (factor >= 2.0 && monotone) ? Pass(detail) : Fail(detail);
}

// --- 10 --------------------------------------------------------------------
Verdict OlsScaling() {
  OlsExperimentConfig config;  // d=5, n in {500, 2000, 5000}, 50 trials
  config.seed = 20261019;
  config.identity_debug = true;
  absl::StatusOr<ExperimentResult> r = RunOlsExperiment(config);
  if (!r.ok()) return Fail(std::string(r.status().message()));
  std::vector<double> medians;
  for (const TrialSummary& s : r->summary) {
    if (s.mechanism == kBcdpTag) medians.push_back(s.median);
  }
  bool decreasing = medians.size() == config.n_grid.size();
  for (std::size_t k = 1; k < medians.size(); ++k) decreasing &= medians[k] < medians[k - 1];
  int identity_bad = 0;
  double identity_worst = -kInf;
  for (const TrialRecord& t : r->records) {
    if (t.mechanism != kIdentityTag) continue;
    identity_worst = std::max(identity_worst, t.value * t.key);
    identity_bad += t.value > 1.0 / t.key + 1e-6;
  }
  const std::string detail = absl::StrFormat(
      "private medians=[%.4g,%.4g,%.4g] identity_violations=%d max(n*excess)=%.3g",
      medians.size() > 0 ? medians[0] : NAN, medians.size() > 1 ? medians[1] : NAN,
      medians.size() > 2 ? medians[2] : NAN, identity_bad, identity_worst);
  return (decreasing && identity_bad == 0) ? Pass(detail) : Fail(detail);
}

// --- 11 --------------------------------------------------------------------
Verdict SurrogateGradientUnbiased() {
  constexpr int kRedraws = 100000;
  constexpr int kUsers = 8;
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  RegressionDataset data{Eigen::MatrixXd(kUsers, 4), Eigen::VectorXd(kUsers)};
  for (int i = 0; i < kUsers; ++i) {
    for (int j = 0; j < 4; ++j) data.features(i, j) = unif(rng);
    data.labels[i] = unif(rng);
  }
  const Eigen::VectorXd theta = Eigen::Vector4d(0.5, -0.3, 0.2, -0.1);
  const Eigen::VectorXd truth = SurrogateGradient(ExactObjective(data), theta);
  absl::StatusOr<CoordinateBudget> budget = CalibrateBudgets(
      {.epsilon = 2.0, .delta = {0.5, 0.5, 2, 2, 2}, .q = 0.0, .zeta = 0.5});
  if (!budget.ok()) return Fail(std::string(budget.status().message()));
  const BallChannel channel;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(4), sum_sq = Eigen::VectorXd::Zero(4);
  for (int r = 0; r < kRedraws; ++r) {
    absl::StatusOr<PrivatizedPairs> pairs =
        PrivatizePairs(data, *budget, channel, DeriveSeed(1111, {static_cast<std::uint64_t>(r)}));
    if (!pairs.ok()) return Fail(std::string(pairs.status().message()));
    const Eigen::VectorXd g = SurrogateGradient(*BuildSurrogate(*pairs), theta);
    sum += g;
    sum_sq += g.cwiseProduct(g);
  }
  const Eigen::VectorXd mean = sum / kRedraws;
  const Eigen::VectorXd var = sum_sq / kRedraws - mean.cwiseProduct(mean);
  double worst = 0.0;
  for (int j = 0; j < 4; ++j) {
    worst = std::max(worst, std::abs(mean[j] - truth[j]) / std::sqrt(var[j] / kRedraws));
  }
  const std::string detail = absl::StrFormat("max |mean - grad| / se = %.3f", worst);
  return worst <= 4.0 ? Pass(detail) : Fail(detail);
}

// --- 12 --------------------------------------------------------------------
std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int RunCli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"bcdp"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return CliEntry(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict Determinism() {
  const std::filesystem::path root =
      std::filesystem::temp_directory_path() / "bcdp_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::vector<std::vector<std::string>> commands = {
      {"mean-sim", "--seed", "12", "--d", "10", "--n", "500", "--trials", "20"},
      {"ols-sim", "--seed", "12", "--n", "200,800", "--trials", "5", "--identity"}};
  int mismatches = 0;
  std::size_t bytes = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string files[2][2];
    for (int run = 0; run < 2; ++run) {
      const std::filesystem::path dir = root / absl::StrFormat("cmd%d_run%d", c, run);
      std::vector<std::string> args = commands[c];
      args.insert(args.end(), {"--out", dir.string(), "--threads", run ? "3" : "1"});
      if (RunCli(args) != kExitOk) return Fail(absl::StrFormat("%s exited non-zero", args[0]));
      files[run][0] = Slurp(dir / "raw.csv");
      files[run][1] = Slurp(dir / "summary.csv");
    }
    for (int f = 0; f < 2; ++f) {
      mismatches += files[0][f] != files[1][f];
      bytes += files[0][f].size();
    }
  }
  std::filesystem::remove_all(root);
  const std::string detail =
      absl::StrFormat("mismatched_files=%d compared_bytes=%d", mismatches, bytes);
  return (mismatches == 0 && bytes > 0) ? Pass(detail) : Fail(detail);
}

}  // namespace
}  // namespace bcdp

int main() {
  using Clock = std::chrono::steady_clock;
  int failures = 0;
  auto run = [&](int id, double budget_seconds, const std::function<bcdp::Verdict()>& f) {
    const auto start = Clock::now();
    bcdp::Verdict v = f();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = secs < budget_seconds;
    const bool ok = v.pass && in_time;
    failures += !ok;
    std::printf("AC%-2d %s  %s  [%.2fs / %.0fs%s]\n", id, ok ? "PASS" : "FAIL",
                v.detail.c_str(), secs, budget_seconds, in_time ? "" : " OVERRUN");
    std::fflush(stdout);
  };
  run(1, 1, bcdp::TableMechanismAudit);
  run(2, 1, bcdp::XorComposition);
  run(3, 30, bcdp::SoundnessSweep);
  run(4, 10, bcdp::LinearRelaxation);
  run(5, 120, bcdp::BallChannelStatistics);
  std::vector<bcdp::AuditedPair> pairs;
  const auto start = Clock::now();
  pairs = bcdp::RandomAuditedPairs();
  const double audit_secs = std::chrono::duration<double>(Clock::now() - start).count();
  // The shared audits count against both criteria that use them.
  run(6, 30 - audit_secs, [&] { return bcdp::OrderingInvariant(pairs); });
  run(7, 30 - audit_secs, [&] { return bcdp::HtTightness(pairs); });
  run(8, 10, bcdp::CalibrationAlgebra);
  run(9, 600, bcdp::MeanExperiment);
  run(10, 600, bcdp::OlsScaling);
  run(11, 120, bcdp::SurrogateGradientUnbiased);
  run(12, 600, bcdp::Determinism);
  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
