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

#include "bcdp/regression.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "bcdp/mean_estimation.h"
#include "bcdp/random.h"

namespace bcdp {

namespace {

constexpr int kPowerIterations = 200;
constexpr double kLipschitzMargin = 1.1;

// Spectral norm of a symmetric matrix by power iteration.
double PowerIterationNorm(const Eigen::MatrixXd& sym) {
  const Eigen::Index p = sym.rows();
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v[i] = 1.0 + 1.0 / (i + 2.0);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXd w = sym * v;
    const double norm = w.norm();
    if (norm == 0.0) return estimate;
    estimate = norm;
    v = w / norm;
  }
  return estimate;
}

double FrankWolfeGap(const Eigen::VectorXd& grad, const Eigen::VectorXd& theta,
                     double radius) {
  return grad.dot(theta) + radius * grad.norm();
}

// Minimiser of 1/2 t'At - b't over |t| <= R for symmetric PSD A, via the
// eigendecomposition and bisection on the multiplier.
Eigen::VectorXd SolveBallQp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            double radius) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd proj = eig.eigenvectors().transpose() * b;
  const double tiny = 1e-14 * std::max(1.0, lambda.maxCoeff());

  auto solution = [&](double mu) {
    Eigen::VectorXd coef(proj.size());
    for (Eigen::Index i = 0; i < proj.size(); ++i) {
      const double denom = lambda[i] + mu;
      coef[i] = denom > tiny ? proj[i] / denom : 0.0;
    }
    return Eigen::VectorXd(eig.eigenvectors() * coef);
  };

  Eigen::VectorXd t = solution(0.0);  // minimum-norm unconstrained minimiser
  if (t.norm() <= radius) return t;
  double lo = 0.0;
  double hi = std::max(1.0, proj.norm() / radius);
  while (solution(hi).norm() > radius) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (solution(mid).norm() > radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return solution(hi);
}

}  // namespace

absl::Status ValidateDataset(const RegressionDataset& data) {
  if (data.features.rows() != data.labels.size()) {
    return absl::InvalidArgumentError("features and labels differ in length");
  }
  if (data.labels.size() == 0) return absl::InvalidArgumentError("empty dataset");
  if (data.features.cols() < 1) {
    return absl::InvalidArgumentError("need at least one feature");
  }
  auto in_box = [](double v) { return v >= -1.0 && v <= 1.0; };
  for (Eigen::Index i = 0; i < data.features.size(); ++i) {
    if (!in_box(data.features.data()[i])) {
      return absl::OutOfRangeError("features must lie in [-1, 1]");
    }
  }
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    if (!in_box(data.labels[i])) {
      return absl::OutOfRangeError("labels must lie in [-1, 1]");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<RegressionDataset> ParseDataset(absl::string_view text) {
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::vector<double> row;
    for (absl::string_view token :
         absl::StrSplit(line, absl::ByAnyChar(", \t\r"), absl::SkipEmpty())) {
      double v = 0.0;
      if (!absl::SimpleAtod(token, &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": bad number '", token, "'"));
      }
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (row.size() < 2 || (!rows.empty() && row.size() != rows.front().size())) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": inconsistent column count"));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return absl::InvalidArgumentError("empty dataset");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(rows.front().size()) - 1;
  RegressionDataset data{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) data.features(i, j) = rows[i][j];
    data.labels[i] = rows[i][p];
  }
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  return data;
}

absl::StatusOr<RegressionDataset> ReadDatasetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open dataset ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseDataset(buffer.str());
}

Eigen::VectorXd FeasibleSet::Project(const Eigen::VectorXd& theta) const {
  const double norm = theta.norm();
  if (norm <= radius) return theta;
  return theta * (radius / norm);
}

absl::StatusOr<PrivatizedPairs> PrivatizePairs(const RegressionDataset& data,
                                               const CoordinateBudget& budget,
                                               const VectorChannel& channel,
                                               std::uint64_t seed) {
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  const Eigen::Index n = data.num_users();
  const Eigen::Index d = data.packed_dim();
  if (static_cast<Eigen::Index>(budget.dim()) != d) {
    return absl::InvalidArgumentError("budget does not match packed dimension");
  }
  // Budgets compose additively across the two copies.
  const CoordinateBudget half = budget.Scaled(0.5);
  PrivatizedPairs out{Eigen::MatrixXd(n, d), Eigen::MatrixXd(n, d)};
  std::vector<double> x(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j + 1 < d; ++j) x[j] = data.features(i, j);
    x[d - 1] = data.labels[i];
    Rng rng = MakeStream(seed, {static_cast<std::uint64_t>(i)});
    for (Eigen::MatrixXd* copy : {&out.first, &out.second}) {
      absl::StatusOr<LayeredReport> r = MMeanSample(x, half, channel, rng);
      if (!r.ok()) return r.status();
      for (Eigen::Index j = 0; j < d; ++j) (*copy)(i, j) = r->nu_hat[j];
    }
  }
  return out;
}

absl::StatusOr<SurrogateObjective> BuildSurrogate(const PrivatizedPairs& pairs) {
  if (pairs.first.rows() != pairs.second.rows() ||
      pairs.first.cols() != pairs.second.cols() || pairs.first.cols() < 2 ||
      pairs.first.rows() == 0) {
    return absl::InvalidArgumentError("malformed privatized pairs");
  }
  const double n = static_cast<double>(pairs.first.rows());
  const Eigen::Index p = pairs.first.cols() - 1;
  const auto z1 = pairs.first.leftCols(p);
  const auto l1 = pairs.first.col(p);
  const auto z2 = pairs.second.leftCols(p);
  return SurrogateObjective{.a = z1.transpose() * z2 / n,
                            .b = z2.transpose() * l1 / n};
}

SurrogateObjective ExactObjective(const RegressionDataset& data) {
  const double n = static_cast<double>(data.num_users());
  return SurrogateObjective{
      .a = data.features.transpose() * data.features / n,
      .b = data.features.transpose() * data.labels / n};
}

double SurrogateValue(const SurrogateObjective& s, const Eigen::VectorXd& theta) {
  return 0.5 * theta.dot(s.a * theta) - s.b.dot(theta);
}

Eigen::VectorXd SurrogateGradient(const SurrogateObjective& s,
                                  const Eigen::VectorXd& theta) {
  return 0.5 * (s.a + s.a.transpose()) * theta - s.b;
}

absl::StatusOr<OptResult> Optimize(const SurrogateObjective& s,
                                   const FeasibleSet& feasible, double accuracy,
                                   int max_iterations) {
  const Eigen::Index p = s.b.size();
  if (s.a.rows() != p || s.a.cols() != p || p == 0) {
    return absl::InvalidArgumentError("surrogate dimensions disagree");
  }
  if (!(accuracy > 0.0)) return absl::InvalidArgumentError("accuracy must be > 0");
  if (!(feasible.radius > 0.0) || !std::isfinite(feasible.radius)) {
    return absl::InvalidArgumentError("feasible radius must be positive");
  }
  const Eigen::MatrixXd sym = 0.5 * (s.a + s.a.transpose());

  OptResult result;
  result.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  result.indefinite = result.min_eigenvalue < 0.0;

  const double norm = PowerIterationNorm(sym);
  const double step = norm > 0.0 ? 1.0 / (kLipschitzMargin * norm) : 1.0;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd best = theta;
  double best_value = SurrogateValue(s, theta);
  int it = 0;
  for (; it < max_iterations; ++it) {
    const Eigen::VectorXd grad = sym * theta - s.b;
    const double value = SurrogateValue(s, theta);
    if (value < best_value) {
      best_value = value;
      best = theta;
    }
    if (FrankWolfeGap(grad, theta, feasible.radius) <= accuracy) {
      result.converged = true;
      break;
    }
    theta = feasible.Project(theta - step * grad);
  }
  if (!result.converged) {
    const double value = SurrogateValue(s, theta);
    if (value < best_value) {
      best_value = value;
      best = theta;
    }
  }
  result.theta = best;
  result.value = best_value;
  result.gap = FrankWolfeGap(sym * best - s.b, best, feasible.radius);
  result.iterations = it;
  return result;
}

double EmpiricalRisk(const RegressionDataset& data, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd residual = data.features * theta - data.labels;
  return 0.5 * residual.squaredNorm() / static_cast<double>(data.num_users());
}

absl::StatusOr<double> OptimalRisk(const RegressionDataset& data,
                                   const FeasibleSet& feasible) {
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  const SurrogateObjective exact = ExactObjective(data);
  const Eigen::VectorXd theta = SolveBallQp(exact.a, exact.b, feasible.radius);
  return EmpiricalRisk(data, theta);
}

absl::StatusOr<OlsResult> RunPrivateOls(const RegressionDataset& data,
                                        const PrivacyDemand& demand,
                                        const FeasibleSet& feasible,
                                        const VectorChannel& channel,
                                        std::uint64_t seed,
                                        bool compute_excess_risk) {
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  if (static_cast<Eigen::Index>(demand.delta.size()) != data.packed_dim()) {
    return absl::InvalidArgumentError(
        "demand must cover every feature and the label (last)");
  }
  absl::StatusOr<CoordinateBudget> budget = CalibrateBudgets(demand);
  if (!budget.ok()) return budget.status();
  absl::StatusOr<PrivatizedPairs> pairs =
      PrivatizePairs(data, *budget, channel, seed);
  if (!pairs.ok()) return pairs.status();
  absl::StatusOr<SurrogateObjective> surrogate = BuildSurrogate(*pairs);
  if (!surrogate.ok()) return surrogate.status();

  const Eigen::Index n = data.num_users();
  const int cap = static_cast<int>(std::min<Eigen::Index>(10 * n, 1 << 30));
  absl::StatusOr<OptResult> opt =
      Optimize(*surrogate, feasible, 1.0 / static_cast<double>(n), cap);
  if (!opt.ok()) return opt.status();

  OlsResult result;
  result.theta = feasible.Project(opt->theta);
  result.diagnostics.budget = *std::move(budget);
  result.diagnostics.opt = *std::move(opt);
  if (compute_excess_risk) {
    absl::StatusOr<double> best = OptimalRisk(data, feasible);
    if (!best.ok()) return best.status();
    result.diagnostics.excess_risk = EmpiricalRisk(data, result.theta) - *best;
  }
  return result;
}

}  // namespace bcdp
