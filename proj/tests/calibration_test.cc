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


#include "bcdp/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "bcdp/audit.h"
#include "bcdp/mechanisms.h"
#include "bcdp/priors.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace bcdp {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> ScenarioDelta() {
  std::vector<double> delta(10, 2.0);
  delta[0] = delta[1] = 0.2;
  return delta;
}

TEST(CalibrateBudgetsTest, GoldenTenCoordinateScenario) {
  absl::StatusOr<CoordinateBudget> b =
      CalibrateBudgets({.epsilon = 2, .delta = ScenarioDelta(), .q = 0.5, .zeta = 0.5});
  ASSERT_TRUE(b.ok()) << b.status();
  // 50-digit evaluation: 0.19090282892638189198...
  for (double c : b->InCallerOrder()) EXPECT_NEAR(c, 0.19090282892638189198, 1e-15);
}

TEST(CalibrateBudgetsTest, FirstBranchLeavesOneMinusZetaOnSensitiveCoordinates) {
  absl::StatusOr<CoordinateBudget> b =
      CalibrateBudgets({.epsilon = 2, .delta = ScenarioDelta(), .q = 0.25, .zeta = 0.625});
  ASSERT_TRUE(b.ok());
  const std::vector<double> c = b->InCallerOrder();
  EXPECT_NEAR(c[0], 0.075, 1e-15);
  EXPECT_NEAR(c[1], 0.075, 1e-15);
  EXPECT_NEAR(c[9], 0.42696160213723750855, 1e-14);
}

TEST(CalibrateBudgetsTest, ZetaOneWithUniformDemandGivesEpsilonEverywhere) {
  for (double q : {0.0, 0.3, 1.0}) {
    absl::StatusOr<CoordinateBudget> b =
        CalibrateBudgets({.epsilon = 1.5, .delta = {1.5, 1.5, 1.5}, .q = q, .zeta = 1});
    ASSERT_TRUE(b.ok());
    EXPECT_THAT(b->internal(), ElementsAre(1.5, 1.5, 1.5)) << "q=" << q;
  }
}

TEST(CalibrateBudgetsTest, FullCorrelationCapsTotalAtZetaTimesSmallestDelta) {
  absl::StatusOr<CoordinateBudget> b =
      CalibrateBudgets({.epsilon = 3, .delta = {0.8, 2.0, 0.4}, .q = 1, .zeta = 0.3});
  ASSERT_TRUE(b.ok());
  EXPECT_DOUBLE_EQ(b->total(), 0.3 * 0.4);
}

TEST(CalibrateBudgetsTest, IndependentPriorSpendsEachDemand) {
  absl::StatusOr<CoordinateBudget> b =
      CalibrateBudgets({.epsilon = 1, .delta = {0.7, 0.2, kInf}, .q = 0, .zeta = 0.5});
  ASSERT_TRUE(b.ok());
  EXPECT_THAT(b->InCallerOrder(), ElementsAre(0.7, 0.2, 1.0));
  EXPECT_THAT(b->internal(), ElementsAre(0.2, 0.7, 1.0));
  EXPECT_THAT(b->perm(), ElementsAre(1u, 0u, 2u));
}

TEST(CalibrateBudgetsTest, TiesKeepInputOrder) {
  absl::StatusOr<CoordinateBudget> b =
      CalibrateBudgets({.epsilon = 1, .delta = {0.5, 0.2, 0.5, 0.2}, .q = 0, .zeta = 1});
  ASSERT_TRUE(b.ok());
  EXPECT_THAT(b->perm(), ElementsAre(1u, 3u, 0u, 2u));
}

TEST(CalibrateBudgetsTest, ZeroDemandIsAllowed) {
  absl::StatusOr<CoordinateBudget> b =
      CalibrateBudgets({.epsilon = 1, .delta = {0.0, 0.0}, .q = 0.5, .zeta = 0.5});
  ASSERT_TRUE(b.ok());
  EXPECT_THAT(b->internal(), ElementsAre(0.0, 0.0));
}

TEST(CalibrateBudgetsTest, RejectsInvalidDemands) {
  EXPECT_FALSE(CalibrateBudgets({.epsilon = 1, .delta = {}, .q = 0, .zeta = 1}).ok());
  EXPECT_FALSE(CalibrateBudgets({.epsilon = -1, .delta = {1}, .q = 0, .zeta = 1}).ok());
  EXPECT_FALSE(CalibrateBudgets({.epsilon = kInf, .delta = {1}, .q = 0, .zeta = 1}).ok());
  EXPECT_FALSE(CalibrateBudgets({.epsilon = 1, .delta = {-0.1}, .q = 0, .zeta = 1}).ok());
  EXPECT_FALSE(CalibrateBudgets({.epsilon = 1, .delta = {1}, .q = 1.5, .zeta = 1}).ok());
  EXPECT_FALSE(CalibrateBudgets({.epsilon = 1, .delta = {1}, .q = 0.5, .zeta = 0}).ok());
  EXPECT_FALSE(CalibrateBudgets({.epsilon = 1, .delta = {1}, .q = 0.5, .zeta = 1.1}).ok());
}

TEST(CalibrateBudgetsTest, RandomDemandsSatisfyInvariants) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 1 + static_cast<int>(unif(rng) * 8);
    PrivacyDemand demand{.epsilon = 3 * unif(rng),
                         .delta = std::vector<double>(d),
                         .q = unif(rng),
                         .zeta = 0.05 + 0.95 * unif(rng)};
    for (double& v : demand.delta) v = unif(rng) < 0.1 ? kInf : 4 * unif(rng);
    absl::StatusOr<CoordinateBudget> b = CalibrateBudgets(demand);
    ASSERT_TRUE(b.ok());
    const std::vector<double>& c = b->internal();
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    EXPECT_GE(c.front(), 0.0);
    std::vector<double> tilde = b->ToInternal(demand.delta);
    for (double& t : tilde) t = std::min(t, demand.epsilon);
    EXPECT_LE(c.back(), std::min(demand.epsilon, tilde.back()) + kBudgetTolerance);
    EXPECT_LE(CalibrationSlackViolation(demand, *b), kBudgetTolerance);
    const double first =
        std::log1p(std::expm1(demand.zeta * tilde.front()) / demand.q);
    if (first < tilde.back() && c.back() > tilde.front()) {
      EXPECT_GE(c.front(), (1 - demand.zeta) * tilde.front() - 1e-12);
    }
  }
}

TEST(CalibrateBudgetsTest, PermutationEquivariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> delta(6);
    for (double& v : delta) v = 0.05 + 2 * unif(rng);
    std::vector<std::size_t> p(delta.size());
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<double> permuted(delta.size());
    for (std::size_t i = 0; i < p.size(); ++i) permuted[i] = delta[p[i]];
    const double q = unif(rng);
    auto direct = CalibrateBudgets({.epsilon = 1.5, .delta = delta, .q = q, .zeta = 0.5});
    auto moved = CalibrateBudgets({.epsilon = 1.5, .delta = permuted, .q = q, .zeta = 0.5});
    ASSERT_TRUE(direct.ok() && moved.ok());
    const std::vector<double> a = direct->InCallerOrder();
    const std::vector<double> b = moved->InCallerOrder();
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(b[i], a[p[i]]);
  }
}

TEST(CoordinateBudgetTest, OrderConversionsRoundTrip) {
  CoordinateBudget b({0.1, 0.2, 0.3}, {2, 0, 1});
  EXPECT_THAT(b.InCallerOrder(), ElementsAre(0.2, 0.3, 0.1));
  const std::vector<double> x = {7, 8, 9};
  EXPECT_THAT(b.ToInternal(x), ElementsAre(9, 7, 8));
  EXPECT_THAT(b.ToCaller(b.ToInternal(x)), ElementsAre(7, 8, 9));
  EXPECT_THAT(b.Scaled(0.5).internal(), ElementsAre(0.05, 0.1, 0.15));
  EXPECT_EQ(b.Scaled(0.5).perm(), b.perm());
}

TEST(CdpToBcdpBoundTest, IndependentCoordinatesLeakNothingExtra) {
  absl::StatusOr<std::vector<double>> d = CdpToBcdpBound({{0.1, 0.4, 1.0}}, {{0, 0, 0}});
  ASSERT_TRUE(d.ok());
  EXPECT_THAT(*d, ElementsAre(0.1, 0.4, 1.0));
}

TEST(CdpToBcdpBoundTest, RedundantCoordinatesAccumulate) {
  absl::StatusOr<std::vector<double>> d = CdpToBcdpBound({{0.1, 0.4, 1.0}}, {{1, 1, 1}});
  ASSERT_TRUE(d.ok());
  EXPECT_THAT(*d, Pointwise(DoubleNear(1e-12), {1.5, 1.5, 1.5}));
}

TEST(CdpToBcdpBoundTest, GoldenValues) {
  const std::vector<double> c = {0.1, 0.3};
  const std::vector<double> q = {0.5, 0.5};
  absl::StatusOr<std::vector<double>> plain = CdpToBcdpBound(c, q);
  absl::StatusOr<std::vector<double>> refined = CdpToBcdpBound(c, q, 0.4);
  ASSERT_TRUE(plain.ok() && refined.ok());
  EXPECT_THAT(*plain, Pointwise(DoubleNear(1e-15),
                                {0.26120806390858180940, 0.35124947951362558541}));
  EXPECT_THAT(*refined, Pointwise(DoubleNear(1e-15), {0.31986807184000731425, 0.4}));
}

TEST(CdpToBcdpBoundTest, DominatesExactAuditOfRandomizedResponseProduct) {
  absl::StatusOr<FiniteMechanism> f1 = RandomizedResponseKernel(2, 0.1);
  absl::StatusOr<FiniteMechanism> f2 = RandomizedResponseKernel(2, 0.3);
  ASSERT_TRUE(f1.ok() && f2.ok());
  const std::vector<FiniteMechanism> factors = {*f1, *f2};
  absl::StatusOr<FiniteMechanism> m = TensorProduct(factors);
  absl::StatusOr<DiscretePrior> prior = CorrelatedBernoulliPrior(2, 0.5);
  ASSERT_TRUE(m.ok() && prior.ok());
  absl::StatusOr<AuditReport> report = Audit(*m, *prior);
  ASSERT_TRUE(report.ok());
  EXPECT_THAT(report->tv_bounds, Pointwise(DoubleNear(1e-12), {0.5, 0.5}));
  EXPECT_NEAR(report->ldp_level, 0.4, 1e-12);
  absl::StatusOr<std::vector<double>> refined =
      CdpToBcdpBound(report->cdp_levels, report->tv_bounds, report->ldp_level);
  ASSERT_TRUE(refined.ok());
  for (int i = 0; i < 2; ++i) {
    EXPECT_LE(report->bcdp_levels[i], (*refined)[i] + kAuditTolerance);
    EXPECT_GE(report->bcdp_levels[i], report->cdp_levels[i] - kAuditTolerance);
  }
}

TEST(CdpToBcdpBoundTest, RejectsBadInputs) {
  EXPECT_FALSE(CdpToBcdpBound({{0.1, 0.2}}, {{0.5}}).ok());
  EXPECT_FALSE(CdpToBcdpBound({{-0.1}}, {{0.5}}).ok());
  EXPECT_FALSE(CdpToBcdpBound({{0.1}}, {{1.5}}).ok());
}

TEST(FeasibilityMatrixTest, SingleCoordinate) {
  const std::vector<double> delta = {0.7};
  const std::vector<double> q = {0.5};
  absl::StatusOr<FeasibilityMatrix> a = FeasibilityMatrix::Create(delta, q);
  ASSERT_TRUE(a.ok());
  EXPECT_DOUBLE_EQ(a->at(0, 0), 1 / 0.7);
  EXPECT_TRUE(a->IsFeasible(std::vector<double>{0.7}));
  EXPECT_FALSE(a->IsFeasible(std::vector<double>{0.71}));
}

TEST(FeasibilityMatrixTest, Entries) {
  const std::vector<double> delta = {0.5, 1.0};
  const std::vector<double> q = {0.25, 1.0};
  absl::StatusOr<FeasibilityMatrix> a = FeasibilityMatrix::Create(delta, q);
  ASSERT_TRUE(a.ok());
  EXPECT_DOUBLE_EQ(a->at(0, 0), 2.0);
  EXPECT_NEAR(a->at(0, 1), 1 / std::log(1 + (std::exp(0.5) - 1) / 0.25), 1e-15);
  EXPECT_NEAR(a->at(1, 0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(a->at(1, 1), 1.0);
  EXPECT_TRUE(a->IsFeasible(std::vector<double>{0, 0}));
  EXPECT_THAT(a->Apply(std::vector<double>{0.1, 0.2}),
              Pointwise(DoubleNear(1e-15), {0.2 + 0.2 * a->at(0, 1), 0.3}));
}

TEST(FeasibilityMatrixTest, RejectsUndefinedEntries) {
  const std::vector<double> ok_delta = {0.5};
  EXPECT_FALSE(FeasibilityMatrix::Create(ok_delta, std::vector<double>{0.0}).ok());
  EXPECT_FALSE(FeasibilityMatrix::Create(std::vector<double>{0.0},
                                         std::vector<double>{0.5}).ok());
  EXPECT_FALSE(FeasibilityMatrix::Create(std::vector<double>{kInf},
                                         std::vector<double>{0.5}).ok());
  EXPECT_FALSE(FeasibilityMatrix::Create(std::vector<double>{0.5, 0.5},
                                         std::vector<double>{0.5}).ok());
}

TEST(FeasibilityMatrixTest, RelaxationImpliesNonlinearConstraint) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 1 + static_cast<int>(unif(rng) * 5);
    std::vector<double> delta(d), q(d), c(d);
    for (int i = 0; i < d; ++i) {
      delta[i] = 0.01 + 3 * unif(rng);
      q[i] = 0.001 + 0.999 * unif(rng);
    }
    absl::StatusOr<FeasibilityMatrix> a = FeasibilityMatrix::Create(delta, q);
    ASSERT_TRUE(a.ok());
    for (double& v : c) v = unif(rng);
    const std::vector<double> row = a->Apply(c);
    const double scale = *std::max_element(row.begin(), row.end());
    for (double& v : c) v *= unif(rng) / scale;
    ASSERT_TRUE(a->IsFeasible(c));
    absl::StatusOr<std::vector<double>> bound = CdpToBcdpBound(c, q);
    ASSERT_TRUE(bound.ok());
    for (int i = 0; i < d; ++i) EXPECT_LE((*bound)[i], delta[i] + 1e-12);
  }
}

TEST(CorollaryRateTest, IndependentCase) {
  absl::StatusOr<double> r = CorollaryRate(10, 2, 0.2, 2.0, 0.0, 1);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r, 516.0, 1e-9);
  absl::StatusOr<double> r2 = CorollaryRate(10, 2, 0.2, 2.0, 0.0, 4);
  ASSERT_TRUE(r2.ok());
  EXPECT_NEAR(*r2, 129.0, 1e-9);
}

TEST(CorollaryRateTest, FullCorrelationShrinksSecondDenominator) {
  absl::StatusOr<double> r = CorollaryRate(10, 2, 0.2, 2.0, 1.0, 1);
  ASSERT_TRUE(r.ok());
  // c_d = delta / 2, so the denominator is (d - k) delta^2 / d.
  EXPECT_NEAR(*r, 500.0 + 64.0 / (0.8 * 0.04), 1e-9);
}

TEST(CorollaryRateTest, BranchesNearlyAgreeAtTheThreshold) {
  const double threshold = std::expm1(0.1) / std::expm1(2.0);
  absl::StatusOr<double> below = CorollaryRate(10, 2, 0.2, 2.0, threshold, 1);
  absl::StatusOr<double> above =
      CorollaryRate(10, 2, 0.2, 2.0, std::nextafter(threshold, 1.0), 1);
  ASSERT_TRUE(below.ok() && above.ok());
  EXPECT_NEAR(*below, 516.0, 1e-9);
  // The two branches share c_d = epsilon here but their denominators differ
  // by the (d - k) delta^2 / d term: 516 vs 517.5727622185612.
  EXPECT_NEAR(*above, 517.57276221856123, 1e-6);
}

TEST(CorollaryRateTest, RejectsOutOfRangeArguments) {
  EXPECT_FALSE(CorollaryRate(10, 2, 1.0, 2.0, 0.0, 1).ok());
  EXPECT_FALSE(CorollaryRate(10, 0, 0.2, 2.0, 0.0, 1).ok());
  EXPECT_FALSE(CorollaryRate(10, 11, 0.2, 2.0, 0.0, 1).ok());
  EXPECT_FALSE(CorollaryRate(10, 2, 0.2, 2.0, 1.5, 1).ok());
  EXPECT_FALSE(CorollaryRate(10, 2, 0.2, 2.0, 0.0, 0).ok());
}

TEST(HeuristicZetaTest, Endpoints) {
  EXPECT_DOUBLE_EQ(HeuristicZeta(0), 0.5);
  EXPECT_DOUBLE_EQ(HeuristicZeta(1), 1.0);
}

}  // namespace
}  // namespace bcdp
