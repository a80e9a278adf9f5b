// Copyright 2026 The privfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privfunnel/em_opt.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle.h"
#include "privfunnel/eval/fixtures.h"
#include "test_util.h"

namespace privfunnel {
namespace {

using testing::RandomJoint;
using testing::RandomMatrix;
using testing::ToGrid;

TradeoffConfig EmConfig(double lambda, std::uint64_t seed = 42) {
  TradeoffConfig cfg;
  cfg.lambda = lambda;
  cfg.seed = seed;
  cfg.y_size = 2;
  return cfg;
}

TEST(EStepTest, IdentityChannelWithUEqualX) {
  std::vector<double> p(3 * 3 * 1, 0.0);
  for (int x = 0; x < 3; ++x) p[x * 3 + x] = 1.0 / 3;
  const DiscreteJoint j = *DiscreteJoint::Create(3, 3, 1, p);
  const VariationalDecoder q = *EStep(j, Channel::Identity(3));
  EXPECT_TRUE(q.Probabilities().isApprox(Eigen::Matrix3d::Identity(), 1e-12));
}

TEST(EStepTest, ConstantChannelGivesPointMass) {
  const VariationalDecoder q = *EStep(eval::BenchmarkJoint422(), Channel::Constant(4, 3));
  for (Eigen::Index u = 0; u < q.input_size(); ++u) {
    EXPECT_NEAR(q.Probabilities()(u, 0), 1.0, 1e-12);
  }
}

TEST(EStepTest, MatchesIndependentPosterior) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteJoint j = RandomJoint(rng, 4, 3, 2);
    const Channel ch = *Channel::FromLogits(RandomMatrix(rng, 4, 3, 2.0));
    const oracle::Pushed pushed =
        oracle::Push(testing::ToTensor(j), ToGrid(ch.Probabilities()));
    const Eigen::MatrixXd q = EStep(j, ch)->Probabilities();
    for (int u = 0; u < 3; ++u) {
      std::vector<double> post(3), qu(3);
      double pu = 0;
      for (int y = 0; y < 3; ++y) pu += pushed.yu[y][u];
      for (int y = 0; y < 3; ++y) {
        post[y] = pushed.yu[y][u] / pu;
        qu[y] = q(u, y);
      }
      ASSERT_LT(std::abs(oracle::Kl(qu, post)), 1e-12);
    }
  }
}

TEST(EStepTest, ZeroMassRowIsUniform) {
  const DiscreteJoint j = *DiscreteJoint::Create(2, 2, 1, {0.5, 0.0, 0.5, 0.0});
  const Eigen::MatrixXd q = EStep(j, Channel::Identity(2))->Probabilities();
  EXPECT_NEAR(q(1, 0), 0.5, 1e-12);
  EXPECT_NEAR(q(1, 1), 0.5, 1e-12);
}

TEST(EmCostTest, EqualsNegatedTradeoff) {
  const DiscreteJoint j = eval::ToyJoint222();
  Eigen::Matrix2d l;
  l << 0.5, -0.5, -0.3, 0.7;
  const Channel ch = *Channel::FromLogits(l);
  EXPECT_NEAR(*EmCost(j, ch, 1.0, PrivacyTerm::kExact),
              -(0.0042771468221461606 - 0.012440346783583074), 1e-14);
  const double i_xs = MutualInformation(j.MarginalXS());
  EXPECT_NEAR(*EmCost(j, ch, 2.0, PrivacyTerm::kDpiConstant),
              -(0.0042771468221461606 - 2.0 * i_xs), 1e-14);
}

TEST(EmCostTest, LiteralCostDiffersByEntropyConstant) {
  // H(Y|U) - lambda H(Y|S) = -(I(Y;U) - lambda I(Y;S)) + (1 - lambda) H(Y).
  std::mt19937_64 rng(42);
  const DiscreteJoint j = RandomJoint(rng, 3, 2, 2);
  const Channel ch = *Channel::FromLogits(RandomMatrix(rng, 3, 2, 1.0));
  for (double lambda : {0.0, 0.5, 3.0}) {
    const double h_y = EvaluateChannel(j, ch)->h_y;
    EXPECT_NEAR(*LiteralEmCost(j, ch, lambda),
                *EmCost(j, ch, lambda, PrivacyTerm::kExact) + (1 - lambda) * h_y, 1e-12);
  }
}

TEST(MStepTest, ZeroGradientLeavesChannel) {
  const DiscreteJoint j = eval::ToyJoint222();
  const Channel ch = *Channel::FromLogits(Eigen::MatrixXd::Zero(2, 2));
  const MStepResult r = *MStep(j, ch, *EStep(j, ch), 0.0, 1.0);
  EXPECT_FALSE(r.moved);
  EXPECT_EQ(r.channel.logits(), ch.logits());
}

TEST(MStepTest, SingleOutputLeavesChannel) {
  const DiscreteJoint j = eval::ToyJoint222();
  const Channel ch = *Channel::FromLogits(Eigen::MatrixXd::Zero(2, 1));
  const MStepResult r = *MStep(j, ch, *EStep(j, ch), 1.0, 1.0);
  EXPECT_FALSE(r.moved);
}

TEST(MStepTest, OneStepDecreasesCost) {
  const DiscreteJoint j = eval::BenchmarkJoint422();
  std::mt19937_64 rng(7);
  const Channel ch = *Channel::FromLogits(InitialLogits(4, 2, rng));
  const MStepResult r = *MStep(j, ch, *EStep(j, ch), 0.0, 1.0);
  ASSERT_TRUE(r.moved);
  const oracle::Pushed before = oracle::Push(testing::ToTensor(j), ToGrid(ch.Probabilities()));
  const oracle::Pushed after =
      oracle::Push(testing::ToTensor(j), ToGrid(r.channel.Probabilities()));
  EXPECT_LT(-oracle::Mi(after.yu), -oracle::Mi(before.yu));
}

TEST(MStepTest, RejectsNonPositiveAlpha) {
  const DiscreteJoint j = eval::ToyJoint222();
  const Channel ch = Channel::Identity(2);
  EXPECT_EQ(ErrorKindOf(MStep(j, ch, *EStep(j, ch), 1.0, 0.0)), ErrorKind::kInvalidArgument);
}

TEST(RunEmTest, CostMonotoneAndGapTinyOnRandomInstances) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteJoint j = RandomJoint(rng, 4, 3, 2);
    TradeoffConfig cfg = EmConfig(0.5 * trial, trial);
    cfg.y_size = 3;
    cfg.max_iters = 300;
    const EmResult r = *RunEm(j, cfg);
    for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
      ASSERT_LT(r.trace.records[i].kl_gap, 1e-9);
      if (i > 0) {
        ASSERT_LE(r.trace.records[i].cost, r.trace.records[i - 1].cost + 1e-8);
      }
    }
  }
}

TEST(RunEmTest, IndependentInputGivesFlatCost) {
  // X independent of (U, S): every channel has zero utility and leakage.
  const DiscreteJoint j = *DiscreteJoint::Create(2, 2, 2, std::vector<double>(8, 0.125));
  const EmResult r = *RunEm(j, EmConfig(1.0));
  for (const EmRecord& rec : r.trace.records) EXPECT_NEAR(rec.cost, 0.0, 1e-15);
  EXPECT_EQ(r.trace.status, TerminalStatus::kConverged);
}

TEST(RunEmTest, ToyEndpoints) {
  const DiscreteJoint j = eval::ToyJoint222();
  // Grid extremes over binary channels: max I(Y;U) at lambda 0 and the
  // constant channel at lambda 10.
  const double grid_max_iyu = 0.0201318;
  const ChannelInformation low = *EvaluateChannel(j, RunEm(j, EmConfig(0.0))->channel);
  const ChannelInformation high = *EvaluateChannel(j, RunEm(j, EmConfig(10.0))->channel);
  EXPECT_GE(low.i_yu, 0.98 * grid_max_iyu);
  EXPECT_LE(high.i_ys, 0.02);
}

TEST(RunEmTest, FixedPointCycleIsStable) {
  TradeoffConfig cfg = EmConfig(2.0);
  cfg.epsilon = 1e-8;
  cfg.max_iters = 20000;
  const DiscreteJoint j = eval::BenchmarkJoint422();
  const EmResult r = *RunEm(j, cfg);
  ASSERT_EQ(r.trace.status, TerminalStatus::kConverged);
  const double cost = *EmCost(j, r.channel, cfg.lambda, cfg.privacy_term);
  const MStepResult m = *MStep(j, r.channel, *EStep(j, r.channel), cfg.lambda, cfg.alpha0);
  EXPECT_LT(std::abs(*EmCost(j, m.channel, cfg.lambda, cfg.privacy_term) - cost),
            cfg.epsilon);
}

TEST(RunEmTest, DeterministicForSeed) {
  const EmResult a = *RunEm(eval::BenchmarkJoint422(), EmConfig(1.0, 9));
  const EmResult b = *RunEm(eval::BenchmarkJoint422(), EmConfig(1.0, 9));
  EXPECT_EQ(a.channel.logits(), b.channel.logits());
}

TEST(SweepEmTest, PointsFollowLambdas) {
  const std::vector<TradeoffPoint> pts = *SweepEm(eval::ToyJoint222(), {0, 10}, EmConfig(0));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_GT(pts[0].i_ys, pts[1].i_ys);
  EXPECT_FALSE(SweepEm(eval::ToyJoint222(), {3, 1}, EmConfig(0)).ok());
}

TEST(SensitivityTest, ZeroScaleGivesZeroRatio) {
  const SensitivityReport r = *SensitivityProbe(eval::BenchmarkJoint422(), EmConfig(1.0), 0.0);
  EXPECT_EQ(r.ratio, 0.0);
  EXPECT_EQ(r.theta_delta_norm, 0.0);
}

TEST(SensitivityTest, SmallScalesGiveComparableRatios) {
  TradeoffConfig cfg = EmConfig(1.0);
  const DiscreteJoint j = eval::BenchmarkJoint422();
  const SensitivityReport a = *SensitivityProbe(j, cfg, 1e-3);
  const SensitivityReport b = *SensitivityProbe(j, cfg, 1e-4);
  EXPECT_TRUE(std::isfinite(a.ratio));
  EXPECT_GT(a.ratio, 0.0);
  EXPECT_GT(b.ratio, 0.0);
  EXPECT_LT(std::max(a.ratio, b.ratio) / std::min(a.ratio, b.ratio), 10.0);
}

TEST(SensitivityTest, BoundedOverInstances) {
  std::mt19937_64 rng(44);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteJoint j = RandomJoint(rng, 4, 3, 2);
    const double floor = j.table().minCoeff();
    for (double scale : {0.5 * floor, 0.1 * floor, 0.01 * floor}) {
      TradeoffConfig cfg = EmConfig(1.0, trial);
      cfg.max_iters = 300;
      const SensitivityReport r = *SensitivityProbe(j, cfg, scale);
      ASSERT_TRUE(std::isfinite(r.ratio));
      ASSERT_GE(r.ratio, 0.0);
      worst = std::max(worst, r.ratio);
    }
  }
  RecordProperty("max_ratio", std::to_string(worst));
}

TEST(SensitivityTest, OversizedPerturbation) {
  EXPECT_EQ(ErrorKindOf(SensitivityProbe(eval::BenchmarkJoint422(), EmConfig(1.0), 0.5)),
            ErrorKind::kInvalidPerturbation);
}

}  // namespace
}  // namespace privfunnel
