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

#include "privfunnel/bounds.h"

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

Channel FixedChannel() {
  Eigen::Matrix2d l;
  l << 0.5, -0.5, -0.3, 0.7;
  return *Channel::FromLogits(l);
}

VariationalDecoder FixedDecoder() {
  Eigen::Matrix2d l;
  l << 0.2, -0.1, 0.0, 0.4;
  return *VariationalDecoder::FromLogits(l);
}

// Frozen from a 40-digit evaluation of the same instance.
constexpr double kFixedLowerBound = 0.00063603262980575321;
constexpr double kFixedIyu = 0.0042771468221461606;
constexpr double kFixedIys = 0.012440346783583074;

TEST(DecoderTest, ProbabilitiesArePositiveRows) {
  Eigen::MatrixXd l(2, 3);
  l << 100, -100, 0, 1, 2, 3;
  const VariationalDecoder q = *VariationalDecoder::FromLogits(l);
  const Eigen::MatrixXd p = q.Probabilities();
  EXPECT_GT(p.minCoeff(), 0.0);
  EXPECT_NEAR(p.row(0).sum(), 1.0, 1e-12);
  EXPECT_LE(q.ClampedLogits().maxCoeff(), kDecoderLogitClamp);
}

TEST(DecoderTest, RejectsNonFinite) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2, 2);
  l(1, 1) = std::nan("");
  EXPECT_EQ(ErrorKindOf(VariationalDecoder::FromLogits(l)), ErrorKind::kInvalidArgument);
}

TEST(PrivacyTermTest, NamesRoundTrip) {
  for (PrivacyTerm t : {PrivacyTerm::kExact, PrivacyTerm::kDpiConstant}) {
    EXPECT_EQ(*ParsePrivacyTerm(PrivacyTermName(t)), t);
  }
  EXPECT_FALSE(ParsePrivacyTerm("bogus").ok());
}

TEST(LowerBoundTest, FixedInstanceMatchesOracle) {
  const DiscreteJoint pushed = *PushThroughChannel(eval::ToyJoint222(), FixedChannel());
  const Eigen::MatrixXd yu = pushed.MarginalXU();
  const double oracle_lb =
      oracle::LowerBound(ToGrid(yu), ToGrid(FixedDecoder().Probabilities()));
  EXPECT_NEAR(oracle_lb, kFixedLowerBound, 1e-14);
  EXPECT_NEAR(*UtilityLowerBound(yu, FixedDecoder()), kFixedLowerBound, 1e-14);
  EXPECT_NEAR(*LowerBoundViaKlDecomposition(yu, FixedDecoder()), kFixedLowerBound, 1e-14);
  EXPECT_NEAR(MutualInformation(yu), kFixedIyu, 1e-14);
}

TEST(LowerBoundTest, ExactPosteriorIsTight) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const DiscreteJoint j = RandomJoint(rng, 3, 4, 2);
    const Eigen::MatrixXd yu = j.MarginalXU();
    const VariationalDecoder q = *VariationalDecoder::FromProbabilities(ExactPosterior(yu));
    ASSERT_NEAR(*UtilityLowerBound(yu, q), MutualInformation(yu), 1e-10);
  }
}

TEST(LowerBoundTest, NeverExceedsExactAndDecompositionsAgree) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const DiscreteJoint j = RandomJoint(rng, 2 + static_cast<int>(rng() % 3),
                                        2 + static_cast<int>(rng() % 3), 2);
    const Channel ch = *Channel::FromLogits(RandomMatrix(rng, j.nx(), 3, 2.0));
    const Eigen::MatrixXd yu = PushThroughChannel(j, ch)->MarginalXU();
    const VariationalDecoder q =
        *VariationalDecoder::FromLogits(RandomMatrix(rng, j.nu(), 3, 2.0));
    const double lb = *UtilityLowerBound(yu, q);
    ASSERT_LE(lb, MutualInformation(yu) + 1e-12);
    ASSERT_NEAR(lb, *LowerBoundViaKlDecomposition(yu, q), 1e-12);
    ASSERT_NEAR(lb, oracle::LowerBound(ToGrid(yu), ToGrid(q.Probabilities())), 1e-12);
  }
}

TEST(LowerBoundTest, DimensionMismatch) {
  EXPECT_EQ(ErrorKindOf(UtilityLowerBound(Eigen::Matrix2d::Constant(0.25),
                                          VariationalDecoder::Uniform(3, 2))),
            ErrorKind::kDimensionMismatch);
}

TEST(UpperBoundTest, FourByTwoJointMatchesOracle) {
  Eigen::MatrixXd xs(4, 2);
  xs << 0.2, 0.05, 0.05, 0.2, 0.15, 0.1, 0.1, 0.15;
  const double frozen = 0.10644013528622318;
  EXPECT_NEAR(oracle::Mi(ToGrid(xs)), frozen, 1e-15);
  EXPECT_NEAR(PrivacyUpperBound(xs), frozen, 1e-15);
}

TEST(UpperBoundTest, DominatesEveryChannel) {
  std::mt19937_64 rng(23);
  const DiscreteJoint j = eval::BenchmarkJoint422();
  const double bound = PrivacyUpperBound(j.MarginalXS());
  for (int trial = 0; trial < 300; ++trial) {
    const Channel ch = *Channel::FromLogits(RandomMatrix(rng, 4, 2 + trial % 4, 5.0));
    ASSERT_LE(EvaluateChannel(j, ch)->i_ys, bound + 1e-12);
  }
}

TEST(EvaluateChannelTest, FixedInstance) {
  const ChannelInformation info = *EvaluateChannel(eval::ToyJoint222(), FixedChannel());
  EXPECT_NEAR(info.i_yu, kFixedIyu, 1e-14);
  EXPECT_NEAR(info.i_ys, kFixedIys, 1e-14);
  const DiscreteJoint j = eval::ToyJoint222();
  EXPECT_NEAR(info.i_xu, MutualInformation(j.MarginalXU()), 1e-15);
  EXPECT_NEAR(info.i_xs, MutualInformation(j.MarginalXS()), 1e-15);
}

TEST(SurrogateTest, ExactTermFixedInstance) {
  const ObjectiveReport r = *SurrogateObjective(eval::ToyJoint222(), FixedChannel(),
                                                FixedDecoder(), 1.0, PrivacyTerm::kExact);
  EXPECT_NEAR(r.lower_bound_iyu, kFixedLowerBound, 1e-14);
  EXPECT_NEAR(r.exact_iyu, kFixedIyu, 1e-14);
  EXPECT_NEAR(r.exact_iys, kFixedIys, 1e-14);
  EXPECT_NEAR(r.surrogate_value, -0.011804314153777320, 1e-14);
  EXPECT_EQ(r.lambda, 1.0);
}

TEST(SurrogateTest, DpiTermUsesUpperBound) {
  const DiscreteJoint j = eval::ToyJoint222();
  const ObjectiveReport r = *SurrogateObjective(j, FixedChannel(), FixedDecoder(), 2.0,
                                                PrivacyTerm::kDpiConstant);
  EXPECT_NEAR(r.upper_bound_iys, PrivacyUpperBound(j.MarginalXS()), 1e-15);
  EXPECT_NEAR(r.surrogate_value, kFixedLowerBound - 2.0 * r.upper_bound_iys, 1e-14);
}

TEST(SurrogateTest, RejectsNegativeLambda) {
  EXPECT_EQ(ErrorKindOf(SurrogateObjective(eval::ToyJoint222(), FixedChannel(), FixedDecoder(),
                                           -1.0, PrivacyTerm::kExact)),
            ErrorKind::kInvalidArgument);
}

TEST(AlternatingCostTest, FixedInstance) {
  const AlternatingCostBreakdown c =
      *AlternatingCost(eval::ToyJoint222(), FixedChannel(), FixedDecoder(), 1.0);
  EXPECT_NEAR(c.expected_kl, 0.0036081519276390241, 1e-14);
  EXPECT_NEAR(c.decoder_entropy, 0.67778133889000064, 1e-14);
  EXPECT_NEAR(c.privacy, kFixedIys, 1e-14);
  EXPECT_NEAR(c.total, 0.69382983760122274, 1e-14);
}

TEST(AlternatingCostTest, KlVanishesAtExactPosterior) {
  const DiscreteJoint j = eval::ToyJoint222();
  const Eigen::MatrixXd yu = PushThroughChannel(j, FixedChannel())->MarginalXU();
  const VariationalDecoder q = *VariationalDecoder::FromProbabilities(ExactPosterior(yu));
  EXPECT_NEAR(AlternatingCost(j, FixedChannel(), q, 1.0)->expected_kl, 0.0, 1e-12);
}

}  // namespace
}  // namespace privfunnel
