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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "privfunnel/eval/baselines.h"
#include "privfunnel/eval/compare.h"
#include "privfunnel/eval/fixtures.h"
#include "privfunnel/eval/generators.h"
#include "privfunnel/eval/score.h"
#include "privfunnel/eval/softmax.h"
#include "privfunnel/eval/table.h"

namespace privfunnel::eval {
namespace {

DatasetSchema NumericSchema(int features) {
  std::vector<ColumnSpec> cols;
  for (int f = 0; f < features; ++f) cols.push_back({"x" + std::to_string(f)});
  cols.push_back({"u", ColumnRole::kUtilityLabel, 2});
  cols.push_back({"c", ColumnRole::kSensitiveLabel, 2});
  return *DatasetSchema::Create(cols);
}

SampleTable StructuredTable(Eigen::Index n, std::uint64_t seed) {
  return *SampleGaussianTable(StructuredGaussian(), n, seed);
}

// Feature x0 = +/-(1 + |noise|) by the utility label; c is independent noise.
SampleTable SeparableTable(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd data(n, 3);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int u = unit(rng) < 0.5 ? 0 : 1;
    data(r, 0) = (u == 1 ? 1.0 : -1.0) * (1.0 + unit(rng));
    data(r, 1) = u;
    data(r, 2) = unit(rng) < 0.5 ? 0 : 1;
  }
  return *SampleTable::Create(NumericSchema(1), data);
}

double PlugInMiOracle(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  const double n = static_cast<double>(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    joint[{a(i), b(i)}] += 1 / n;
    pa[a(i)] += 1 / n;
    pb[b(i)] += 1 / n;
  }
  double mi = 0;
  for (const auto& [key, p] : joint) mi += p * std::log(p / (pa[key.first] * pb[key.second]));
  return mi;
}

long SmallestGroup(const SampleTable& t) {
  std::map<std::vector<double>, long> groups;
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    std::vector<double> key;
    for (int f : t.schema().feature_indices()) key.push_back(t.data()(r, f));
    ++groups[key];
  }
  long smallest = t.rows();
  for (const auto& [unused, count] : groups) smallest = std::min(smallest, count);
  return smallest;
}

// Schema and table validation.

TEST(SchemaTest, RequiresRoles) {
  EXPECT_FALSE(DatasetSchema::Create({{"u", ColumnRole::kUtilityLabel, 2},
                                      {"c", ColumnRole::kSensitiveLabel, 2}})
                   .ok());
  EXPECT_FALSE(DatasetSchema::Create({{"x"}, {"c", ColumnRole::kSensitiveLabel, 2}}).ok());
  EXPECT_FALSE(DatasetSchema::Create({{"x"},
                                      {"u", ColumnRole::kUtilityLabel, 0},
                                      {"c", ColumnRole::kSensitiveLabel, 2}})
                   .ok());
  EXPECT_FALSE(DatasetSchema::Create({{"x"},
                                      {"x"},
                                      {"u", ColumnRole::kUtilityLabel, 2},
                                      {"c", ColumnRole::kSensitiveLabel, 2}})
                   .ok());
  const DatasetSchema s = NumericSchema(2);
  EXPECT_EQ(s.index_of("x1"), 1);
  EXPECT_EQ(s.index_of("nope"), -1);
  EXPECT_EQ(s.utility_index(), 2);
  EXPECT_EQ(s.numeric_feature_indices(), (std::vector<int>{0, 1}));
}

TEST(TableTest, RejectsBadValues) {
  Eigen::MatrixXd data(1, 3);
  data << 0.5, 2, 0;
  EXPECT_FALSE(SampleTable::Create(NumericSchema(1), data).ok());
  data << NAN, 1, 0;
  EXPECT_FALSE(SampleTable::Create(NumericSchema(1), data).ok());
  EXPECT_FALSE(SampleTable::Create(NumericSchema(2), data).ok());
}

TEST(TableTest, SubsetAndLabels) {
  const SampleTable t = SeparableTable(10, 1);
  const SampleTable s = t.Subset({3, 7});
  EXPECT_EQ(s.rows(), 2);
  EXPECT_EQ(s.data().row(1), t.data().row(7));
  EXPECT_EQ(s.labels(ColumnRole::kUtilityLabel)(0), static_cast<int>(t.data()(3, 1)));
}

// Classifier.

TEST(SoftmaxTest, SeparableDataIsLearned) {
  const SampleTable train = SeparableTable(300, 2), test = SeparableTable(300, 3);
  const SoftmaxClassifier clf = *TrainSoftmax(train, ColumnRole::kUtilityLabel);
  EXPECT_GE(Accuracy(clf, test), 0.95);
}

TEST(SoftmaxTest, LossNonIncreasingAndDeterministic) {
  const SampleTable t = StructuredTable(500, 4);
  const SoftmaxClassifier a = *TrainSoftmax(t, ColumnRole::kSensitiveLabel);
  const SoftmaxClassifier b = *TrainSoftmax(t, ColumnRole::kSensitiveLabel);
  EXPECT_EQ(a.weights(), b.weights());
  const std::vector<double>& h = a.loss_history();
  ASSERT_GT(h.size(), 1u);
  for (std::size_t i = 1; i < h.size(); ++i) ASSERT_LE(h[i], h[i - 1]);
}

TEST(SoftmaxTest, ShuffledLabelsNearChance) {
  const SampleTable t = StructuredTable(2000, 5);
  Eigen::MatrixXd data = t.data();
  std::vector<Eigen::Index> perm(data.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(6));
  const Eigen::VectorXd col = data.col(3);
  for (Eigen::Index r = 0; r < data.rows(); ++r) data(r, 3) = col(perm[r]);
  const SampleTable shuffled = *SampleTable::Create(t.schema(), data);
  const auto [train, test] = SplitRows(shuffled.rows(), 0.7, 1);
  const SoftmaxClassifier clf =
      *TrainSoftmax(shuffled.Subset(train), ColumnRole::kUtilityLabel);
  EXPECT_NEAR(Accuracy(clf, shuffled.Subset(test)), 0.5, 0.1);
}

TEST(SoftmaxTest, SingleClassTarget) {
  Eigen::MatrixXd data(3, 3);
  data << 1, 0, 0, 2, 0, 1, 3, 0, 0;
  const SampleTable t = *SampleTable::Create(NumericSchema(1), data);
  EXPECT_EQ(ErrorKindOf(TrainSoftmax(t, ColumnRole::kUtilityLabel)),
            ErrorKind::kSingleClassTarget);
  EXPECT_EQ(ErrorKindOf(TrainSoftmax(t, ColumnRole::kFeature)), ErrorKind::kInvalidArgument);
}

TEST(SoftmaxTest, TrainAccuracyNotFarBelowEvaluation) {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const SampleTable t = StructuredTable(1000, seed);
    const auto [train_rows, test_rows] = SplitRows(t.rows(), 0.7, seed);
    const SampleTable train = t.Subset(train_rows), test = t.Subset(test_rows);
    for (ColumnRole role : {ColumnRole::kUtilityLabel, ColumnRole::kSensitiveLabel}) {
      const SoftmaxClassifier clf = *TrainSoftmax(train, role);
      EXPECT_GE(Accuracy(clf, train), Accuracy(clf, test) - 0.15);
    }
  }
}

TEST(SoftmaxTest, CategoricalFeaturesOneHot) {
  const SampleTable t = *SampleDiscrete(*GenDiscrete({4, 2, 2, 0.9, 0.0}), 800, 3);
  const SoftmaxClassifier clf = *TrainSoftmax(t, ColumnRole::kUtilityLabel);
  EXPECT_EQ(clf.Encode(t).cols(), 4 + 1);  // one-hot plus bias
  EXPECT_GT(Accuracy(clf, t), 0.85);
}

// Generators.

TEST(GenDiscreteTest, ZeroStrengthIsProduct) {
  const DiscreteJoint j = *GenDiscrete({4, 3, 2, 0.0, 0.0});
  EXPECT_LT(MutualInformation(j.MarginalXU()), 1e-3);
  EXPECT_LT(MutualInformation(j.MarginalXS()), 1e-3);
}

TEST(GenDiscreteTest, FullStrengthCopiesSensitive) {
  const DiscreteJoint j = *GenDiscrete({4, 2, 2, 0.0, 1.0});
  const double h_s = Entropy(j.MarginalS());
  EXPECT_NEAR(MutualInformation(j.MarginalXS()), std::min(std::log(4.0), h_s), 1e-12);
}

TEST(GenDiscreteTest, TargetInformationReached) {
  DiscreteGenSpec spec{4, 2, 2};
  spec.target_i_xu = 0.3;
  spec.target_i_xs = 0.1;
  spec.seed = 3;
  const DiscreteJoint j = *GenDiscrete(spec);
  EXPECT_NEAR(MutualInformation(j.MarginalXU()), 0.3, 0.045);
  EXPECT_NEAR(MutualInformation(j.MarginalXS()), 0.1, 0.015);
}

TEST(GenDiscreteTest, UnreachableTarget) {
  DiscreteGenSpec spec{4, 2, 2};
  spec.target_i_xu = 1.0;  // above ln 2
  EXPECT_EQ(ErrorKindOf(GenDiscrete(spec)), ErrorKind::kUnreachableTarget);
  spec.target_i_xu = -0.1;
  EXPECT_EQ(ErrorKindOf(GenDiscrete(spec)), ErrorKind::kInvalidArgument);
}

TEST(GenGaussianTest, ExplicitLoadings) {
  const GaussianModel m = CorrelatedGaussian();
  EXPECT_EQ(m.dim_x(), 2);
  // Cov(X) = A A^T + noise I.
  EXPECT_NEAR(m.cov()(0, 0), 1 + 0.64 + 0.5, 1e-15);
  EXPECT_NEAR(m.cov()(0, 1), 0.3 + 0.96, 1e-15);
  EXPECT_NEAR(m.cov()(0, 2), 1.0, 1e-15);
  EXPECT_NEAR(m.cov()(1, 3), 1.2, 1e-15);
}

TEST(GenGaussianTest, RejectsBadLoadings) {
  GaussianGenSpec spec;
  spec.loadings = Eigen::MatrixXd::Ones(3, 2);
  EXPECT_EQ(ErrorKindOf(GenGaussian(spec)), ErrorKind::kDimensionMismatch);
}

TEST(SampleGaussianTest, MomentsMatchModel) {
  const GaussianModel m = CorrelatedGaussian();
  const Eigen::Index n = 20000;
  const Eigen::MatrixXd x = *SampleGaussian(m, n, 1);
  const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centred.transpose() * centred / (n - 1);
  EXPECT_LT((cov - m.cov()).cwiseAbs().maxCoeff(), 5.0 / std::sqrt(static_cast<double>(n)) *
                                                       m.cov().cwiseAbs().maxCoeff());
}

TEST(SampleGaussianTest, IdentityVarianceAndCorrelation) {
  Eigen::Matrix3d cov;
  cov << 1, 0.6, 0, 0.6, 1, 0, 0, 0, 1;
  const GaussianModel m = *GaussianModel::Create(1, 1, 1, Eigen::Vector3d::Zero(), cov);
  const Eigen::MatrixXd x = *SampleGaussian(m, 1000, 2);
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const Eigen::VectorXd var = c.colwise().squaredNorm() / 999.0;
  for (int j = 0; j < 3; ++j) {
    EXPECT_GE(var(j), 0.8);
    EXPECT_LE(var(j), 1.2);
  }
  EXPECT_NEAR(c.col(0).dot(c.col(1)) / 999.0 / std::sqrt(var(0) * var(1)), 0.6, 0.1);
  EXPECT_EQ(*SampleGaussian(m, 50, 2), *SampleGaussian(m, 50, 2));
}

TEST(SampleGaussianTableTest, LabelsAreThresholds) {
  const GaussianModel m = StructuredGaussian();
  const SampleTable t = *SampleGaussianTable(m, 300, 4);
  EXPECT_EQ(t.schema().num_columns(), 5);
  EXPECT_EQ(t.schema().column(3).name, "u");
  EXPECT_EQ(t.schema().column(4).name, "c");
  const Eigen::VectorXi u = t.labels(ColumnRole::kUtilityLabel);
  EXPECT_GT(u.sum(), 100);
  EXPECT_LT(u.sum(), 200);
  EXPECT_EQ(SampleGaussianTable(m, 300, 4)->data(), t.data());
}

TEST(SampleDiscreteTest, FrequenciesMatchJoint) {
  const DiscreteJoint j = BenchmarkJoint422();
  const Eigen::Index n = 40000;
  const SampleTable t = *SampleDiscrete(j, n, 5);
  std::map<std::vector<int>, double> freq;
  for (Eigen::Index r = 0; r < n; ++r) {
    freq[{static_cast<int>(t.data()(r, 0)), static_cast<int>(t.data()(r, 1)),
          static_cast<int>(t.data()(r, 2))}] += 1.0 / n;
  }
  for (int x = 0; x < 4; ++x)
    for (int u = 0; u < 2; ++u)
      for (int s = 0; s < 2; ++s) EXPECT_NEAR((freq[{x, u, s}]), j(x, u, s), 0.01);
}

// Baselines.

TEST(QuantileCodesTest, TiesShareCodeAndCodesAreDense) {
  Eigen::VectorXd v(8);
  v << 5, 1, 1, 1, 1, 2, 3, 4;
  const Eigen::VectorXi c = QuantileCodes(v, 4);
  EXPECT_EQ(c(1), c(2));
  EXPECT_EQ(c(2), c(4));
  EXPECT_EQ(c.minCoeff(), 0);
  EXPECT_LT(c.maxCoeff(), 4);
  EXPECT_GT(c(0), c(7) - 1);
  EXPECT_EQ(QuantileCodes(v, 1), Eigen::VectorXi::Zero(8));
}

TEST(MaskTest, NothingIsIdentity) {
  const SampleTable t = StructuredTable(100, 1);
  EXPECT_EQ(MaskColumns(t, {})->data(), t.data());
}

TEST(MaskTest, MeanAndModeFill) {
  const SampleTable t = StructuredTable(100, 1);
  const SampleTable m = *MaskColumns(t, {"x1"});
  EXPECT_NEAR(m.data()(17, 1), t.data().col(1).mean(), 1e-15);
  EXPECT_EQ(m.data().col(0), t.data().col(0));
  const SampleTable d = *SampleDiscrete(BenchmarkJoint422(), 500, 2);
  const SampleTable dm = *MaskColumns(d, {"x"});
  std::vector<int> counts(4, 0);
  for (Eigen::Index r = 0; r < d.rows(); ++r) ++counts[static_cast<int>(d.data()(r, 0))];
  const int mode = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                    counts.begin());
  EXPECT_EQ(dm.data()(0, 0), mode);
}

TEST(MaskTest, RejectsLabelsAndUnknownNames) {
  const SampleTable t = StructuredTable(10, 1);
  EXPECT_FALSE(MaskColumns(t, {"u"}).ok());
  EXPECT_FALSE(MaskColumns(t, {"zz"}).ok());
}

TEST(MaskTest, MaskAllDropsToChance) {
  const SampleTable t = StructuredTable(1000, 2);
  const ScoreCard card = *Score(t, *MaskColumns(t, {"x0", "x1", "x2"}), {.seed = 1});
  EXPECT_NEAR(card.attacker_accuracy, card.chance, 0.05);
  EXPECT_LT(card.utility_accuracy, 0.6);
  EXPECT_DOUBLE_EQ(card.privacy_score, 1.0);
}

TEST(MaskTest, SensitiveColumnLowersAttacker) {
  const SampleTable t = StructuredTable(2000, 3);
  const ScoreCard clean = *Score(t, t, {.seed = 2});
  const ScoreCard masked = *Score(t, *MaskColumns(t, {"x1"}), {.seed = 2});
  EXPECT_LT(masked.attacker_accuracy, clean.attacker_accuracy - 0.05);
  RecordProperty("attacker_clean", std::to_string(clean.attacker_accuracy));
  RecordProperty("attacker_masked", std::to_string(masked.attacker_accuracy));
}

TEST(KAnonymityTest, KOneIsIdentity) {
  const SampleTable t = StructuredTable(50, 1);
  EXPECT_EQ(KAnonymize(t, 1)->data(), t.data());
}

TEST(KAnonymityTest, KEqualsNGeneralizesFully) {
  const SampleTable t = StructuredTable(60, 2);
  const SampleTable a = *KAnonymize(t, 60);
  for (Eigen::Index r = 1; r < a.rows(); ++r) {
    ASSERT_EQ(a.data().row(r).head(3), a.data().row(0).head(3));
  }
}

TEST(KAnonymityTest, FiveOnTwoHundredRowsAudited) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SampleTable t = StructuredTable(200, seed);
    const SampleTable a = *KAnonymize(t, 5);
    EXPECT_GE(SmallestGroup(a), 5);
    EXPECT_EQ(a.labels(ColumnRole::kSensitiveLabel), t.labels(ColumnRole::kSensitiveLabel));
  }
  const SampleTable d = *SampleDiscrete(BenchmarkJoint422(), 200, 4);
  EXPECT_GE(SmallestGroup(*KAnonymize(d, 5)), 5);
}

TEST(KAnonymityTest, TooFewRows) {
  EXPECT_EQ(ErrorKindOf(KAnonymize(StructuredTable(4, 1), 5)), ErrorKind::kCannotAnonymize);
  EXPECT_EQ(ErrorKindOf(KAnonymize(StructuredTable(4, 1), 0)), ErrorKind::kInvalidArgument);
}

// Scoring.

TEST(SplitTest, SeededPartition) {
  const auto [train, test] = SplitRows(100, 0.7, 3);
  EXPECT_EQ(train.size(), 70u);
  EXPECT_EQ(test.size(), 30u);
  std::set<Eigen::Index> all(train.begin(), train.end());
  all.insert(test.begin(), test.end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_EQ(SplitRows(100, 0.7, 3).first, train);
  EXPECT_NE(SplitRows(100, 0.7, 4).first, train);
}

TEST(PluginMiTest, MatchesCountingOracle) {
  std::mt19937_64 rng(9);
  Eigen::VectorXi a(500), b(500);
  for (int i = 0; i < 500; ++i) {
    a(i) = static_cast<int>(rng() % 4);
    b(i) = (a(i) + static_cast<int>(rng() % 3)) % 3;
  }
  EXPECT_NEAR(PluginMi(a, b), PlugInMiOracle(a, b), 1e-12);
  EXPECT_NEAR(PluginMi(a, a), PlugInMiOracle(a, a), 1e-12);
}

TEST(PluginMiTest, IndependentAndDuplicated) {
  Eigen::VectorXi a(4), b(4);
  a << 0, 0, 1, 1;
  b << 0, 1, 0, 1;
  EXPECT_NEAR(PluginMi(a, b), 0.0, 1e-15);
  EXPECT_NEAR(PluginMi(a, a), std::log(2.0), 1e-15);
}

TEST(EqualWidthTest, BinsSpanRange) {
  Eigen::VectorXd v(5);
  v << 0, 0.24, 0.5, 0.76, 1.0;
  const Eigen::VectorXi c = EqualWidthCodes(v, 4);
  EXPECT_EQ(c, (Eigen::VectorXi(5) << 0, 0, 2, 3, 3).finished());
  EXPECT_EQ(EqualWidthCodes(Eigen::VectorXd::Constant(3, 2.0), 4), Eigen::VectorXi::Zero(3));
}

TEST(PrivacyScoreTest, ClippedRescaling) {
  EXPECT_EQ(PrivacyScore(0.5, 0.5), 1.0);
  EXPECT_EQ(PrivacyScore(0.4, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(PrivacyScore(0.75, 0.5), 0.5);
  EXPECT_EQ(PrivacyScore(1.0, 0.5), 0.0);
}

TEST(ScoreTest, CleanTableHasNoReduction) {
  const SampleTable t = StructuredTable(600, 4);
  const ScoreCard a = *Score(t, t, {.seed = 3});
  EXPECT_EQ(a.mi_reduction, 0.0);
  EXPECT_LT(a.privacy_score, 0.6);
  const ScoreCard b = *Score(t, t, {.seed = 3});
  EXPECT_EQ(a.utility_score, b.utility_score);
  EXPECT_EQ(a.privacy_score, b.privacy_score);
}

TEST(ScoreTest, NoiseRaisesPrivacyAndLowersUtility) {
  const SampleTable t = StructuredTable(2000, 5);
  const SampleTable noisy = *ApplyNoise(t, NoiseSpec{Eigen::Vector3d::Constant(4.0)}, 6);
  const ScoreCard clean = *Score(t, t, {.seed = 7});
  const ScoreCard card = *Score(t, noisy, {.seed = 7});
  EXPECT_GT(card.privacy_score, clean.privacy_score);
  EXPECT_LT(card.utility_score, clean.utility_score);
  EXPECT_GT(card.mi_reduction, 0.0);
}

TEST(ScoreTest, RejectsChangedLabelsAndRows) {
  const SampleTable t = StructuredTable(100, 6);
  EXPECT_EQ(ErrorKindOf(Score(t, t.Subset({0, 1, 2}))), ErrorKind::kDimensionMismatch);
  Eigen::MatrixXd data = t.data();
  data(0, 3) = 1 - data(0, 3);
  EXPECT_EQ(ErrorKindOf(Score(t, *SampleTable::Create(t.schema(), data))),
            ErrorKind::kInvalidArgument);
}

// Comparison.

TEST(MethodTest, NamesRoundTrip) {
  for (Method m : {Method::kIdentity, Method::kMask, Method::kKAnonymity, Method::kNoise,
                   Method::kGrad, Method::kEm}) {
    EXPECT_EQ(*ParseMethod(MethodName(m)), m);
  }
  EXPECT_FALSE(ParseMethod("magic").ok());
}

TEST(EstimateJointTest, CountsMatchRows) {
  const SampleTable t = StructuredTable(500, 7);
  const EmpiricalJoint e = *EstimateJoint(t, 3);
  EXPECT_EQ(e.x_codes.size(), 500);
  EXPECT_EQ(e.joint.nx(), e.x_codes.maxCoeff() + 1);
  EXPECT_LE(e.joint.nx(), 27);
  EXPECT_NEAR(e.joint.table().sum(), 1.0, 1e-12);
  double manual = 0;
  for (Eigen::Index r = 0; r < 500; ++r) manual += e.x_codes(r) == 0 ? 1.0 / 500 : 0.0;
  EXPECT_NEAR(e.joint.MarginalX()(0), manual, 1e-12);
}

TEST(FitGaussianTest, RecoversDimensions) {
  const SampleTable t = StructuredTable(3000, 8);
  const GaussianModel m = *FitGaussian(t);
  EXPECT_EQ(m.dim_x(), 3);
  EXPECT_EQ(m.dim_u(), 1);
  EXPECT_EQ(m.dim_s(), 1);
  EXPECT_NEAR(m.cov()(0, 0), 5.0, 0.5);
}

TEST(ReleaseTest, IdentityChannelCopiesCodes) {
  const SampleTable t = StructuredTable(100, 9);
  const EmpiricalJoint e = *EstimateJoint(t, 2);
  const SampleTable r = *ReleaseThroughChannel(t, e.x_codes, Channel::Identity(e.joint.nx()), 1);
  EXPECT_EQ(r.schema().column(0).name, "y");
  for (Eigen::Index i = 0; i < 100; ++i) ASSERT_EQ(r.data()(i, 0), e.x_codes(i));
  EXPECT_EQ(r.labels(ColumnRole::kUtilityLabel), t.labels(ColumnRole::kUtilityLabel));
}

CompareOptions SmallOptions() {
  CompareOptions o;
  o.seed = 3;
  o.mask_columns = {"x1"};
  o.tradeoff.lambda = 5;
  o.tradeoff.seed = 3;
  return o;
}

TEST(CompareTest, SingleMethodGivesOneRow) {
  const auto rows = *Compare({Method::kIdentity}, StructuredTable(300, 1), SmallOptions());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].status.ok());
}

TEST(CompareTest, EmptyListIsError) {
  EXPECT_FALSE(Compare({}, StructuredTable(50, 1), SmallOptions()).ok());
}

TEST(CompareTest, IdentityBeatsFullMaskOnUtility) {
  CompareOptions o = SmallOptions();
  o.mask_columns.clear();
  const auto rows = *Compare({Method::kIdentity, Method::kMask}, StructuredTable(1000, 2), o);
  EXPECT_GT(rows[0].card.utility_score, rows[1].card.utility_score);
  EXPECT_LT(rows[0].card.privacy_score, rows[1].card.privacy_score);
}

TEST(CompareTest, AllMethodsProduceCards) {
  const auto rows = *Compare({Method::kIdentity, Method::kMask, Method::kKAnonymity,
                              Method::kNoise, Method::kGrad, Method::kEm},
                             StructuredTable(600, 3), SmallOptions());
  ASSERT_EQ(rows.size(), 6u);
  for (const CompareRow& row : rows) {
    EXPECT_TRUE(row.status.ok()) << MethodName(row.method) << ": " << row.status;
    EXPECT_GE(row.card.utility_score, 0.0);
    EXPECT_LE(row.card.privacy_score, 1.0);
  }
}

TEST(CompareTest, FailingMethodCarriesStatus) {
  const SampleTable d = *SampleDiscrete(BenchmarkJoint422(), 200, 4);
  const auto rows = *Compare({Method::kIdentity, Method::kNoise}, d, SmallOptions());
  EXPECT_TRUE(rows[0].status.ok());
  EXPECT_FALSE(rows[1].status.ok());
}

TEST(CompareTest, Deterministic) {
  const SampleTable t = StructuredTable(400, 4);
  const auto a = *Compare({Method::kNoise, Method::kGrad}, t, SmallOptions());
  const auto b = *Compare({Method::kNoise, Method::kGrad}, t, SmallOptions());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].card.utility_score, b[i].card.utility_score);
    EXPECT_EQ(a[i].card.privacy_score, b[i].card.privacy_score);
    EXPECT_EQ(a[i].card.mi_reduction, b[i].card.mi_reduction);
  }
}

}  // namespace
}  // namespace privfunnel::eval
