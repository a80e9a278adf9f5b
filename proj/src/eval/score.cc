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

#include "privfunnel/eval/score.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>

#include "privfunnel/status.h"

namespace privfunnel::eval {

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> SplitRows(
    Eigen::Index n, double train_fraction, std::uint64_t seed) {
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<Eigen::Index> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  Eigen::Index cut = static_cast<Eigen::Index>(std::llround(train_fraction * n));
  cut = std::clamp<Eigen::Index>(cut, 1, std::max<Eigen::Index>(1, n - 1));
  std::vector<Eigen::Index> train(order.begin(), order.begin() + cut);
  std::vector<Eigen::Index> test(order.begin() + cut, order.end());
  return {std::move(train), std::move(test)};
}

Eigen::VectorXi EqualWidthCodes(const Eigen::VectorXd& values, int bins) {
  Eigen::VectorXi codes = Eigen::VectorXi::Zero(values.size());
  if (values.size() == 0 || bins <= 1) return codes;
  const double lo = values.minCoeff(), hi = values.maxCoeff();
  if (!(hi > lo)) return codes;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const int c = static_cast<int>(std::floor((values(i) - lo) / (hi - lo) * bins));
    codes(i) = std::clamp(c, 0, bins - 1);
  }
  return codes;
}

double PluginMi(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  const Eigen::Index n = a.size();
  if (n == 0 || b.size() != n) return 0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  for (Eigen::Index i = 0; i < n; ++i) {
    joint[{a(i), b(i)}] += 1;
    pa[a(i)] += 1;
    pb[b(i)] += 1;
  }
  const double dn = static_cast<double>(n);
  double mi = 0;
  for (const auto& [key, count] : joint) {
    mi += count / dn * std::log(count * dn / (pa[key.first] * pb[key.second]));
  }
  return std::max(0.0, mi);
}

double FeatureLeakage(const SampleTable& table, int bins) {
  const DatasetSchema& schema = table.schema();
  const Eigen::VectorXi c = table.labels(ColumnRole::kSensitiveLabel);
  double total = 0;
  for (int f : schema.feature_indices()) {
    const Eigen::VectorXd col = table.column(f);
    const Eigen::VectorXi codes =
        schema.column(f).categorical() ? col.cast<int>().eval() : EqualWidthCodes(col, bins);
    total += PluginMi(codes, c);
  }
  return total;
}

double PrivacyScore(double attacker_accuracy, double chance) {
  if (attacker_accuracy <= chance || chance >= 1) return 1.0;
  return std::clamp(1.0 - (attacker_accuracy - chance) / (1.0 - chance), 0.0, 1.0);
}

absl::StatusOr<ScoreCard> Score(const SampleTable& clean, const SampleTable& transformed,
                                const ScoreOptions& options) {
  if (clean.rows() != transformed.rows()) {
    return MakeError(ErrorKind::kDimensionMismatch, "tables differ in row count");
  }
  for (ColumnRole role : {ColumnRole::kUtilityLabel, ColumnRole::kSensitiveLabel}) {
    const int a = clean.schema().label_index(role);
    const int b = transformed.schema().label_index(role);
    if (!(clean.schema().column(a) == transformed.schema().column(b)) ||
        clean.labels(role) != transformed.labels(role)) {
      return MakeError(ErrorKind::kInvalidArgument, "label columns must be unchanged");
    }
  }
  if (!(options.train_fraction > 0 && options.train_fraction < 1)) {
    return MakeError(ErrorKind::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  const auto [train_rows, test_rows] =
      SplitRows(transformed.rows(), options.train_fraction, options.seed);
  const SampleTable train = transformed.Subset(train_rows);
  const SampleTable test = transformed.Subset(test_rows);

  PF_ASSIGN_OR_RETURN(const SoftmaxClassifier util,
                      TrainSoftmax(train, ColumnRole::kUtilityLabel, options.hyper));
  PF_ASSIGN_OR_RETURN(const SoftmaxClassifier attacker,
                      TrainSoftmax(train, ColumnRole::kSensitiveLabel, options.hyper));

  ScoreCard card;
  card.utility_accuracy = Accuracy(util, test);
  card.attacker_accuracy = Accuracy(attacker, test);
  const Eigen::VectorXi c = test.labels(ColumnRole::kSensitiveLabel);
  std::map<int, long> counts;
  for (Eigen::Index i = 0; i < c.size(); ++i) ++counts[c(i)];
  long top = 0;
  for (const auto& [unused, count] : counts) top = std::max(top, count);
  card.chance = c.size() > 0 ? static_cast<double>(top) / c.size() : 0.0;
  card.utility_score = card.utility_accuracy;
  card.privacy_score = PrivacyScore(card.attacker_accuracy, card.chance);
  card.mi_reduction = std::max(
      0.0, FeatureLeakage(clean, options.mi_bins) - FeatureLeakage(transformed, options.mi_bins));
  return card;
}

}  // namespace privfunnel::eval
