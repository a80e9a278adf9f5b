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

// Utility and privacy scoring of a transformed table against its clean
// source.
//
//   U = accuracy of a utility classifier trained and tested on the
//       transformed table (seeded 70/30 split).
//   S = 1 - (a - chance) / (1 - chance), clipped to [0, 1], where a is the
//       attacker's sensitive-label accuracy on the same split and chance is
//       the majority-class rate of the test labels.
//   mi_reduction = sum_f I(f; c) on the clean table minus the same sum on
//       the transformed table, with numeric features cut into 16
//       equal-width bins, floored at 0.

#ifndef PRIVFUNNEL_EVAL_SCORE_H_
#define PRIVFUNNEL_EVAL_SCORE_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/eval/softmax.h"
#include "privfunnel/eval/table.h"

namespace privfunnel::eval {

struct ScoreCard {
  double utility_score = 0;
  double privacy_score = 0;
  double attacker_accuracy = 0;
  double utility_accuracy = 0;
  double chance = 0;
  double mi_reduction = 0;  // nats
};

struct ScoreOptions {
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  int mi_bins = 16;
  SoftmaxHyper hyper;
};

// Seeded shuffle split into (train, test) row indices.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> SplitRows(
    Eigen::Index n, double train_fraction, std::uint64_t seed);

Eigen::VectorXi EqualWidthCodes(const Eigen::VectorXd& values, int bins);

// Plug-in mutual information of two code vectors, in nats.
double PluginMi(const Eigen::VectorXi& a, const Eigen::VectorXi& b);

// Sum over features of I(feature; sensitive label).
double FeatureLeakage(const SampleTable& table, int bins);

// Clipped above-chance rescaling of an attacker accuracy.
double PrivacyScore(double attacker_accuracy, double chance);

// `transformed` may carry different feature columns but must keep the row
// count and both label columns of `clean`.
absl::StatusOr<ScoreCard> Score(const SampleTable& clean, const SampleTable& transformed,
                                const ScoreOptions& options = {});

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_SCORE_H_
