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

#ifndef PRIVFUNNEL_EVAL_SOFTMAX_H_
#define PRIVFUNNEL_EVAL_SOFTMAX_H_

#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/eval/table.h"

namespace privfunnel::eval {

struct SoftmaxHyper {
  int epochs = 300;
  double l2 = 1e-4;
  double alpha0 = 1.0;
};

// Multinomial logistic regression over the feature columns of a table.
// Numeric features are standardized with training statistics; categorical
// features are one-hot encoded.
class SoftmaxClassifier {
 public:
  ColumnRole target() const { return target_; }
  int num_classes() const { return static_cast<int>(weights_.cols()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  // Squared norm of the non-bias weights.
  double WeightSquaredNorm() const;
  const std::vector<double>& loss_history() const { return loss_history_; }

  Eigen::MatrixXd Encode(const SampleTable& table) const;
  Eigen::MatrixXd Probabilities(const SampleTable& table) const;
  Eigen::VectorXi Predict(const SampleTable& table) const;

 private:
  friend absl::StatusOr<SoftmaxClassifier> TrainSoftmax(const SampleTable&, ColumnRole,
                                                         const SoftmaxHyper&);
  ColumnRole target_ = ColumnRole::kUtilityLabel;
  std::vector<int> feature_columns_;
  std::vector<int> cardinalities_;
  std::vector<double> means_;
  std::vector<double> scales_;
  Eigen::MatrixXd weights_;  // (encoded dim + 1) x classes, bias last
  std::vector<double> loss_history_;
};

// Full-batch gradient descent with backtracking; the training loss never
// increases from one epoch to the next. SingleClassTarget when fewer than
// two classes occur in the training table.
absl::StatusOr<SoftmaxClassifier> TrainSoftmax(const SampleTable& table, ColumnRole target,
                                               const SoftmaxHyper& hyper = {});

double Accuracy(const SoftmaxClassifier& clf, const SampleTable& table);

// Mean of log q(target | features) over the rows of `table`.
double MeanLogLikelihood(const SoftmaxClassifier& clf, const SampleTable& table);

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_SOFTMAX_H_
