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

#include "privfunnel/eval/softmax.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "privfunnel/core_prob.h"
#include "privfunnel/status.h"

namespace privfunnel::eval {
namespace {

double CrossEntropy(const Eigen::MatrixXd& design, const Eigen::VectorXi& y,
                    const Eigen::MatrixXd& w, double l2) {
  const Eigen::MatrixXd logits = design * w;
  double loss = 0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double peak = logits.row(r).maxCoeff();
    const double lse = peak + std::log((logits.row(r).array() - peak).exp().sum());
    loss += lse - logits(r, y(r));
  }
  loss /= static_cast<double>(logits.rows());
  return loss + l2 * w.topRows(w.rows() - 1).squaredNorm();
}

}  // namespace

double SoftmaxClassifier::WeightSquaredNorm() const {
  return weights_.topRows(weights_.rows() - 1).squaredNorm();
}

Eigen::MatrixXd SoftmaxClassifier::Encode(const SampleTable& table) const {
  Eigen::Index dim = 1;
  for (int card : cardinalities_) dim += card > 0 ? card : 1;
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(table.rows(), dim);
  Eigen::Index offset = 0;
  for (std::size_t f = 0; f < feature_columns_.size(); ++f) {
    const Eigen::VectorXd col = table.data().col(feature_columns_[f]);
    const int card = cardinalities_[f];
    if (card > 0) {
      for (Eigen::Index r = 0; r < table.rows(); ++r) {
        const int code = static_cast<int>(col(r));
        if (code >= 0 && code < card) design(r, offset + code) = 1.0;
      }
      offset += card;
    } else {
      design.col(offset) = (col.array() - means_[f]) / scales_[f];
      offset += 1;
    }
  }
  design.col(dim - 1).setOnes();
  return design;
}

Eigen::MatrixXd SoftmaxClassifier::Probabilities(const SampleTable& table) const {
  return RowSoftmax((Encode(table) * weights_).eval());
}

Eigen::VectorXi SoftmaxClassifier::Predict(const SampleTable& table) const {
  const Eigen::MatrixXd p = Probabilities(table);
  Eigen::VectorXi out(p.rows());
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Eigen::Index best = 0;
    p.row(r).maxCoeff(&best);
    out(r) = static_cast<int>(best);
  }
  return out;
}

absl::StatusOr<SoftmaxClassifier> TrainSoftmax(const SampleTable& table, ColumnRole target,
                                               const SoftmaxHyper& hyper) {
  if (target == ColumnRole::kFeature) {
    return MakeError(ErrorKind::kInvalidArgument, "target must be a label column");
  }
  const DatasetSchema& schema = table.schema();
  const Eigen::VectorXi y = table.labels(target);
  std::set<int> present(y.data(), y.data() + y.size());
  if (present.size() < 2) {
    return MakeError(ErrorKind::kSingleClassTarget,
                     "training target has fewer than two classes");
  }

  SoftmaxClassifier clf;
  clf.target_ = target;
  clf.feature_columns_ = schema.feature_indices();
  for (int c : clf.feature_columns_) {
    const int card = schema.column(c).cardinality;
    clf.cardinalities_.push_back(card);
    const Eigen::VectorXd col = table.data().col(c);
    const double mean = card > 0 ? 0.0 : col.mean();
    double scale = 1.0;
    if (card == 0 && col.size() > 1) {
      const double var = (col.array() - mean).square().mean();
      if (var > 1e-24) scale = std::sqrt(var);
    }
    clf.means_.push_back(mean);
    clf.scales_.push_back(scale);
  }
  const int classes = schema.column(schema.label_index(target)).cardinality;
  const Eigen::MatrixXd design = clf.Encode(table);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(design.cols(), classes);
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(design.rows(), classes);
  for (Eigen::Index r = 0; r < y.size(); ++r) onehot(r, y(r)) = 1.0;

  const double n = static_cast<double>(design.rows());
  double loss = CrossEntropy(design, y, w, hyper.l2);
  clf.loss_history_.push_back(loss);
  double alpha = hyper.alpha0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const Eigen::MatrixXd p = RowSoftmax((design * w).eval());
    Eigen::MatrixXd grad = design.transpose() * (p - onehot) / n;
    grad.topRows(grad.rows() - 1) += 2.0 * hyper.l2 * w.topRows(w.rows() - 1);
    if (grad.norm() < 1e-12) break;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Eigen::MatrixXd cand = w - alpha * grad;
      const double cand_loss = CrossEntropy(design, y, cand, hyper.l2);
      if (std::isfinite(cand_loss) && cand_loss <= loss) {
        w = cand;
        loss = cand_loss;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    clf.loss_history_.push_back(loss);
    if (!accepted) break;
    alpha = std::min(alpha * 1.1, 100.0 * hyper.alpha0);
  }
  clf.weights_ = std::move(w);
  return clf;
}

double Accuracy(const SoftmaxClassifier& clf, const SampleTable& table) {
  if (table.rows() == 0) return 0.0;
  const Eigen::VectorXi pred = clf.Predict(table);
  const Eigen::VectorXi truth = table.labels(clf.target());
  return static_cast<double>((pred.array() == truth.array()).count()) /
         static_cast<double>(table.rows());
}

double MeanLogLikelihood(const SoftmaxClassifier& clf, const SampleTable& table) {
  if (table.rows() == 0) return 0.0;
  const Eigen::MatrixXd logits = clf.Encode(table) * clf.weights();
  const Eigen::VectorXi truth = table.labels(clf.target());
  double total = 0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double peak = logits.row(r).maxCoeff();
    const double lse = peak + std::log((logits.row(r).array() - peak).exp().sum());
    const int label = truth(r);
    total += (label >= 0 && label < logits.cols()) ? logits(r, label) - lse
                                                   : -std::numeric_limits<double>::infinity();
  }
  return total / static_cast<double>(logits.rows());
}

}  // namespace privfunnel::eval
