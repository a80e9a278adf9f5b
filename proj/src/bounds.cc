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
#include <utility>

#include "absl/strings/str_cat.h"

namespace privfunnel {

absl::StatusOr<VariationalDecoder> VariationalDecoder::FromLogits(Eigen::MatrixXd logits) {
  if (logits.rows() < 1 || logits.cols() < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "decoder needs |U|, |Y| >= 1");
  }
  if (!logits.allFinite()) {
    return MakeError(ErrorKind::kInvalidArgument, "decoder logits must be finite");
  }
  return VariationalDecoder(std::move(logits));
}

absl::StatusOr<VariationalDecoder> VariationalDecoder::FromProbabilities(
    const Eigen::MatrixXd& probs) {
  Eigen::MatrixXd logits(probs.rows(), probs.cols());
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    PF_RETURN_IF_ERROR(ValidateProbabilities(probs.row(r), 1e-10));
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      logits(r, c) = probs(r, c) > 0 ? std::log(probs(r, c)) : -kDecoderLogitClamp;
    }
  }
  return FromLogits(std::move(logits));
}

VariationalDecoder VariationalDecoder::Uniform(Eigen::Index nu, Eigen::Index ny) {
  return VariationalDecoder(Eigen::MatrixXd::Zero(nu, ny));
}

Eigen::MatrixXd VariationalDecoder::ClampedLogits() const {
  return logits_.cwiseMax(-kDecoderLogitClamp).cwiseMin(kDecoderLogitClamp);
}

Eigen::MatrixXd VariationalDecoder::Probabilities() const {
  return RowSoftmax(ClampedLogits());
}

std::string_view PrivacyTermName(PrivacyTerm term) {
  return term == PrivacyTerm::kExact ? "exact" : "dpi_constant";
}

absl::StatusOr<PrivacyTerm> ParsePrivacyTerm(std::string_view name) {
  if (name == "exact") return PrivacyTerm::kExact;
  if (name == "dpi_constant") return PrivacyTerm::kDpiConstant;
  return MakeError(ErrorKind::kInvalidArgument,
                   absl::StrCat("unknown privacy term '", std::string(name), "'"));
}

absl::StatusOr<ChannelInformation> EvaluateChannel(const DiscreteJoint& j,
                                                   const Channel& ch) {
  PF_ASSIGN_OR_RETURN(const DiscreteJoint pushed, PushThroughChannel(j, ch));
  ChannelInformation info;
  info.i_yu = MutualInformation(pushed.MarginalXU());
  info.i_ys = MutualInformation(pushed.MarginalXS());
  info.i_xu = MutualInformation(j.MarginalXU());
  info.i_xs = MutualInformation(j.MarginalXS());
  info.h_y = Entropy(pushed.MarginalX());
  return info;
}

Eigen::MatrixXd ExactPosterior(const Eigen::MatrixXd& joint_yu) {
  const Eigen::Index ny = joint_yu.rows();
  const Eigen::Index nu = joint_yu.cols();
  Eigen::MatrixXd post(nu, ny);
  for (Eigen::Index u = 0; u < nu; ++u) {
    const double pu = joint_yu.col(u).sum();
    if (pu > 0) {
      post.row(u) = joint_yu.col(u).transpose() / pu;
    } else {
      post.row(u).setConstant(1.0 / static_cast<double>(ny));
    }
  }
  return post;
}

absl::StatusOr<double> UtilityLowerBound(const Eigen::MatrixXd& joint_yu,
                                         const VariationalDecoder& q) {
  if (q.input_size() != joint_yu.cols() || q.output_size() != joint_yu.rows()) {
    return MakeError(ErrorKind::kDimensionMismatch, "decoder shape does not match joint");
  }
  const Eigen::MatrixXd qp = q.Probabilities();
  double expected_log_q = 0;
  for (Eigen::Index y = 0; y < joint_yu.rows(); ++y) {
    for (Eigen::Index u = 0; u < joint_yu.cols(); ++u) {
      const double p = joint_yu(y, u);
      if (p == 0) continue;
      if (qp(u, y) == 0) {
        return MakeError(ErrorKind::kSupportMismatch,
                         absl::StrCat("q(y=", y, "|u=", u, ") = 0 under positive mass"));
      }
      expected_log_q += p * std::log(qp(u, y));
    }
  }
  const Eigen::VectorXd py = joint_yu.rowwise().sum();
  return expected_log_q + Entropy(py);
}

absl::StatusOr<double> LowerBoundViaKlDecomposition(const Eigen::MatrixXd& joint_yu,
                                                    const VariationalDecoder& q) {
  if (q.input_size() != joint_yu.cols() || q.output_size() != joint_yu.rows()) {
    return MakeError(ErrorKind::kDimensionMismatch, "decoder shape does not match joint");
  }
  const Eigen::MatrixXd post = ExactPosterior(joint_yu);
  const Eigen::MatrixXd qp = q.Probabilities();
  double expected_kl = 0;
  for (Eigen::Index u = 0; u < joint_yu.cols(); ++u) {
    const double pu = joint_yu.col(u).sum();
    if (pu == 0) continue;
    PF_ASSIGN_OR_RETURN(const double kl,
                        KlDivergence(post.row(u).transpose(), qp.row(u).transpose()));
    expected_kl += pu * kl;
  }
  return MutualInformation(joint_yu) - expected_kl;
}

double PrivacyUpperBound(const Eigen::MatrixXd& joint_xs) {
  return MutualInformation(joint_xs);
}

absl::StatusOr<ObjectiveReport> SurrogateObjective(const DiscreteJoint& j,
                                                   const Channel& ch,
                                                   const VariationalDecoder& q,
                                                   double lambda, PrivacyTerm term) {
  if (!(lambda >= 0)) {
    return MakeError(ErrorKind::kInvalidArgument, "lambda must be >= 0");
  }
  PF_ASSIGN_OR_RETURN(const DiscreteJoint pushed, PushThroughChannel(j, ch));
  ObjectiveReport report;
  report.lambda = lambda;
  const Eigen::MatrixXd joint_yu = pushed.MarginalXU();
  PF_ASSIGN_OR_RETURN(report.lower_bound_iyu, UtilityLowerBound(joint_yu, q));
  report.exact_iyu = MutualInformation(joint_yu);
  report.exact_iys = MutualInformation(pushed.MarginalXS());
  report.upper_bound_iys = PrivacyUpperBound(j.MarginalXS());
  const double privacy =
      term == PrivacyTerm::kExact ? report.exact_iys : report.upper_bound_iys;
  report.surrogate_value = report.lower_bound_iyu - lambda * privacy;
  return report;
}

absl::StatusOr<AlternatingCostBreakdown> AlternatingCost(const DiscreteJoint& j,
                                                         const Channel& ch,
                                                         const VariationalDecoder& q,
                                                         double lambda) {
  PF_ASSIGN_OR_RETURN(const DiscreteJoint pushed, PushThroughChannel(j, ch));
  const Eigen::MatrixXd joint_yu = pushed.MarginalXU();
  if (q.input_size() != joint_yu.cols() || q.output_size() != joint_yu.rows()) {
    return MakeError(ErrorKind::kDimensionMismatch, "decoder shape does not match joint");
  }
  const Eigen::MatrixXd post = ExactPosterior(joint_yu);
  const Eigen::MatrixXd qp = q.Probabilities();
  AlternatingCostBreakdown cost;
  for (Eigen::Index u = 0; u < joint_yu.cols(); ++u) {
    const double pu = joint_yu.col(u).sum();
    if (pu == 0) continue;
    PF_ASSIGN_OR_RETURN(const double kl,
                        KlDivergence(qp.row(u).transpose(), post.row(u).transpose()));
    cost.expected_kl += pu * kl;
    cost.decoder_entropy += pu * Entropy(qp.row(u));
  }
  cost.privacy = lambda * MutualInformation(pushed.MarginalXS());
  cost.total = cost.expected_kl + cost.decoder_entropy + cost.privacy;
  return cost;
}

}  // namespace privfunnel
