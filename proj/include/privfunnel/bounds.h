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

// Variational machinery for the utility/privacy objective: the
// Barber-Agakov lower bound on I(Y;U), the data-processing upper bound on
// I(Y;S), the two surrogate objectives built from them, and the alternating
// cost used to analyse joint (channel, decoder) updates.

#ifndef PRIVFUNNEL_BOUNDS_H_
#define PRIVFUNNEL_BOUNDS_H_

#include <string_view>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/core_prob.h"

namespace privfunnel {

// Decoder logits are clamped to this range before the softmax so that
// q(y|u) > 0 everywhere.
inline constexpr double kDecoderLogitClamp = 30.0;

// Row-stochastic q(y|u) parameterized by logits (|U| x |Y|).
class VariationalDecoder {
 public:
  static absl::StatusOr<VariationalDecoder> FromLogits(Eigen::MatrixXd logits);
  // Uses log-probabilities as logits; zeros land on the lower clamp.
  static absl::StatusOr<VariationalDecoder> FromProbabilities(const Eigen::MatrixXd& probs);
  static VariationalDecoder Uniform(Eigen::Index nu, Eigen::Index ny);

  const Eigen::MatrixXd& logits() const { return logits_; }
  Eigen::MatrixXd ClampedLogits() const;
  Eigen::MatrixXd Probabilities() const;
  Eigen::Index input_size() const { return logits_.rows(); }
  Eigen::Index output_size() const { return logits_.cols(); }

 private:
  explicit VariationalDecoder(Eigen::MatrixXd logits) : logits_(std::move(logits)) {}
  Eigen::MatrixXd logits_;
};

enum class PrivacyTerm {
  kExact,        // lambda * I(Y;S)
  kDpiConstant,  // lambda * I(X;S), constant in the channel
};

std::string_view PrivacyTermName(PrivacyTerm term);
absl::StatusOr<PrivacyTerm> ParsePrivacyTerm(std::string_view name);

struct ObjectiveReport {
  double exact_iyu = 0;
  double lower_bound_iyu = 0;
  double exact_iys = 0;
  double upper_bound_iys = 0;
  double surrogate_value = 0;
  double lambda = 0;
};

// Exact information quantities of a channel applied to a joint.
struct ChannelInformation {
  double i_yu = 0;
  double i_ys = 0;
  double i_xu = 0;
  double i_xs = 0;
  double h_y = 0;
};

absl::StatusOr<ChannelInformation> EvaluateChannel(const DiscreteJoint& j,
                                                   const Channel& ch);

// Exact posterior p(y|u) as a |U| x |Y| matrix from a |Y| x |U| joint. Rows
// with p(u) = 0 are set uniform.
Eigen::MatrixXd ExactPosterior(const Eigen::MatrixXd& joint_yu);

// E_{p(u,y)}[log q(y|u)] - E_{p(y)}[log p(y)] for a |Y| x |U| joint.
absl::StatusOr<double> UtilityLowerBound(const Eigen::MatrixXd& joint_yu,
                                         const VariationalDecoder& q);

// I(U;Y) - E_u[KL(p(y|u) || q(y|u))]; algebraically equal to the lower bound.
absl::StatusOr<double> LowerBoundViaKlDecomposition(const Eigen::MatrixXd& joint_yu,
                                                    const VariationalDecoder& q);

// I(X;S), which upper-bounds I(Y;S) for every channel applied to X.
double PrivacyUpperBound(const Eigen::MatrixXd& joint_xs);

absl::StatusOr<ObjectiveReport> SurrogateObjective(const DiscreteJoint& j,
                                                   const Channel& ch,
                                                   const VariationalDecoder& q,
                                                   double lambda, PrivacyTerm term);

struct AlternatingCostBreakdown {
  double expected_kl = 0;       // E_u[KL(q(.|u) || p(.|u))]
  double decoder_entropy = 0;   // -E_u E_q[log q]
  double privacy = 0;           // lambda * I(S;Y)
  double total = 0;
};

// L(theta, phi) = E_u[KL(q||p)] - E_u E_q[log q] + lambda * I(S;Y).
absl::StatusOr<AlternatingCostBreakdown> AlternatingCost(const DiscreteJoint& j,
                                                         const Channel& ch,
                                                         const VariationalDecoder& q,
                                                         double lambda);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_BOUNDS_H_
