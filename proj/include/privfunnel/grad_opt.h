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

// Gradient ascent on the channel logits (and decoder logits) of the
// variational surrogate objective, with exact analytic gradients, a
// backtracking adaptive step size and an optional leakage-budget controller
// for lambda.

#ifndef PRIVFUNNEL_GRAD_OPT_H_
#define PRIVFUNNEL_GRAD_OPT_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/bounds.h"
#include "privfunnel/core_prob.h"

namespace privfunnel {

struct LambdaController {
  enum class Kind { kFixed, kBudget };
  Kind kind = Kind::kFixed;
  // Budget mode: lambda <- lambda * exp(gain * (I(Y;S) - target)).
  double target_leakage_nats = 0;
  double gain = 0;
};

struct TradeoffConfig {
  double lambda = 0;
  double alpha0 = 1.0;
  double epsilon = 1e-10;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  LambdaController lambda_controller;
  Eigen::Index y_size = 2;
  PrivacyTerm privacy_term = PrivacyTerm::kExact;
  // Optional L2 penalty on the channel logits.
  double l2 = 0;

  absl::Status Validate() const;
};

enum class TerminalStatus { kConverged, kMaxIters, kNonFiniteObjective };

std::string_view TerminalStatusName(TerminalStatus status);

struct IterationRecord {
  double objective = 0;
  double i_yu = 0;
  double i_ys = 0;
  double alpha = 0;
  double lambda = 0;
  double gradient_norm = 0;
  double theta_delta_norm = 0;
};

struct OptTrace {
  std::vector<IterationRecord> records;
  TerminalStatus status = TerminalStatus::kMaxIters;
};

struct SurrogateGradient {
  Eigen::MatrixXd theta;  // |X| x |Y|
  Eigen::MatrixXd phi;    // |U| x |Y|
};

// Exact gradient of the surrogate objective (lower bound minus the chosen
// privacy term) with respect to both logit matrices.
absl::StatusOr<SurrogateGradient> AnalyticGradient(const DiscreteJoint& j,
                                                   const Channel& ch,
                                                   const VariationalDecoder& q,
                                                   double lambda, PrivacyTerm term);

// I(X;S), the privacy baseline every channel stays under.
double PrecomputeBaseline(const DiscreteJoint& j);

// Seeded uniform(-1, 1) logits, filled in row-major index order.
Eigen::MatrixXd InitialLogits(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

struct OptResult {
  Channel channel;
  VariationalDecoder decoder;
  OptTrace trace;
};

// A NonFiniteObjective abort is reported through trace.status, with the
// trace up to the failing iteration and the last finite parameters.
absl::StatusOr<OptResult> Optimize(const DiscreteJoint& j, const TradeoffConfig& cfg);

struct TradeoffPoint {
  double param = 0;
  double i_yu = 0;
  double i_ys = 0;
  double utility_score = 0;  // I(Y;U) / I(X;U), 1 when I(X;U) = 0
  double privacy_score = 0;  // 1 - I(Y;S) / I(X;S), 1 when I(X;S) = 0
  std::string status;        // Converged | MaxIters | NonFiniteObjective | Failed
};

TradeoffPoint MakeTradeoffPoint(double param, double i_yu, double i_ys, double i_xu,
                                double i_xs, std::string status);

// Finite, >= 0 and strictly increasing. An empty list is valid.
absl::Status ValidateSweepValues(const std::vector<double>& values);

// One independent optimize() run per lambda, seeded cfg.seed + index.
absl::StatusOr<std::vector<TradeoffPoint>> Sweep(const DiscreteJoint& j,
                                                 const std::vector<double>& lambdas,
                                                 const TradeoffConfig& cfg);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_GRAD_OPT_H_
