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

// Alternating optimization: an exact E-step that sets the decoder to the
// posterior p(y|u) induced by the current channel, and a backtracking
// gradient M-step on the channel logits with the decoder held fixed.
//
// The monotone quantity is
//   L(theta) = -E[log p(y|u)] + lambda * E[log p(y|s)] + (lambda - 1) H(Y)
//            = -(I(Y;U) - lambda * I(Y;S)),
// i.e. the EM cost with its additive term written out. The trace also keeps
// the value without that term, H(Y|U) - lambda * H(Y|S).

#ifndef PRIVFUNNEL_EM_OPT_H_
#define PRIVFUNNEL_EM_OPT_H_

#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/bounds.h"
#include "privfunnel/core_prob.h"
#include "privfunnel/grad_opt.h"

namespace privfunnel {

struct EmRecord {
  double cost = 0;          // -(I(Y;U) - lambda * privacy term)
  double literal_cost = 0;  // H(Y|U) - lambda * H(Y|S)
  double kl_gap = 0;        // KL(posterior || q) right after the E-step
  double theta_delta_norm = 0;
  double alpha = 0;
};

struct EmTrace {
  std::vector<EmRecord> records;
  TerminalStatus status = TerminalStatus::kMaxIters;
};

struct SensitivityReport {
  double delta_norm = 0;
  double theta_delta_norm = 0;
  double ratio = 0;
};

// q = exact p(y|u) of the pushed-through joint; rows with p(u) = 0 are
// uniform.
absl::StatusOr<VariationalDecoder> EStep(const DiscreteJoint& j, const Channel& ch);

absl::StatusOr<double> EmCost(const DiscreteJoint& j, const Channel& ch, double lambda,
                              PrivacyTerm term);
absl::StatusOr<double> LiteralEmCost(const DiscreteJoint& j, const Channel& ch,
                                     double lambda);

struct MStepResult {
  Channel channel;
  double alpha = 0;  // accepted step, 0 when the channel did not move
  bool moved = false;
};

// One backtracking step from `alpha` on the variational surrogate with q
// fixed. Never increases the cost.
absl::StatusOr<MStepResult> MStep(const DiscreteJoint& j, const Channel& ch,
                                  const VariationalDecoder& q, double lambda, double alpha,
                                  PrivacyTerm term = PrivacyTerm::kExact, double l2 = 0);

struct EmResult {
  Channel channel;
  VariationalDecoder decoder;
  EmTrace trace;
};

absl::StatusOr<EmResult> RunEm(const DiscreteJoint& j, const TradeoffConfig& cfg);

// One independent RunEm() per lambda, seeded cfg.seed + index.
absl::StatusOr<std::vector<TradeoffPoint>> SweepEm(const DiscreteJoint& j,
                                                   const std::vector<double>& lambdas,
                                                   const TradeoffConfig& cfg);

// Perturbs the joint in probability space by a zero-sum direction scaled so
// its most negative entry equals -delta_scale, reruns EM with the same seed
// and reports |d theta| / |delta| on row-centred logits.
absl::StatusOr<SensitivityReport> SensitivityProbe(const DiscreteJoint& j,
                                                   const TradeoffConfig& cfg,
                                                   double delta_scale);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_EM_OPT_H_
