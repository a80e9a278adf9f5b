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

// Runs privacy mechanisms on a table and scores each one on the same split.

#ifndef PRIVFUNNEL_EVAL_COMPARE_H_
#define PRIVFUNNEL_EVAL_COMPARE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privfunnel/core_prob.h"
#include "privfunnel/eval/score.h"
#include "privfunnel/eval/table.h"
#include "privfunnel/grad_opt.h"
#include "privfunnel/noise.h"

namespace privfunnel::eval {

enum class Method { kIdentity, kMask, kKAnonymity, kNoise, kGrad, kEm };

std::string_view MethodName(Method method);
absl::StatusOr<Method> ParseMethod(std::string_view name);

struct CompareOptions {
  std::uint64_t seed = 0;
  ScoreOptions score;  // score.seed is replaced by `seed`
  // Features replaced by the mask baseline; empty masks every feature.
  std::vector<std::string> mask_columns;
  int k = 5;
  double noise_slack = 0.1;
  // Channel optimizers: features are cut into `bins` quantile bins and
  // combined into one discrete X over the observed combinations.
  TradeoffConfig tradeoff;
  int bins = 3;
};

// Empirical joint of (combined feature code, utility label, sensitive label)
// together with each row's combined code.
struct EmpiricalJoint {
  DiscreteJoint joint;
  Eigen::VectorXi x_codes;
};

absl::StatusOr<EmpiricalJoint> EstimateJoint(const SampleTable& table, int bins);

// Gaussian fit of (numeric features, utility label, sensitive label).
absl::StatusOr<GaussianModel> FitGaussian(const SampleTable& table);

// Replaces the features by one categorical column "y" drawn from the
// channel row of each record.
absl::StatusOr<SampleTable> ReleaseThroughChannel(const SampleTable& table,
                                                  const Eigen::VectorXi& x_codes,
                                                  const Channel& channel, std::uint64_t seed);

absl::StatusOr<SampleTable> ApplyMethod(Method method, const SampleTable& table,
                                        const CompareOptions& options);

struct CompareRow {
  Method method = Method::kIdentity;
  absl::Status status;
  ScoreCard card;
};

// One row per method, in order. A failing method yields a row carrying its
// status; an empty method list is an error.
absl::StatusOr<std::vector<CompareRow>> Compare(const std::vector<Method>& methods,
                                                const SampleTable& table,
                                                const CompareOptions& options);

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_COMPARE_H_
