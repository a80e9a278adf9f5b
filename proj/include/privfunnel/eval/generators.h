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

// Seeded synthetic data: discrete (X, U, S) joints with tunable dependence,
// latent-factor Gaussian models, and samplers that turn either into tables.

#ifndef PRIVFUNNEL_EVAL_GENERATORS_H_
#define PRIVFUNNEL_EVAL_GENERATORS_H_

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/core_prob.h"
#include "privfunnel/eval/table.h"
#include "privfunnel/noise.h"

namespace privfunnel::eval {

// p(x) is uniform and U, S are conditionally independent given X with
//   p(u|x) = (1 - a_u) / |U| + a_u [u = m_u(x)],
// where m_u maps a seeded permutation of X onto U by residue. Same for S.
// A target mutual information, when set, overrides the strength.
struct DiscreteGenSpec {
  int nx = 4;
  int nu = 2;
  int ns = 2;
  double strength_u = 0;
  double strength_s = 0;
  std::optional<double> target_i_xu;
  std::optional<double> target_i_xs;
  std::uint64_t seed = 0;
};

absl::StatusOr<DiscreteJoint> GenDiscrete(const DiscreteGenSpec& spec);

// X = A [U; S] + E with U ~ N(0, I), S ~ N(0, I), E ~ N(0, noise_var I).
// Without explicit loadings A is drawn from N(0, 1) with the seed.
struct GaussianGenSpec {
  int dim_x = 2;
  int dim_u = 1;
  int dim_s = 1;
  std::optional<Eigen::MatrixXd> loadings;  // dim_x x (dim_u + dim_s)
  double noise_var = 1.0;
  std::uint64_t seed = 0;
};

absl::StatusOr<GaussianModel> GenGaussian(const GaussianGenSpec& spec);

// n draws of the stacked (X, U, S) vector, one per row.
absl::StatusOr<Eigen::MatrixXd> SampleGaussian(const GaussianModel& model, Eigen::Index n,
                                               std::uint64_t seed);

// Numeric features x0..x{J-1}, utility label u = [U_0 > mean] and sensitive
// label c = [S_0 > mean].
absl::StatusOr<SampleTable> SampleGaussianTable(const GaussianModel& model, Eigen::Index n,
                                                std::uint64_t seed);

// Categorical columns x, u, c drawn from the joint.
absl::StatusOr<SampleTable> SampleDiscrete(const DiscreteJoint& joint, Eigen::Index n,
                                           std::uint64_t seed);

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_GENERATORS_H_
