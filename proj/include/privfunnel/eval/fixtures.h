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

// Fixed joints and Gaussian models shared by tests, examples and the CLI.

#ifndef PRIVFUNNEL_EVAL_FIXTURES_H_
#define PRIVFUNNEL_EVAL_FIXTURES_H_

#include <Eigen/Core>

#include "privfunnel/core_prob.h"
#include "privfunnel/eval/generators.h"
#include "privfunnel/noise.h"

namespace privfunnel::eval {

// 2 x 2 x 2, every cell positive, X informative about both U and S.
inline DiscreteJoint ToyJoint222() {
  return *DiscreteJoint::Create(2, 2, 2, {0.20, 0.10, 0.12, 0.08, 0.05, 0.15, 0.10, 0.20});
}

// 4 x 2 x 2 benchmark joint.
inline DiscreteJoint BenchmarkJoint422() {
  return *DiscreteJoint::Create(4, 2, 2,
                                {0.14, 0.04, 0.05, 0.02,  //
                                 0.03, 0.11, 0.02, 0.04,  //
                                 0.04, 0.02, 0.12, 0.05,  //
                                 0.02, 0.05, 0.04, 0.21});
}

// X = (U, S) with U and S independent fair bits.
inline DiscreteJoint SeparableJoint() {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4, 4);
  for (int x = 0; x < 4; ++x) t(x, x) = 0.25;
  return *DiscreteJoint::FromMatrix(t, 2, 2);
}

// Two features loading on one utility and one sensitive factor.
inline GaussianModel CorrelatedGaussian() {
  GaussianGenSpec spec;
  spec.dim_x = 2;
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.8,  //
      0.3, 1.2;
  spec.loadings = a;
  spec.noise_var = 0.5;
  return *GenGaussian(spec);
}

// x0 tracks U, x1 tracks S, x2 mixes both.
inline GaussianModel StructuredGaussian() {
  GaussianGenSpec spec;
  spec.dim_x = 3;
  Eigen::MatrixXd a(3, 2);
  a << 2.0, 0.0,  //
      0.0, 2.0,   //
      1.0, 1.0;
  spec.loadings = a;
  spec.noise_var = 1.0;
  return *GenGaussian(spec);
}

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_FIXTURES_H_
