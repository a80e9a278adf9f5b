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

#ifndef PRIVFUNNEL_TESTS_TEST_UTIL_H_
#define PRIVFUNNEL_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "oracle.h"
#include "privfunnel/core_prob.h"

namespace privfunnel::testing {

// Dirichlet(1)-style random joint with every cell positive.
inline DiscreteJoint RandomJoint(std::mt19937_64& rng, int nx, int nu, int ns) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(nx * nu * ns);
  double total = 0;
  for (double& v : p) total += (v = e(rng) + 1e-3);
  for (double& v : p) v /= total;
  return *DiscreteJoint::Create(nx, nu, ns, p);
}

inline Eigen::MatrixXd RandomMatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                                    double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = d(rng);
  return m;
}

inline oracle::Grid ToGrid(const Eigen::MatrixXd& m) {
  oracle::Grid g(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) g[i][k] = m(i, k);
  return g;
}

inline std::vector<oracle::Grid> ToTensor(const DiscreteJoint& j) {
  std::vector<oracle::Grid> t(j.nx(), oracle::Grid(j.nu(), std::vector<double>(j.ns())));
  for (Eigen::Index x = 0; x < j.nx(); ++x)
    for (Eigen::Index u = 0; u < j.nu(); ++u)
      for (Eigen::Index s = 0; s < j.ns(); ++s) t[x][u][s] = j(x, u, s);
  return t;
}

// Surrogate objective evaluated through the high-precision oracle.
inline double OracleSurrogate(const std::vector<oracle::Grid>& p3, const Eigen::MatrixXd& theta,
                              const Eigen::MatrixXd& phi, double lambda, bool exact_privacy) {
  const oracle::Pushed pushed = oracle::Push(p3, oracle::Softmax(ToGrid(theta)));
  double privacy = 0;
  if (exact_privacy) {
    privacy = oracle::Mi(pushed.ys);
  } else {
    oracle::Grid xs(p3.size(), std::vector<double>(p3[0][0].size(), 0.0));
    for (std::size_t x = 0; x < p3.size(); ++x)
      for (const auto& row : p3[x])
        for (std::size_t s = 0; s < row.size(); ++s) xs[x][s] += row[s];
    privacy = oracle::Mi(xs);
  }
  return oracle::LowerBound(pushed.yu, oracle::Softmax(ToGrid(phi))) - lambda * privacy;
}

struct GradientCheck {
  Eigen::VectorXd analytic;
  Eigen::VectorXd numeric;
  // ||analytic - numeric|| / ||numeric||.
  double relative_error = 0;
};

// Central differences with step h on every theta entry, then every phi entry.
inline GradientCheck CentralDifference(const DiscreteJoint& j, const Eigen::MatrixXd& theta,
                                       const Eigen::MatrixXd& phi, double lambda,
                                       bool exact_privacy, const Eigen::MatrixXd& grad_theta,
                                       const Eigen::MatrixXd& grad_phi, double h = 1e-5) {
  const std::vector<oracle::Grid> p3 = ToTensor(j);
  GradientCheck out;
  out.analytic.resize(theta.size() + phi.size());
  out.numeric.resize(out.analytic.size());
  Eigen::Index k = 0;
  for (int which = 0; which < 2; ++which) {
    const Eigen::MatrixXd& base = which == 0 ? theta : phi;
    const Eigen::MatrixXd& grad = which == 0 ? grad_theta : grad_phi;
    for (Eigen::Index r = 0; r < base.rows(); ++r)
      for (Eigen::Index c = 0; c < base.cols(); ++c, ++k) {
        Eigen::MatrixXd plus = base, minus = base;
        plus(r, c) += h;
        minus(r, c) -= h;
        const double fp = which == 0 ? OracleSurrogate(p3, plus, phi, lambda, exact_privacy)
                                     : OracleSurrogate(p3, theta, plus, lambda, exact_privacy);
        const double fm = which == 0 ? OracleSurrogate(p3, minus, phi, lambda, exact_privacy)
                                     : OracleSurrogate(p3, theta, minus, lambda, exact_privacy);
        out.numeric(k) = (fp - fm) / (2 * h);
        out.analytic(k) = grad(r, c);
      }
  }
  const double scale = std::max(out.numeric.norm(), 1e-300);
  out.relative_error = (out.analytic - out.numeric).norm() / scale;
  return out;
}

}  // namespace privfunnel::testing

#endif  // PRIVFUNNEL_TESTS_TEST_UTIL_H_
