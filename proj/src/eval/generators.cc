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

#include "privfunnel/eval/generators.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "absl/strings/str_cat.h"
#include "privfunnel/status.h"

namespace privfunnel::eval {
namespace {

Eigen::MatrixXd Conditional(int nx, int n, double a, const std::vector<int>& perm) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(nx, n, (1.0 - a) / n);
  for (int x = 0; x < nx; ++x) c(x, perm[x] % n) += a;
  return c;
}

double ConditionalMi(int nx, int n, double a, const std::vector<int>& perm) {
  return MutualInformation((Conditional(nx, n, a, perm) / nx).eval());
}

// Smallest strength whose mutual information reaches `target`.
absl::StatusOr<double> SolveStrength(int nx, int n, double target,
                                     const std::vector<int>& perm) {
  if (!(target >= 0)) {
    return MakeError(ErrorKind::kInvalidArgument, "target information must be >= 0");
  }
  const double top = ConditionalMi(nx, n, 1.0, perm);
  if (target > top) {
    return MakeError(ErrorKind::kUnreachableTarget,
                     absl::StrCat("target ", target, " nats exceeds the maximum ", top));
  }
  double lo = 0, hi = 1;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ConditionalMi(nx, n, mid, perm) < target ? lo : hi) = mid;
  }
  return hi;
}

std::vector<int> SeededPermutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  return perm;
}

}  // namespace

absl::StatusOr<DiscreteJoint> GenDiscrete(const DiscreteGenSpec& spec) {
  if (spec.nx < 1 || spec.nu < 1 || spec.ns < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "dimensions must be >= 1");
  }
  for (double a : {spec.strength_u, spec.strength_s}) {
    if (!(a >= 0 && a <= 1)) {
      return MakeError(ErrorKind::kInvalidArgument, "strengths must lie in [0, 1]");
    }
  }
  std::mt19937_64 rng(spec.seed);
  const std::vector<int> perm_u = SeededPermutation(spec.nx, rng);
  const std::vector<int> perm_s = SeededPermutation(spec.nx, rng);
  double a_u = spec.strength_u, a_s = spec.strength_s;
  if (spec.target_i_xu) {
    PF_ASSIGN_OR_RETURN(a_u, SolveStrength(spec.nx, spec.nu, *spec.target_i_xu, perm_u));
  }
  if (spec.target_i_xs) {
    PF_ASSIGN_OR_RETURN(a_s, SolveStrength(spec.nx, spec.ns, *spec.target_i_xs, perm_s));
  }
  const Eigen::MatrixXd pu = Conditional(spec.nx, spec.nu, a_u, perm_u);
  const Eigen::MatrixXd ps = Conditional(spec.nx, spec.ns, a_s, perm_s);
  Eigen::MatrixXd table(spec.nx, spec.nu * spec.ns);
  for (int x = 0; x < spec.nx; ++x)
    for (int u = 0; u < spec.nu; ++u)
      for (int s = 0; s < spec.ns; ++s)
        table(x, u * spec.ns + s) = pu(x, u) * ps(x, s) / spec.nx;
  table /= table.sum();
  return DiscreteJoint::FromMatrix(std::move(table), spec.nu, spec.ns);
}

absl::StatusOr<GaussianModel> GenGaussian(const GaussianGenSpec& spec) {
  if (spec.dim_x < 1 || spec.dim_u < 1 || spec.dim_s < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "dimensions must be >= 1");
  }
  if (!(spec.noise_var > 0) || !std::isfinite(spec.noise_var)) {
    return MakeError(ErrorKind::kInvalidArgument, "noise variance must be finite and > 0");
  }
  const int latent = spec.dim_u + spec.dim_s;
  Eigen::MatrixXd a;
  if (spec.loadings) {
    a = *spec.loadings;
    if (a.rows() != spec.dim_x || a.cols() != latent) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat("loadings must be ", spec.dim_x, " x ", latent));
    }
  } else {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    a.resize(spec.dim_x, latent);
    for (int r = 0; r < spec.dim_x; ++r)
      for (int c = 0; c < latent; ++c) a(r, c) = normal(rng);
  }
  const int total = spec.dim_x + latent;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(total, total);
  cov.topLeftCorner(spec.dim_x, spec.dim_x) =
      a * a.transpose() +
      spec.noise_var * Eigen::MatrixXd::Identity(spec.dim_x, spec.dim_x);
  cov.topRightCorner(spec.dim_x, latent) = a;
  cov.bottomLeftCorner(latent, spec.dim_x) = a.transpose();
  return GaussianModel::Create(spec.dim_x, spec.dim_u, spec.dim_s,
                               Eigen::VectorXd::Zero(total), std::move(cov));
}

absl::StatusOr<Eigen::MatrixXd> SampleGaussian(const GaussianModel& model, Eigen::Index n,
                                               std::uint64_t seed) {
  if (n < 1) return MakeError(ErrorKind::kInvalidArgument, "n must be >= 1");
  Eigen::LLT<Eigen::MatrixXd> llt(model.cov());
  if (llt.info() != Eigen::Success) {
    return MakeError(ErrorKind::kSingularCovariance, "covariance is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::Index d = model.cov().rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(d, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < d; ++c) z(c, r) = normal(rng);
  Eigen::MatrixXd out = (l * z).transpose();
  out.rowwise() += model.mean().transpose();
  return out;
}

absl::StatusOr<SampleTable> SampleGaussianTable(const GaussianModel& model, Eigen::Index n,
                                                std::uint64_t seed) {
  PF_ASSIGN_OR_RETURN(const Eigen::MatrixXd draws, SampleGaussian(model, n, seed));
  std::vector<ColumnSpec> cols;
  for (int j = 0; j < model.dim_x(); ++j) cols.push_back({absl::StrCat("x", j)});
  cols.push_back({"u", ColumnRole::kUtilityLabel, 2});
  cols.push_back({"c", ColumnRole::kSensitiveLabel, 2});
  PF_ASSIGN_OR_RETURN(DatasetSchema schema, DatasetSchema::Create(std::move(cols)));
  const int iu = model.dim_x();
  const int is = model.dim_x() + model.dim_u();
  Eigen::MatrixXd data(n, model.dim_x() + 2);
  data.leftCols(model.dim_x()) = draws.leftCols(model.dim_x());
  for (Eigen::Index r = 0; r < n; ++r) {
    data(r, iu) = draws(r, iu) > model.mean()(iu) ? 1.0 : 0.0;
    data(r, iu + 1) = draws(r, is) > model.mean()(is) ? 1.0 : 0.0;
  }
  return SampleTable::Create(std::move(schema), std::move(data));
}

absl::StatusOr<SampleTable> SampleDiscrete(const DiscreteJoint& joint, Eigen::Index n,
                                           std::uint64_t seed) {
  if (n < 1) return MakeError(ErrorKind::kInvalidArgument, "n must be >= 1");
  std::vector<ColumnSpec> cols = {
      {"x", ColumnRole::kFeature, static_cast<int>(joint.nx())},
      {"u", ColumnRole::kUtilityLabel, static_cast<int>(joint.nu())},
      {"c", ColumnRole::kSensitiveLabel, static_cast<int>(joint.ns())}};
  PF_ASSIGN_OR_RETURN(DatasetSchema schema, DatasetSchema::Create(std::move(cols)));
  // Inverse-CDF sampling over the row-major (x, u, s) cells.
  std::vector<double> cdf;
  cdf.reserve(joint.table().size());
  double acc = 0;
  for (Eigen::Index x = 0; x < joint.nx(); ++x)
    for (Eigen::Index c = 0; c < joint.table().cols(); ++c) {
      acc += joint.table()(x, c);
      cdf.push_back(acc);
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, acc);
  const Eigen::Index cells = joint.table().cols();
  Eigen::MatrixXd data(n, 3);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double v = unif(rng);
    Eigen::Index k = std::upper_bound(cdf.begin(), cdf.end(), v) - cdf.begin();
    k = std::min<Eigen::Index>(k, static_cast<Eigen::Index>(cdf.size()) - 1);
    const Eigen::Index x = k / cells, col = k % cells;
    data(r, 0) = static_cast<double>(x);
    data(r, 1) = static_cast<double>(col / joint.ns());
    data(r, 2) = static_cast<double>(col % joint.ns());
  }
  return SampleTable::Create(std::move(schema), std::move(data));
}

}  // namespace privfunnel::eval
