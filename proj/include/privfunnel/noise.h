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

// Gaussian noise infusion X_c = X + T, T ~ N(0, diag(sigma^2)), on jointly
// Gaussian (X, U, S) models: closed-form mutual information, the noise
// entropy, the I(X_c;U) upper bound, an entropy-maximizing diagonal noise
// search under a utility constraint, and the empirical sampled loss.

#ifndef PRIVFUNNEL_NOISE_H_
#define PRIVFUNNEL_NOISE_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "privfunnel/eval/softmax.h"
#include "privfunnel/eval/table.h"
#include "privfunnel/status.h"

namespace privfunnel {

inline constexpr double kTwoPiE = 2.0 * 3.14159265358979323846 * 2.71828182845904523536;

// log |A| for a symmetric positive-definite matrix.
template <typename Derived>
absl::StatusOr<typename Derived::Scalar> LogDetSpd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(a.eval());
  if (llt.info() != Eigen::Success) {
    return MakeError(ErrorKind::kSingularCovariance, "matrix is not positive definite");
  }
  const auto& l = llt.matrixLLT();
  Scalar total(0);
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > Scalar(0))) {
      return MakeError(ErrorKind::kSingularCovariance, "matrix is not positive definite");
    }
    total += Scalar(2) * log(l(i, i));
  }
  return total;
}

// Jointly Gaussian (X, U, S) with the stacked vector ordered X, U, S.
class GaussianModel {
 public:
  static absl::StatusOr<GaussianModel> Create(int dim_x, int dim_u, int dim_s,
                                              Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int dim_x() const { return dim_x_; }
  int dim_u() const { return dim_u_; }
  int dim_s() const { return dim_s_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  std::vector<int> x_block() const;
  std::vector<int> u_block() const;
  std::vector<int> s_block() const;

 private:
  GaussianModel(int dx, int du, int ds, Eigen::VectorXd mean, Eigen::MatrixXd cov)
      : dim_x_(dx), dim_u_(du), dim_s_(ds), mean_(std::move(mean)), cov_(std::move(cov)) {}
  int dim_x_, dim_u_, dim_s_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

struct NoiseSpec {
  Eigen::VectorXd sigma_diag;  // variances, one per X coordinate

  absl::Status Validate(int dim_x) const;
};

// I(A; B) = 1/2 log(|C_A| |C_B| / |C_AB|) over disjoint index sets.
absl::StatusOr<double> GaussianMi(const GaussianModel& model, const std::vector<int>& a,
                                  const std::vector<int>& b);

// Adds diag(sigma^2) to the X block; cross-covariances are unchanged.
absl::StatusOr<GaussianModel> Infuse(const GaussianModel& model, const NoiseSpec& noise);

// 1/2 log((2 pi e)^J |Sigma|). ZeroNoiseEntropy if some variance is zero.
absl::StatusOr<double> NoiseEntropy(const NoiseSpec& noise);

enum class UtilityBoundForm {
  kCancelled,  // 1/2 log(|Cov(X_c)| / |Sigma|), a valid bound on I(X_c;U)
  kLiteral,    // adds the (J/2) log(2 pi e) factor
};

absl::StatusOr<double> UtilityUpperBoundXc(const GaussianModel& model, const NoiseSpec& noise,
                                           UtilityBoundForm form = UtilityBoundForm::kCancelled);

// Maximizes sum_j log sigma_j^2 subject to I(X_c;U) >= (1 - slack) I(X;U)
// and sigma_j^2 <= cap. Bisection along sigma = t * Var(X) seeds the search;
// projected gradient ascent in log-variance then moves along the constraint
// boundary, restoring feasibility by a common shift after every step, and a
// final cyclic per-coordinate bisection pushes each variance to its limit.
// The cap defaults to 1e4 * max diag(Cov(X)).
absl::StatusOr<NoiseSpec> OptimizeSigma(const GaussianModel& model, double utility_slack,
                                        std::optional<double> sigma_cap = std::nullopt);

struct NoiseLossBreakdown {
  double h_t = 0;    // -(noise entropy) over the coordinates that receive noise
  double l_u = 0;    // utility cross-entropy on the noisy data
  double l_vlb = 0;  // mean log q(c | X_c) of the sensitive classifier
  double l_reg = 0;  // lambda_reg * squared classifier weights
  double total = 0;  // h_t + l_u + l_vlb - l_reg
};

// Adds seeded N(0, sigma^2) noise to the numeric feature columns, in schema
// order.
absl::StatusOr<eval::SampleTable> ApplyNoise(const eval::SampleTable& table,
                                             const NoiseSpec& noise, std::uint64_t seed);

absl::StatusOr<NoiseLossBreakdown> EmpiricalLoss(const eval::SampleTable& table,
                                                 const NoiseSpec& noise,
                                                 const eval::SoftmaxClassifier& utility_clf,
                                                 const eval::SoftmaxClassifier& sensitive_clf,
                                                 double lambda_reg, std::uint64_t seed);

struct NoiseSweepPoint {
  double scale = 0;
  double i_xc_s = 0;
  double i_xc_u = 0;
};

// sigma_j^2 = scale * Var(X_j) for each scale.
absl::StatusOr<std::vector<NoiseSweepPoint>> NoiseSweep(const GaussianModel& model,
                                                        const std::vector<double>& scales);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_NOISE_H_
