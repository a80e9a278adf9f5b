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

#include "privfunnel/noise.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include <Eigen/Eigenvalues>

#include "absl/strings/str_cat.h"
#include "privfunnel/grad_opt.h"

namespace privfunnel {
namespace {

std::vector<int> Range(int begin, int count) {
  std::vector<int> out(count);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

Eigen::MatrixXd Submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
  return out;
}

// I(X_c; U) as a function of the noise variances.
absl::StatusOr<double> UtilityInformation(const GaussianModel& model,
                                          const Eigen::VectorXd& sigma) {
  PF_ASSIGN_OR_RETURN(const GaussianModel noisy, Infuse(model, NoiseSpec{sigma}));
  return GaussianMi(noisy, noisy.x_block(), noisy.u_block());
}

constexpr int kBisectionSteps = 200;
constexpr int kMaxAscentSteps = 500;
constexpr int kMaxCycles = 50;

}  // namespace

absl::StatusOr<GaussianModel> GaussianModel::Create(int dim_x, int dim_u, int dim_s,
                                                    Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  if (dim_x < 1 || dim_u < 1 || dim_s < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "Gaussian blocks need dimension >= 1");
  }
  const int total = dim_x + dim_u + dim_s;
  if (mean.size() != total || cov.rows() != total || cov.cols() != total) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("mean/cov must have size ", total));
  }
  if (!cov.allFinite() || !mean.allFinite()) {
    return MakeError(ErrorKind::kInvalidArgument, "non-finite Gaussian parameters");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    return MakeError(ErrorKind::kInvalidArgument, "covariance is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-12) {
    return MakeError(ErrorKind::kSingularCovariance,
                     "covariance eigenvalues must exceed 1e-12");
  }
  return GaussianModel(dim_x, dim_u, dim_s, std::move(mean), sym);
}

std::vector<int> GaussianModel::x_block() const { return Range(0, dim_x_); }
std::vector<int> GaussianModel::u_block() const { return Range(dim_x_, dim_u_); }
std::vector<int> GaussianModel::s_block() const { return Range(dim_x_ + dim_u_, dim_s_); }

absl::Status NoiseSpec::Validate(int dim_x) const {
  if (sigma_diag.size() != dim_x) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("noise has ", sigma_diag.size(), " entries, X has ", dim_x));
  }
  if (!sigma_diag.allFinite() || (sigma_diag.array() < 0).any()) {
    return MakeError(ErrorKind::kInvalidArgument, "noise variances must be finite and >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GaussianMi(const GaussianModel& model, const std::vector<int>& a,
                                  const std::vector<int>& b) {
  const int total = model.dim_x() + model.dim_u() + model.dim_s();
  std::set<int> seen;
  for (const auto* block : {&a, &b}) {
    if (block->empty()) {
      return MakeError(ErrorKind::kInvalidArgument, "index sets must be non-empty");
    }
    for (int i : *block) {
      if (i < 0 || i >= total || !seen.insert(i).second) {
        return MakeError(ErrorKind::kInvalidArgument,
                         "index sets must be disjoint and in range");
      }
    }
  }
  std::vector<int> both = a;
  both.insert(both.end(), b.begin(), b.end());
  PF_ASSIGN_OR_RETURN(const double ld_a, LogDetSpd(Submatrix(model.cov(), a)));
  PF_ASSIGN_OR_RETURN(const double ld_b, LogDetSpd(Submatrix(model.cov(), b)));
  PF_ASSIGN_OR_RETURN(const double ld_ab, LogDetSpd(Submatrix(model.cov(), both)));
  return std::max(0.0, 0.5 * (ld_a + ld_b - ld_ab));
}

absl::StatusOr<GaussianModel> Infuse(const GaussianModel& model, const NoiseSpec& noise) {
  PF_RETURN_IF_ERROR(noise.Validate(model.dim_x()));
  Eigen::MatrixXd cov = model.cov();
  cov.topLeftCorner(model.dim_x(), model.dim_x()).diagonal() += noise.sigma_diag;
  return GaussianModel::Create(model.dim_x(), model.dim_u(), model.dim_s(), model.mean(),
                               std::move(cov));
}

absl::StatusOr<double> NoiseEntropy(const NoiseSpec& noise) {
  if (noise.sigma_diag.size() == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "empty noise specification");
  }
  if (!noise.sigma_diag.allFinite() || (noise.sigma_diag.array() <= 0).any()) {
    return MakeError(ErrorKind::kZeroNoiseEntropy,
                     "differential entropy needs every variance > 0");
  }
  const double j = static_cast<double>(noise.sigma_diag.size());
  return 0.5 * (j * std::log(kTwoPiE) + noise.sigma_diag.array().log().sum());
}

absl::StatusOr<double> UtilityUpperBoundXc(const GaussianModel& model, const NoiseSpec& noise,
                                           UtilityBoundForm form) {
  PF_RETURN_IF_ERROR(noise.Validate(model.dim_x()));
  if ((noise.sigma_diag.array() <= 0).any()) {
    return MakeError(ErrorKind::kZeroNoiseEntropy, "bound needs every variance > 0");
  }
  // |Cov(X) + Sigma| / |Sigma| = |I + M| with M = Sigma^-1/2 Cov(X) Sigma^-1/2;
  // summing log1p over the eigenvalues of M keeps precision for large noise.
  const Eigen::VectorXd inv_sd = noise.sigma_diag.array().rsqrt();
  const Eigen::MatrixXd m =
      inv_sd.asDiagonal() * model.cov().topLeftCorner(model.dim_x(), model.dim_x()) *
      inv_sd.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    return MakeError(ErrorKind::kSingularCovariance, "eigen-decomposition failed");
  }
  double bound = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    bound += 0.5 * std::log1p(std::max(eig.eigenvalues()(i), 0.0));
  }
  if (form == UtilityBoundForm::kLiteral) {
    bound += 0.5 * model.dim_x() * std::log(kTwoPiE);
  }
  return bound;
}

absl::StatusOr<NoiseSpec> OptimizeSigma(const GaussianModel& model, double utility_slack,
                                        std::optional<double> sigma_cap) {
  if (!(utility_slack >= 0) || !(utility_slack < 1)) {
    return MakeError(ErrorKind::kInvalidArgument, "utility slack must lie in [0, 1)");
  }
  const int jx = model.dim_x();
  const Eigen::VectorXd var_x = model.cov().diagonal().head(jx);
  const double cap = sigma_cap.value_or(1e4 * var_x.maxCoeff());
  if (!(cap > 0) || !std::isfinite(cap)) {
    return MakeError(ErrorKind::kInvalidArgument, "sigma cap must be finite and > 0");
  }
  PF_ASSIGN_OR_RETURN(const double clean, GaussianMi(model, model.x_block(), model.u_block()));
  const double target = (1.0 - utility_slack) * clean;

  auto feasible = [&](const Eigen::VectorXd& sigma) -> absl::StatusOr<bool> {
    PF_ASSIGN_OR_RETURN(const double info, UtilityInformation(model, sigma));
    return info >= target;
  };

  // Proportional profile sigma = t * Var(X).
  const double t_max = cap / var_x.maxCoeff();
  PF_ASSIGN_OR_RETURN(const bool top_ok, feasible(t_max * var_x));
  double t = t_max;
  if (!top_ok) {
    double lo = 0, hi = t_max;
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      PF_ASSIGN_OR_RETURN(const bool ok, feasible(mid * var_x));
      (ok ? lo : hi) = mid;
    }
    t = lo;
  }
  if (!(t > 0) || (utility_slack == 0 && !top_ok)) {
    return NoiseSpec{Eigen::VectorXd::Zero(jx)};
  }

  // Projected ascent of sum_j log sigma_j^2 along the constraint boundary.
  const double v_cap = std::log(cap);
  Eigen::VectorXd v = (t * var_x).array().log().matrix().cwiseMin(v_cap);

  auto to_sigma = [](const Eigen::VectorXd& logs) -> Eigen::VectorXd {
    return logs.array().exp().matrix();
  };
  auto shifted = [&](const Eigen::VectorXd& base, const std::vector<bool>& free, double s) {
    Eigen::VectorXd out = base;
    for (int j = 0; j < jx; ++j)
      if (free[j]) out(j) = std::min(base(j) + s, v_cap);
    return out;
  };
  // Largest common shift of the free coordinates that keeps the constraint.
  auto restore = [&](const Eigen::VectorXd& base,
                     const std::vector<bool>& free) -> absl::StatusOr<std::optional<Eigen::VectorXd>> {
    PF_ASSIGN_OR_RETURN(const bool ok0, feasible(to_sigma(base)));
    double lo, hi;
    if (ok0) {
      double span = 0;
      for (int j = 0; j < jx; ++j)
        if (free[j]) span = std::max(span, v_cap - base(j));
      PF_ASSIGN_OR_RETURN(const bool ok_top, feasible(to_sigma(shifted(base, free, span))));
      if (ok_top) return std::optional<Eigen::VectorXd>(shifted(base, free, span));
      lo = 0;
      hi = span;
    } else {
      hi = 0;
      lo = -1;
      bool found = false;
      for (int i = 0; i < 60 && !found; ++i, lo *= 2) {
        PF_ASSIGN_OR_RETURN(found, feasible(to_sigma(shifted(base, free, lo))));
        if (found) break;
        hi = lo;
      }
      if (!found) return std::optional<Eigen::VectorXd>();
    }
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      PF_ASSIGN_OR_RETURN(const bool ok, feasible(to_sigma(shifted(base, free, mid))));
      (ok ? lo : hi) = mid;
    }
    return std::optional<Eigen::VectorXd>(shifted(base, free, lo));
  };

  double eta = 1.0;
  for (int iter = 0; iter < kMaxAscentSteps && eta > 1e-12; ++iter) {
    PF_ASSIGN_OR_RETURN(const GaussianModel noisy, Infuse(model, NoiseSpec{to_sigma(v)}));
    const std::vector<int> xu = [&] {
      std::vector<int> idx = noisy.x_block();
      for (int i : noisy.u_block()) idx.push_back(i);
      return idx;
    }();
    const Eigen::MatrixXd inv_x = Submatrix(noisy.cov(), noisy.x_block()).inverse();
    const Eigen::MatrixXd inv_xu = Submatrix(noisy.cov(), xu).inverse();
    // d I(X_c;U) / d log sigma_j^2.
    Eigen::VectorXd a(jx);
    for (int j = 0; j < jx; ++j) a(j) = 0.5 * std::exp(v(j)) * (inv_x(j, j) - inv_xu(j, j));

    std::vector<bool> free(jx, true);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(jx);
    for (int pass = 0; pass <= jx; ++pass) {
      double sa = 0, saa = 0;
      for (int j = 0; j < jx; ++j)
        if (free[j]) {
          sa += a(j);
          saa += a(j) * a(j);
        }
      d.setZero();
      for (int j = 0; j < jx; ++j)
        if (free[j]) d(j) = saa > 0 ? 1.0 - a(j) * sa / saa : 1.0;
      bool dropped = false;
      for (int j = 0; j < jx; ++j)
        if (free[j] && v(j) >= v_cap - 1e-12 && d(j) >= 0) {
          free[j] = false;
          dropped = true;
        }
      if (!dropped) break;
    }
    if (d.norm() < 1e-10) break;

    bool accepted = false;
    while (eta > 1e-12) {
      Eigen::VectorXd trial = (v + eta * d).cwiseMin(v_cap);
      PF_ASSIGN_OR_RETURN(const std::optional<Eigen::VectorXd> fixed, restore(trial, free));
      if (fixed && fixed->sum() > v.sum() + 1e-12) {
        v = *fixed;
        eta = std::min(2.0 * eta, 1e3);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }

  // Cyclic per-coordinate bisection up to each feasibility limit.
  Eigen::VectorXd sigma = to_sigma(v).cwiseMin(cap);
  for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
    bool changed = false;
    for (int j = 0; j < jx; ++j) {
      Eigen::VectorXd trial = sigma;
      trial(j) = cap;
      PF_ASSIGN_OR_RETURN(const bool cap_ok, feasible(trial));
      double best = cap;
      if (!cap_ok) {
        double lo = sigma(j), hi = cap;
        for (int i = 0; i < kBisectionSteps; ++i) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          trial(j) = mid;
          PF_ASSIGN_OR_RETURN(const bool ok, feasible(trial));
          (ok ? lo : hi) = mid;
        }
        best = lo;
      }
      if (best > sigma(j) * (1.0 + 1e-6)) changed = true;
      sigma(j) = std::max(sigma(j), best);
    }
    if (!changed) break;
  }
  PF_ASSIGN_OR_RETURN(const bool final_ok, feasible(sigma));
  if (!final_ok) {
    return MakeError(ErrorKind::kInfeasibleConstraint, "search left the feasible set");
  }
  return NoiseSpec{sigma};
}

absl::StatusOr<eval::SampleTable> ApplyNoise(const eval::SampleTable& table,
                                             const NoiseSpec& noise, std::uint64_t seed) {
  const std::vector<int> numeric = table.schema().numeric_feature_indices();
  PF_RETURN_IF_ERROR(noise.Validate(static_cast<int>(numeric.size())));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd data = table.data();
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (std::size_t k = 0; k < numeric.size(); ++k) {
      const double z = normal(rng);
      data(r, numeric[k]) += std::sqrt(noise.sigma_diag(k)) * z;
    }
  }
  return eval::SampleTable::Create(table.schema(), std::move(data));
}

absl::StatusOr<NoiseLossBreakdown> EmpiricalLoss(const eval::SampleTable& table,
                                                 const NoiseSpec& noise,
                                                 const eval::SoftmaxClassifier& utility_clf,
                                                 const eval::SoftmaxClassifier& sensitive_clf,
                                                 double lambda_reg, std::uint64_t seed) {
  if (utility_clf.target() != eval::ColumnRole::kUtilityLabel ||
      sensitive_clf.target() != eval::ColumnRole::kSensitiveLabel) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "classifiers must target the utility and sensitive labels");
  }
  PF_ASSIGN_OR_RETURN(const eval::SampleTable noisy, ApplyNoise(table, noise, seed));
  NoiseLossBreakdown loss;
  for (Eigen::Index j = 0; j < noise.sigma_diag.size(); ++j) {
    const double v = noise.sigma_diag(j);
    if (v > 0) loss.h_t -= 0.5 * std::log(kTwoPiE * v);
  }
  loss.l_u = -eval::MeanLogLikelihood(utility_clf, noisy);
  loss.l_vlb = eval::MeanLogLikelihood(sensitive_clf, noisy);
  loss.l_reg = lambda_reg * (utility_clf.WeightSquaredNorm() + sensitive_clf.WeightSquaredNorm());
  loss.total = loss.h_t + loss.l_u + loss.l_vlb - loss.l_reg;
  return loss;
}

absl::StatusOr<std::vector<NoiseSweepPoint>> NoiseSweep(const GaussianModel& model,
                                                        const std::vector<double>& scales) {
  PF_RETURN_IF_ERROR(ValidateSweepValues(scales));
  const Eigen::VectorXd var_x = model.cov().diagonal().head(model.dim_x());
  std::vector<NoiseSweepPoint> out;
  for (double scale : scales) {
    PF_ASSIGN_OR_RETURN(const GaussianModel noisy, Infuse(model, NoiseSpec{scale * var_x}));
    NoiseSweepPoint p;
    p.scale = scale;
    PF_ASSIGN_OR_RETURN(p.i_xc_s, GaussianMi(noisy, noisy.x_block(), noisy.s_block()));
    PF_ASSIGN_OR_RETURN(p.i_xc_u, GaussianMi(noisy, noisy.x_block(), noisy.u_block()));
    out.push_back(p);
  }
  return out;
}

}  // namespace privfunnel
