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

// Exact finite-alphabet probability: joints over (x, u, s), marginals,
// channels, entropy, KL divergence and mutual information. All quantities are
// in nats. Everything here is a pure function of immutable values.

#ifndef PRIVFUNNEL_CORE_PROB_H_
#define PRIVFUNNEL_CORE_PROB_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privfunnel/status.h"

namespace privfunnel {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kNormalizationTolerance = 1e-12;

// x * log(y) with the convention 0 * log(anything) = 0.
template <typename Scalar>
Scalar XLogY(const Scalar& x, const Scalar& y) {
  using std::log;
  if (x == Scalar(0)) return Scalar(0);
  return x * log(y);
}

template <typename Derived>
absl::Status ValidateProbabilities(const Eigen::DenseBase<Derived>& p,
                                   double tolerance = kNormalizationTolerance) {
  using Scalar = typename Derived::Scalar;
  if (p.size() == 0) {
    return MakeError(ErrorKind::kInvalidDistribution, "empty alphabet");
  }
  Scalar total(0);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const Scalar v = p(i, j);
      if (!(v >= Scalar(0))) {
        return MakeError(ErrorKind::kInvalidDistribution,
                         "negative or non-finite probability");
      }
      total += v;
    }
  }
  using std::abs;
  if (!(abs(total - Scalar(1)) <= Scalar(tolerance))) {
    return MakeError(ErrorKind::kInvalidDistribution,
                     "probabilities do not sum to 1");
  }
  return absl::OkStatus();
}

// A validated probability vector over a single alphabet.
template <typename Scalar>
class BasicDistribution {
 public:
  static absl::StatusOr<BasicDistribution> Create(VectorX<Scalar> probs) {
    PF_RETURN_IF_ERROR(ValidateProbabilities(probs));
    return BasicDistribution(std::move(probs));
  }
  static BasicDistribution Uniform(Eigen::Index n) {
    return BasicDistribution(VectorX<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
  }

  const VectorX<Scalar>& probs() const { return probs_; }
  Eigen::Index size() const { return probs_.size(); }
  Scalar operator[](Eigen::Index i) const { return probs_(i); }

 private:
  explicit BasicDistribution(VectorX<Scalar> probs) : probs_(std::move(probs)) {}
  VectorX<Scalar> probs_;
};

using Distribution = BasicDistribution<double>;

// Shannon entropy in nats of a probability vector (or any dense expression
// whose coefficients form one).
template <typename Derived>
typename Derived::Scalar Entropy(const Eigen::DenseBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Scalar h(0);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) h -= XLogY(p(i, j), p(i, j));
  }
  return h;
}

template <typename Scalar>
Scalar Entropy(const BasicDistribution<Scalar>& d) {
  return Entropy(d.probs());
}

// KL(p || q). SupportMismatch when p puts mass where q has none.
template <typename DerivedP, typename DerivedQ>
absl::StatusOr<typename DerivedP::Scalar> KlDivergence(
    const Eigen::DenseBase<DerivedP>& p, const Eigen::DenseBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  using std::log;
  if (p.size() != q.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("alphabet sizes ", p.size(), " vs ", q.size()));
  }
  Scalar kl(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p.derived().coeff(i);
    const Scalar qi = q.derived().coeff(i);
    if (pi == Scalar(0)) continue;
    if (qi == Scalar(0)) {
      return MakeError(ErrorKind::kSupportMismatch,
                       absl::StrCat("p(", i, ") > 0 but q(", i, ") = 0"));
    }
    kl += pi * log(pi / qi);
  }
  return kl;
}

template <typename Scalar>
absl::StatusOr<Scalar> KlDivergence(const BasicDistribution<Scalar>& p,
                                    const BasicDistribution<Scalar>& q) {
  return KlDivergence(p.probs(), q.probs());
}

// I(A; B) for a 2-D joint with rows indexed by a and columns by b.
template <typename Derived>
typename Derived::Scalar MutualInformation(const Eigen::MatrixBase<Derived>& joint) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  const VectorX<Scalar> row = joint.rowwise().sum();
  const VectorX<Scalar> col = joint.colwise().sum().transpose();
  Scalar mi(0);
  for (Eigen::Index a = 0; a < joint.rows(); ++a) {
    for (Eigen::Index b = 0; b < joint.cols(); ++b) {
      const Scalar pab = joint(a, b);
      if (pab == Scalar(0)) continue;
      mi += pab * log(pab / (row(a) * col(b)));
    }
  }
  return mi < Scalar(0) ? Scalar(0) : mi;
}

// H(B | A) for a 2-D joint with rows indexed by a.
template <typename Derived>
typename Derived::Scalar ConditionalEntropy(const Eigen::MatrixBase<Derived>& joint) {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> row = joint.rowwise().sum();
  return Entropy(joint) - Entropy(row);
}

// Row-wise softmax of a logit matrix.
template <typename Derived>
MatrixX<typename Derived::Scalar> RowSoftmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  MatrixX<Scalar> out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const Scalar peak = logits.row(r).maxCoeff();
    Scalar total(0);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      out(r, c) = exp(logits(r, c) - peak);
      total += out(r, c);
    }
    out.row(r) /= total;
  }
  return out;
}

enum class Axis { kX = 0, kU = 1, kS = 2 };

// A marginal over a subset of axes; `probs` is row-major over `axes` order.
template <typename Scalar>
struct BasicMarginal {
  std::vector<Axis> axes;
  std::vector<Eigen::Index> dims;
  VectorX<Scalar> probs;

  // Only meaningful for two kept axes: rows index axes[0].
  MatrixX<Scalar> AsMatrix() const {
    MatrixX<Scalar> m(dims.at(0), dims.at(1));
    for (Eigen::Index a = 0; a < dims[0]; ++a)
      for (Eigen::Index b = 0; b < dims[1]; ++b) m(a, b) = probs(a * dims[1] + b);
    return m;
  }
};

// Exact pmf over (x, u, s) triples. Stored as an |X| x (|U|*|S|) matrix whose
// column index is u * |S| + s.
template <typename Scalar>
class BasicDiscreteJoint {
 public:
  // `probs` is row-major over (x, u, s).
  static absl::StatusOr<BasicDiscreteJoint> Create(Eigen::Index nx, Eigen::Index nu,
                                                    Eigen::Index ns,
                                                    const std::vector<Scalar>& probs) {
    if (nx < 1 || nu < 1 || ns < 1) {
      return MakeError(ErrorKind::kInvalidDistribution, "every dimension must be >= 1");
    }
    if (static_cast<Eigen::Index>(probs.size()) != nx * nu * ns) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat("expected ", nx * nu * ns, " probabilities, got ",
                                    probs.size()));
    }
    MatrixX<Scalar> table(nx, nu * ns);
    for (Eigen::Index x = 0; x < nx; ++x)
      for (Eigen::Index c = 0; c < nu * ns; ++c) table(x, c) = probs[x * nu * ns + c];
    return FromMatrix(std::move(table), nu, ns);
  }

  static absl::StatusOr<BasicDiscreteJoint> FromMatrix(MatrixX<Scalar> table,
                                                        Eigen::Index nu, Eigen::Index ns) {
    if (table.rows() < 1 || nu < 1 || ns < 1 || table.cols() != nu * ns) {
      return MakeError(ErrorKind::kDimensionMismatch, "table shape does not match dims");
    }
    PF_RETURN_IF_ERROR(ValidateProbabilities(table));
    return BasicDiscreteJoint(std::move(table), nu, ns);
  }

  Eigen::Index nx() const { return table_.rows(); }
  Eigen::Index nu() const { return nu_; }
  Eigen::Index ns() const { return ns_; }
  Scalar operator()(Eigen::Index x, Eigen::Index u, Eigen::Index s) const {
    return table_(x, u * ns_ + s);
  }
  const MatrixX<Scalar>& table() const { return table_; }

  MatrixX<Scalar> MarginalXU() const {
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(nx(), nu_);
    for (Eigen::Index u = 0; u < nu_; ++u)
      m.col(u) = table_.middleCols(u * ns_, ns_).rowwise().sum();
    return m;
  }
  MatrixX<Scalar> MarginalXS() const {
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(nx(), ns_);
    for (Eigen::Index u = 0; u < nu_; ++u) m += table_.middleCols(u * ns_, ns_);
    return m;
  }
  MatrixX<Scalar> MarginalUS() const {
    const VectorX<Scalar> flat = table_.colwise().sum().transpose();
    MatrixX<Scalar> m(nu_, ns_);
    for (Eigen::Index u = 0; u < nu_; ++u)
      for (Eigen::Index s = 0; s < ns_; ++s) m(u, s) = flat(u * ns_ + s);
    return m;
  }
  VectorX<Scalar> MarginalX() const { return table_.rowwise().sum(); }
  VectorX<Scalar> MarginalU() const { return MarginalXU().colwise().sum().transpose(); }
  VectorX<Scalar> MarginalS() const { return MarginalXS().colwise().sum().transpose(); }

 private:
  BasicDiscreteJoint(MatrixX<Scalar> table, Eigen::Index nu, Eigen::Index ns)
      : table_(std::move(table)), nu_(nu), ns_(ns) {}

  MatrixX<Scalar> table_;
  Eigen::Index nu_;
  Eigen::Index ns_;
};

using DiscreteJoint = BasicDiscreteJoint<double>;

// Sums out every axis not in `keep`. Keeping no axes yields a single entry 1.
template <typename Scalar>
BasicMarginal<Scalar> Marginalize(const BasicDiscreteJoint<Scalar>& j,
                                  std::vector<Axis> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const Eigen::Index full[3] = {j.nx(), j.nu(), j.ns()};
  BasicMarginal<Scalar> out;
  out.axes = keep;
  Eigen::Index size = 1;
  for (Axis a : keep) {
    out.dims.push_back(full[static_cast<int>(a)]);
    size *= full[static_cast<int>(a)];
  }
  out.probs = VectorX<Scalar>::Zero(size);
  for (Eigen::Index x = 0; x < j.nx(); ++x)
    for (Eigen::Index u = 0; u < j.nu(); ++u)
      for (Eigen::Index s = 0; s < j.ns(); ++s) {
        const Eigen::Index idx[3] = {x, u, s};
        Eigen::Index flat = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
          flat = flat * out.dims[k] + idx[static_cast<int>(keep[k])];
        out.probs(flat) += j(x, u, s);
      }
  return out;
}

// Row-stochastic p(y|x) parameterized by unconstrained logits (|X| x |Y|).
template <typename Scalar>
class BasicChannel {
 public:
  static absl::StatusOr<BasicChannel> FromLogits(MatrixX<Scalar> logits) {
    if (logits.rows() < 1 || logits.cols() < 1) {
      return MakeError(ErrorKind::kInvalidArgument, "channel needs |X|, |Y| >= 1");
    }
    if (!logits.allFinite()) {
      return MakeError(ErrorKind::kInvalidArgument, "channel logits must be finite");
    }
    return BasicChannel(std::move(logits));
  }

  // Zero probabilities map to a logit whose softmax weight underflows to
  // exactly zero.
  static absl::StatusOr<BasicChannel> FromProbabilities(const MatrixX<Scalar>& probs) {
    using std::log;
    for (Eigen::Index r = 0; r < probs.rows(); ++r) {
      PF_RETURN_IF_ERROR(ValidateProbabilities(probs.row(r), 1e-10));
    }
    MatrixX<Scalar> logits(probs.rows(), probs.cols());
    for (Eigen::Index r = 0; r < probs.rows(); ++r)
      for (Eigen::Index c = 0; c < probs.cols(); ++c)
        logits(r, c) = probs(r, c) > Scalar(0) ? log(probs(r, c)) : Scalar(kZeroLogit);
    return FromLogits(std::move(logits));
  }

  static BasicChannel Identity(Eigen::Index n) {
    return *FromProbabilities(MatrixX<Scalar>::Identity(n, n));
  }
  // Every input mapped to output symbol `target`.
  static BasicChannel Constant(Eigen::Index nx, Eigen::Index ny, Eigen::Index target = 0) {
    MatrixX<Scalar> p = MatrixX<Scalar>::Zero(nx, ny);
    p.col(target).setOnes();
    return *FromProbabilities(p);
  }

  const MatrixX<Scalar>& logits() const { return logits_; }
  MatrixX<Scalar> Probabilities() const { return RowSoftmax(logits_); }
  Eigen::Index input_size() const { return logits_.rows(); }
  Eigen::Index output_size() const { return logits_.cols(); }

  static constexpr double kZeroLogit = -1000.0;

 private:
  explicit BasicChannel(MatrixX<Scalar> logits) : logits_(std::move(logits)) {}
  MatrixX<Scalar> logits_;
};

using Channel = BasicChannel<double>;

// p(y, u, s) = sum_x p(y|x) p(x, u, s). The result reuses the joint type with
// Y in the first axis.
template <typename Scalar>
absl::StatusOr<BasicDiscreteJoint<Scalar>> PushThroughChannel(
    const BasicDiscreteJoint<Scalar>& j, const BasicChannel<Scalar>& ch) {
  if (ch.input_size() != j.nx()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("channel input alphabet ", ch.input_size(),
                                  " != |X| = ", j.nx()));
  }
  MatrixX<Scalar> pushed = ch.Probabilities().transpose() * j.table();
  // Renormalize away the rounding of the product; the (u, s) marginal is
  // preserved because every channel row sums to one.
  pushed /= pushed.sum();
  return BasicDiscreteJoint<Scalar>::FromMatrix(std::move(pushed), j.nu(), j.ns());
}

}  // namespace privfunnel

#endif  // PRIVFUNNEL_CORE_PROB_H_
