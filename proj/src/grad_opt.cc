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

#include "privfunnel/grad_opt.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace privfunnel {
namespace {

constexpr double kLogFloor = 1e-300;
constexpr int kMaxBacktracks = 60;
constexpr double kAlphaGrowth = 1.1;
constexpr double kAlphaCapFactor = 10.0;

double SafeLog(double p) { return std::log(std::max(p, kLogFloor)); }

// Chain rule through a row softmax: dF/dlogit from dF/dprob.
Eigen::MatrixXd SoftmaxBackward(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& grad) {
  Eigen::MatrixXd out(probs.rows(), probs.cols());
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    const double inner = probs.row(r).dot(grad.row(r));
    out.row(r) = (probs.row(r).array() * (grad.row(r).array() - inner)).matrix();
  }
  return out;
}

struct Evaluation {
  ObjectiveReport report;
  double objective = 0;  // surrogate minus the optional L2 penalty
};

absl::StatusOr<Evaluation> Evaluate(const DiscreteJoint& j, const Channel& ch,
                                    const VariationalDecoder& q, double lambda,
                                    const TradeoffConfig& cfg) {
  Evaluation e;
  PF_ASSIGN_OR_RETURN(e.report, SurrogateObjective(j, ch, q, lambda, cfg.privacy_term));
  e.objective = e.report.surrogate_value - cfg.l2 * ch.logits().squaredNorm();
  return e;
}

}  // namespace

absl::Status TradeoffConfig::Validate() const {
  if (!(lambda >= 0) || !std::isfinite(lambda)) {
    return MakeError(ErrorKind::kInvalidArgument, "lambda must be finite and >= 0");
  }
  if (!(alpha0 > 0)) return MakeError(ErrorKind::kInvalidArgument, "alpha0 must be > 0");
  if (!(epsilon > 0)) return MakeError(ErrorKind::kInvalidArgument, "epsilon must be > 0");
  if (max_iters < 1) return MakeError(ErrorKind::kInvalidArgument, "max_iters must be >= 1");
  if (y_size < 1) return MakeError(ErrorKind::kInvalidArgument, "y_size must be >= 1");
  if (!(l2 >= 0)) return MakeError(ErrorKind::kInvalidArgument, "l2 must be >= 0");
  return absl::OkStatus();
}

std::string_view TerminalStatusName(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kConverged:
      return "Converged";
    case TerminalStatus::kMaxIters:
      return "MaxIters";
    case TerminalStatus::kNonFiniteObjective:
      return "NonFiniteObjective";
  }
  return "Unknown";
}

absl::StatusOr<SurrogateGradient> AnalyticGradient(const DiscreteJoint& j,
                                                   const Channel& ch,
                                                   const VariationalDecoder& q,
                                                   double lambda, PrivacyTerm term) {
  if (ch.input_size() != j.nx()) {
    return MakeError(ErrorKind::kDimensionMismatch, "channel input alphabet != |X|");
  }
  if (q.input_size() != j.nu() || q.output_size() != ch.output_size()) {
    return MakeError(ErrorKind::kDimensionMismatch, "decoder shape does not match");
  }
  const Eigen::MatrixXd w = ch.Probabilities();
  const Eigen::MatrixXd qp = q.Probabilities();
  const Eigen::MatrixXd p_xu = j.MarginalXU();
  const Eigen::MatrixXd p_xs = j.MarginalXS();
  const Eigen::VectorXd p_x = j.MarginalX();
  const Eigen::MatrixXd p_yu = w.transpose() * p_xu;
  const Eigen::MatrixXd p_ys = w.transpose() * p_xs;
  const Eigen::VectorXd p_y = w.transpose() * p_x;
  const Eigen::Index ny = w.cols();

  const Eigen::MatrixXd log_q = qp.array().log().matrix();
  const Eigen::VectorXd log_py = p_y.unaryExpr([](double v) { return SafeLog(v); });

  // dF/dW[x,y] for the lower bound: sum_u p(x,u) log q(y|u) - p(x)(log p(y) + 1).
  Eigen::MatrixXd grad_w = p_xu * log_q;
  for (Eigen::Index y = 0; y < ny; ++y) grad_w.col(y) -= p_x * (log_py(y) + 1.0);

  if (term == PrivacyTerm::kExact && lambda != 0) {
    const Eigen::MatrixXd log_pys = p_ys.unaryExpr([](double v) { return SafeLog(v); });
    // dI(Y;S)/dW[x,y] = sum_s p(x,s) log p(y,s) - p(x) log p(y).
    Eigen::MatrixXd grad_i = p_xs * log_pys.transpose();
    for (Eigen::Index y = 0; y < ny; ++y) grad_i.col(y) -= p_x * log_py(y);
    grad_w -= lambda * grad_i;
  }

  SurrogateGradient g;
  g.theta = SoftmaxBackward(w, grad_w);

  const Eigen::VectorXd p_u = p_xu.colwise().sum().transpose();
  g.phi = p_yu.transpose() - p_u.asDiagonal() * qp;
  const Eigen::MatrixXd& phi = q.logits();
  for (Eigen::Index u = 0; u < phi.rows(); ++u)
    for (Eigen::Index y = 0; y < phi.cols(); ++y)
      if (std::abs(phi(u, y)) > kDecoderLogitClamp) g.phi(u, y) = 0;
  return g;
}

double PrecomputeBaseline(const DiscreteJoint& j) {
  return PrivacyUpperBound(j.MarginalXS());
}

Eigen::MatrixXd InitialLogits(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

absl::StatusOr<OptResult> Optimize(const DiscreteJoint& j, const TradeoffConfig& cfg) {
  PF_RETURN_IF_ERROR(cfg.Validate());
  std::mt19937_64 rng(cfg.seed);
  Eigen::MatrixXd theta = InitialLogits(j.nx(), cfg.y_size, rng);
  Eigen::MatrixXd phi = InitialLogits(j.nu(), cfg.y_size, rng);

  PF_ASSIGN_OR_RETURN(Channel ch, Channel::FromLogits(theta));
  PF_ASSIGN_OR_RETURN(VariationalDecoder q, VariationalDecoder::FromLogits(phi));
  double lambda = cfg.lambda;
  double alpha = cfg.alpha0;
  const double alpha_cap = kAlphaCapFactor * cfg.alpha0;

  PF_ASSIGN_OR_RETURN(Evaluation current, Evaluate(j, ch, q, lambda, cfg));
  OptTrace trace;
  trace.status = TerminalStatus::kMaxIters;
  if (!std::isfinite(current.objective)) {
    trace.status = TerminalStatus::kNonFiniteObjective;
    return OptResult{std::move(ch), std::move(q), std::move(trace)};
  }

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    PF_ASSIGN_OR_RETURN(SurrogateGradient g,
                        AnalyticGradient(j, ch, q, lambda, cfg.privacy_term));
    if (cfg.l2 > 0) g.theta -= 2.0 * cfg.l2 * ch.logits();
    const double grad_norm = std::sqrt(g.theta.squaredNorm() + g.phi.squaredNorm());

    // Backtracking: halve alpha until the objective does not decrease.
    bool accepted = false;
    Channel next_ch = ch;
    VariationalDecoder next_q = q;
    Evaluation next = current;
    double step = alpha;
    if (grad_norm > 0) {
      for (int bt = 0; bt < kMaxBacktracks; ++bt) {
        auto cand_ch = Channel::FromLogits(ch.logits() + step * g.theta);
        auto cand_q = VariationalDecoder::FromLogits(q.logits() + step * g.phi);
        if (cand_ch.ok() && cand_q.ok()) {
          auto cand = Evaluate(j, *cand_ch, *cand_q, lambda, cfg);
          if (cand.ok() && std::isfinite(cand->objective) &&
              cand->objective >= current.objective) {
            next_ch = *std::move(cand_ch);
            next_q = *std::move(cand_q);
            next = *cand;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
    }

    IterationRecord rec;
    rec.gradient_norm = grad_norm;
    rec.lambda = lambda;
    if (accepted) {
      rec.theta_delta_norm = (next_ch.logits() - ch.logits()).norm();
      rec.alpha = step;
      alpha = std::min(step * kAlphaGrowth, alpha_cap);
    } else {
      rec.alpha = 0;
      alpha = step;
    }
    const double delta = next.objective - current.objective;
    ch = std::move(next_ch);
    q = std::move(next_q);
    current = next;

    rec.objective = current.objective;
    rec.i_yu = current.report.exact_iyu;
    rec.i_ys = current.report.exact_iys;
    trace.records.push_back(rec);

    if (!std::isfinite(current.objective)) {
      trace.status = TerminalStatus::kNonFiniteObjective;
      break;
    }
    if (std::abs(delta) < cfg.epsilon) {
      trace.status = TerminalStatus::kConverged;
      break;
    }

    if (cfg.lambda_controller.kind == LambdaController::Kind::kBudget) {
      lambda *= std::exp(cfg.lambda_controller.gain *
                         (current.report.exact_iys -
                          cfg.lambda_controller.target_leakage_nats));
      if (!std::isfinite(lambda)) {
        trace.status = TerminalStatus::kNonFiniteObjective;
        break;
      }
      PF_ASSIGN_OR_RETURN(current, Evaluate(j, ch, q, lambda, cfg));
    }
  }
  return OptResult{std::move(ch), std::move(q), std::move(trace)};
}

TradeoffPoint MakeTradeoffPoint(double param, double i_yu, double i_ys, double i_xu,
                                double i_xs, std::string status) {
  TradeoffPoint p;
  p.param = param;
  p.i_yu = i_yu;
  p.i_ys = i_ys;
  p.utility_score = i_xu > 0 ? std::clamp(i_yu / i_xu, 0.0, 1.0) : 1.0;
  p.privacy_score = i_xs > 0 ? std::clamp(1.0 - i_ys / i_xs, 0.0, 1.0) : 1.0;
  p.status = std::move(status);
  return p;
}

absl::Status ValidateSweepValues(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0) || !std::isfinite(values[i])) {
      return MakeError(ErrorKind::kInvalidArgument, "sweep values must be finite and >= 0");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      return MakeError(ErrorKind::kInvalidArgument, "sweep values must be strictly increasing");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<TradeoffPoint>> Sweep(const DiscreteJoint& j,
                                                 const std::vector<double>& lambdas,
                                                 const TradeoffConfig& cfg) {
  PF_RETURN_IF_ERROR(ValidateSweepValues(lambdas));
  const double i_xu = MutualInformation(j.MarginalXU());
  const double i_xs = MutualInformation(j.MarginalXS());
  std::vector<TradeoffPoint> points;
  points.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    TradeoffConfig point_cfg = cfg;
    point_cfg.lambda = lambdas[i];
    point_cfg.seed = cfg.seed + i;
    auto run = Optimize(j, point_cfg);
    if (!run.ok()) {
      points.push_back(MakeTradeoffPoint(lambdas[i], 0, 0, i_xu, i_xs, "Failed"));
      continue;
    }
    auto info = EvaluateChannel(j, run->channel);
    if (!info.ok()) {
      points.push_back(MakeTradeoffPoint(lambdas[i], 0, 0, i_xu, i_xs, "Failed"));
      continue;
    }
    points.push_back(MakeTradeoffPoint(lambdas[i], info->i_yu, info->i_ys, i_xu, i_xs,
                                       std::string(TerminalStatusName(run->trace.status))));
  }
  return points;
}

}  // namespace privfunnel
