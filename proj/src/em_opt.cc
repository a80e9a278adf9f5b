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

#include "privfunnel/em_opt.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace privfunnel {
namespace {

constexpr int kMaxBacktracks = 60;
constexpr double kAlphaGrowth = 1.1;
constexpr double kAlphaCapFactor = 10.0;

// Cost of the surrogate with q held fixed: -(lower bound) + lambda * privacy.
absl::StatusOr<double> SurrogateCost(const DiscreteJoint& j, const Channel& ch,
                                     const VariationalDecoder& q, double lambda,
                                     PrivacyTerm term, double l2) {
  PF_ASSIGN_OR_RETURN(const ObjectiveReport r, SurrogateObjective(j, ch, q, lambda, term));
  return -r.surrogate_value + l2 * ch.logits().squaredNorm();
}

Eigen::MatrixXd RowCentred(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out = logits;
  for (Eigen::Index r = 0; r < out.rows(); ++r) out.row(r).array() -= out.row(r).mean();
  return out;
}

}  // namespace

absl::StatusOr<VariationalDecoder> EStep(const DiscreteJoint& j, const Channel& ch) {
  PF_ASSIGN_OR_RETURN(const DiscreteJoint pushed, PushThroughChannel(j, ch));
  return VariationalDecoder::FromProbabilities(ExactPosterior(pushed.MarginalXU()));
}

absl::StatusOr<double> EmCost(const DiscreteJoint& j, const Channel& ch, double lambda,
                              PrivacyTerm term) {
  PF_ASSIGN_OR_RETURN(const ChannelInformation info, EvaluateChannel(j, ch));
  const double privacy = term == PrivacyTerm::kExact ? info.i_ys : info.i_xs;
  return -(info.i_yu - lambda * privacy);
}

absl::StatusOr<double> LiteralEmCost(const DiscreteJoint& j, const Channel& ch,
                                     double lambda) {
  PF_ASSIGN_OR_RETURN(const DiscreteJoint pushed, PushThroughChannel(j, ch));
  // Axis order of the pushed joint is (y, u, s); ConditionalEntropy wants
  // the conditioning variable in the rows.
  const double h_y_given_u = ConditionalEntropy(pushed.MarginalXU().transpose().eval());
  const double h_y_given_s = ConditionalEntropy(pushed.MarginalXS().transpose().eval());
  return h_y_given_u - lambda * h_y_given_s;
}

absl::StatusOr<MStepResult> MStep(const DiscreteJoint& j, const Channel& ch,
                                  const VariationalDecoder& q, double lambda, double alpha,
                                  PrivacyTerm term, double l2) {
  if (!(alpha > 0)) return MakeError(ErrorKind::kInvalidArgument, "alpha must be > 0");
  PF_ASSIGN_OR_RETURN(const double base, SurrogateCost(j, ch, q, lambda, term, l2));
  if (!std::isfinite(base)) {
    return MakeError(ErrorKind::kNonFiniteObjective, "M-step cost is not finite");
  }
  PF_ASSIGN_OR_RETURN(SurrogateGradient g, AnalyticGradient(j, ch, q, lambda, term));
  // Ascent direction of the surrogate objective = descent direction of cost.
  Eigen::MatrixXd direction = g.theta;
  if (l2 > 0) direction -= 2.0 * l2 * ch.logits();

  MStepResult result{ch, 0.0, false};
  if (direction.squaredNorm() == 0) return result;
  double step = alpha;
  for (int bt = 0; bt < kMaxBacktracks; ++bt) {
    auto cand = Channel::FromLogits(ch.logits() + step * direction);
    if (cand.ok()) {
      auto cost = SurrogateCost(j, *cand, q, lambda, term, l2);
      if (cost.ok() && std::isfinite(*cost) && *cost <= base) {
        result.channel = *std::move(cand);
        result.alpha = step;
        result.moved = true;
        return result;
      }
    }
    step *= 0.5;
  }
  return result;
}

absl::StatusOr<EmResult> RunEm(const DiscreteJoint& j, const TradeoffConfig& cfg) {
  PF_RETURN_IF_ERROR(cfg.Validate());
  std::mt19937_64 rng(cfg.seed);
  PF_ASSIGN_OR_RETURN(Channel ch,
                      Channel::FromLogits(InitialLogits(j.nx(), cfg.y_size, rng)));
  double alpha = cfg.alpha0;
  const double alpha_cap = kAlphaCapFactor * cfg.alpha0;

  EmTrace trace;
  trace.status = TerminalStatus::kMaxIters;
  VariationalDecoder q = VariationalDecoder::Uniform(j.nu(), cfg.y_size);
  double previous_cost = 0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    PF_ASSIGN_OR_RETURN(q, EStep(j, ch));
    PF_ASSIGN_OR_RETURN(const DiscreteJoint pushed, PushThroughChannel(j, ch));
    const Eigen::MatrixXd joint_yu = pushed.MarginalXU();
    const Eigen::MatrixXd posterior = ExactPosterior(joint_yu);
    const Eigen::MatrixXd qp = q.Probabilities();

    EmRecord rec;
    for (Eigen::Index u = 0; u < joint_yu.cols(); ++u) {
      const double pu = joint_yu.col(u).sum();
      if (pu == 0) continue;
      PF_ASSIGN_OR_RETURN(const double kl, KlDivergence(posterior.row(u).transpose(),
                                                        qp.row(u).transpose()));
      rec.kl_gap += pu * kl;
    }
    PF_ASSIGN_OR_RETURN(rec.cost, EmCost(j, ch, cfg.lambda, cfg.privacy_term));
    PF_ASSIGN_OR_RETURN(rec.literal_cost, LiteralEmCost(j, ch, cfg.lambda));
    if (!std::isfinite(rec.cost)) {
      trace.records.push_back(rec);
      trace.status = TerminalStatus::kNonFiniteObjective;
      break;
    }
    if (iter > 0 && std::abs(rec.cost - previous_cost) < cfg.epsilon) {
      trace.records.push_back(rec);
      trace.status = TerminalStatus::kConverged;
      break;
    }
    previous_cost = rec.cost;

    auto m = MStep(j, ch, q, cfg.lambda, alpha, cfg.privacy_term, cfg.l2);
    if (!m.ok()) {
      trace.records.push_back(rec);
      if (ErrorKindOf(m.status()) == ErrorKind::kNonFiniteObjective) {
        trace.status = TerminalStatus::kNonFiniteObjective;
        break;
      }
      return m.status();
    }
    rec.theta_delta_norm = (m->channel.logits() - ch.logits()).norm();
    rec.alpha = m->alpha;
    alpha = m->moved ? std::min(m->alpha * kAlphaGrowth, alpha_cap)
                     : std::max(alpha * 0.5, 1e-12 * cfg.alpha0);
    ch = std::move(m->channel);
    trace.records.push_back(rec);
  }
  if (trace.status == TerminalStatus::kMaxIters) {
    PF_ASSIGN_OR_RETURN(q, EStep(j, ch));
  }
  return EmResult{std::move(ch), std::move(q), std::move(trace)};
}

absl::StatusOr<std::vector<TradeoffPoint>> SweepEm(const DiscreteJoint& j,
                                                   const std::vector<double>& lambdas,
                                                   const TradeoffConfig& cfg) {
  PF_RETURN_IF_ERROR(ValidateSweepValues(lambdas));
  const double i_xu = MutualInformation(j.MarginalXU());
  const double i_xs = MutualInformation(j.MarginalXS());
  std::vector<TradeoffPoint> points;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    TradeoffConfig point_cfg = cfg;
    point_cfg.lambda = lambdas[i];
    point_cfg.seed = cfg.seed + i;
    auto run = RunEm(j, point_cfg);
    auto info = run.ok() ? EvaluateChannel(j, run->channel)
                         : absl::StatusOr<ChannelInformation>(run.status());
    if (!info.ok()) {
      points.push_back(MakeTradeoffPoint(lambdas[i], 0, 0, i_xu, i_xs, "Failed"));
      continue;
    }
    points.push_back(MakeTradeoffPoint(lambdas[i], info->i_yu, info->i_ys, i_xu, i_xs,
                                       std::string(TerminalStatusName(run->trace.status))));
  }
  return points;
}

absl::StatusOr<SensitivityReport> SensitivityProbe(const DiscreteJoint& j,
                                                   const TradeoffConfig& cfg,
                                                   double delta_scale) {
  if (!(delta_scale >= 0) || !std::isfinite(delta_scale)) {
    return MakeError(ErrorKind::kInvalidArgument, "delta_scale must be >= 0");
  }
  const Eigen::MatrixXd& table = j.table();
  std::mt19937_64 rng(cfg.seed ^ 0x5eed5eed5eed5eedULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd direction(table.rows(), table.cols());
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    for (Eigen::Index c = 0; c < table.cols(); ++c) direction(r, c) = dist(rng);
  direction.array() -= direction.mean();
  const double most_negative = direction.minCoeff();
  if (most_negative < 0) direction /= -most_negative;

  const Eigen::MatrixXd delta = delta_scale * direction;
  const Eigen::MatrixXd perturbed = table + delta;
  if ((perturbed.array() < 0).any()) {
    return MakeError(ErrorKind::kInvalidPerturbation,
                     "perturbation drives a probability below zero");
  }
  PF_ASSIGN_OR_RETURN(const DiscreteJoint moved,
                      DiscreteJoint::FromMatrix(perturbed / perturbed.sum(), j.nu(), j.ns()));
  PF_ASSIGN_OR_RETURN(const EmResult base, RunEm(j, cfg));
  PF_ASSIGN_OR_RETURN(const EmResult other, RunEm(moved, cfg));

  SensitivityReport report;
  report.delta_norm = delta.norm();
  report.theta_delta_norm =
      (RowCentred(other.channel.logits()) - RowCentred(base.channel.logits())).norm();
  report.ratio = report.delta_norm > 0 ? report.theta_delta_norm / report.delta_norm : 0.0;
  return report;
}

}  // namespace privfunnel
