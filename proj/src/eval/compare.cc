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

#include "privfunnel/eval/compare.h"

#include <array>
#include <map>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privfunnel/em_opt.h"
#include "privfunnel/eval/baselines.h"
#include "privfunnel/status.h"

namespace privfunnel::eval {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames = {{
    {Method::kIdentity, "identity"},
    {Method::kMask, "mask"},
    {Method::kKAnonymity, "kanon"},
    {Method::kNoise, "noise"},
    {Method::kGrad, "grad"},
    {Method::kEm, "em"},
}};

absl::StatusOr<SampleTable> ChannelMethod(Method method, const SampleTable& table,
                                          const CompareOptions& options) {
  PF_ASSIGN_OR_RETURN(const EmpiricalJoint emp, EstimateJoint(table, options.bins));
  TradeoffConfig cfg = options.tradeoff;
  cfg.seed = options.seed;
  Channel channel = Channel::Identity(1);
  if (method == Method::kGrad) {
    PF_ASSIGN_OR_RETURN(OptResult r, Optimize(emp.joint, cfg));
    if (r.trace.status == TerminalStatus::kNonFiniteObjective) {
      return MakeError(ErrorKind::kNonFiniteObjective, "gradient run diverged");
    }
    channel = std::move(r.channel);
  } else {
    PF_ASSIGN_OR_RETURN(EmResult r, RunEm(emp.joint, cfg));
    if (r.trace.status == TerminalStatus::kNonFiniteObjective) {
      return MakeError(ErrorKind::kNonFiniteObjective, "EM run diverged");
    }
    channel = std::move(r.channel);
  }
  return ReleaseThroughChannel(table, emp.x_codes, channel, options.seed);
}

}  // namespace

std::string_view MethodName(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

absl::StatusOr<Method> ParseMethod(std::string_view name) {
  for (const auto& [m, n] : kMethodNames)
    if (n == name) return m;
  return MakeError(ErrorKind::kInvalidArgument,
                   absl::StrCat("unknown method '", std::string(name), "'"));
}

absl::StatusOr<EmpiricalJoint> EstimateJoint(const SampleTable& table, int bins) {
  if (bins < 1) return MakeError(ErrorKind::kInvalidArgument, "bins must be >= 1");
  const DatasetSchema& schema = table.schema();
  const Eigen::Index n = table.rows();
  std::vector<Eigen::VectorXi> codes;
  for (int f : schema.feature_indices()) {
    const Eigen::VectorXd col = table.column(f);
    codes.push_back(schema.column(f).categorical() ? col.cast<int>().eval()
                                                   : QuantileCodes(col, bins));
  }
  std::map<std::vector<int>, int> index;
  std::vector<int> key(codes.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < codes.size(); ++c) key[c] = codes[c](r);
    index.emplace(key, 0);
  }
  int next = 0;
  for (auto& [unused, id] : index) id = next++;

  const int nu = schema.column(schema.utility_index()).cardinality;
  const int ns = schema.column(schema.sensitive_index()).cardinality;
  const Eigen::VectorXi u = table.labels(ColumnRole::kUtilityLabel);
  const Eigen::VectorXi s = table.labels(ColumnRole::kSensitiveLabel);
  Eigen::VectorXi x_codes(n);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(next, nu * ns);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < codes.size(); ++c) key[c] = codes[c](r);
    x_codes(r) = index[key];
    counts(x_codes(r), u(r) * ns + s(r)) += 1;
  }
  PF_ASSIGN_OR_RETURN(DiscreteJoint joint,
                      DiscreteJoint::FromMatrix(counts / static_cast<double>(n), nu, ns));
  return EmpiricalJoint{std::move(joint), std::move(x_codes)};
}

absl::StatusOr<GaussianModel> FitGaussian(const SampleTable& table) {
  const DatasetSchema& schema = table.schema();
  std::vector<int> cols = schema.numeric_feature_indices();
  if (cols.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "noise infusion needs numeric features");
  }
  const int dx = static_cast<int>(cols.size());
  cols.push_back(schema.utility_index());
  cols.push_back(schema.sensitive_index());
  const Eigen::Index n = table.rows();
  if (n < 2) return MakeError(ErrorKind::kInvalidArgument, "need at least two rows");
  Eigen::MatrixXd z(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) z.col(c) = table.column(cols[c]);
  const Eigen::VectorXd mean = z.colwise().mean().transpose();
  z.rowwise() -= mean.transpose();
  Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);
  cov = 0.5 * (cov + cov.transpose());
  return GaussianModel::Create(dx, 1, 1, mean, std::move(cov));
}

absl::StatusOr<SampleTable> ReleaseThroughChannel(const SampleTable& table,
                                                  const Eigen::VectorXi& x_codes,
                                                  const Channel& channel, std::uint64_t seed) {
  if (x_codes.size() != table.rows()) {
    return MakeError(ErrorKind::kDimensionMismatch, "one code per row is required");
  }
  if (x_codes.size() > 0 &&
      (x_codes.minCoeff() < 0 || x_codes.maxCoeff() >= channel.input_size())) {
    return MakeError(ErrorKind::kDimensionMismatch, "codes exceed the channel input size");
  }
  const DatasetSchema& schema = table.schema();
  const ColumnSpec& us = schema.column(schema.utility_index());
  const ColumnSpec& cs = schema.column(schema.sensitive_index());
  PF_ASSIGN_OR_RETURN(
      DatasetSchema out_schema,
      DatasetSchema::Create({{"y", ColumnRole::kFeature, static_cast<int>(channel.output_size())},
                             us,
                             cs}));
  const Eigen::MatrixXd probs = channel.Probabilities();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd data(table.rows(), 3);
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    const double v = unif(rng);
    double acc = 0;
    Eigen::Index y = probs.cols() - 1;
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      acc += probs(x_codes(r), c);
      if (v < acc) {
        y = c;
        break;
      }
    }
    data(r, 0) = static_cast<double>(y);
    data(r, 1) = table.data()(r, schema.utility_index());
    data(r, 2) = table.data()(r, schema.sensitive_index());
  }
  return SampleTable::Create(std::move(out_schema), std::move(data));
}

absl::StatusOr<SampleTable> ApplyMethod(Method method, const SampleTable& table,
                                        const CompareOptions& options) {
  switch (method) {
    case Method::kIdentity:
      return table;
    case Method::kMask: {
      std::vector<std::string> cols = options.mask_columns;
      if (cols.empty()) {
        for (int f : table.schema().feature_indices())
          cols.push_back(table.schema().column(f).name);
      }
      return MaskColumns(table, cols);
    }
    case Method::kKAnonymity:
      return KAnonymize(table, options.k);
    case Method::kNoise: {
      PF_ASSIGN_OR_RETURN(const GaussianModel model, FitGaussian(table));
      PF_ASSIGN_OR_RETURN(const NoiseSpec noise, OptimizeSigma(model, options.noise_slack));
      return ApplyNoise(table, noise, options.seed);
    }
    case Method::kGrad:
    case Method::kEm:
      return ChannelMethod(method, table, options);
  }
  return MakeError(ErrorKind::kInvalidArgument, "unknown method");
}

absl::StatusOr<std::vector<CompareRow>> Compare(const std::vector<Method>& methods,
                                                const SampleTable& table,
                                                const CompareOptions& options) {
  if (methods.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "compare needs at least one method");
  }
  ScoreOptions score = options.score;
  score.seed = options.seed;
  std::vector<CompareRow> rows;
  for (Method m : methods) {
    CompareRow row;
    row.method = m;
    absl::StatusOr<SampleTable> released = ApplyMethod(m, table, options);
    if (!released.ok()) {
      row.status = released.status();
    } else {
      absl::StatusOr<ScoreCard> card = Score(table, *released, score);
      if (card.ok()) {
        row.card = *card;
      } else {
        row.status = card.status();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace privfunnel::eval
