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

#include "privfunnel/eval/baselines.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privfunnel/status.h"

namespace privfunnel::eval {
namespace {

constexpr int kMaxLevel = 64;

int DistinctCount(const Eigen::VectorXd& v) {
  return static_cast<int>(std::set<double>(v.begin(), v.end()).size());
}

Eigen::VectorXi LevelCodes(const Eigen::VectorXd& values, const ColumnSpec& spec, int level) {
  if (!spec.categorical()) return QuantileCodes(values, level);
  Eigen::VectorXi codes(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    codes(i) = static_cast<int>(static_cast<long>(values(i)) * level / spec.cardinality);
  }
  return codes;
}

}  // namespace

Eigen::VectorXi QuantileCodes(const Eigen::VectorXd& values, int bins) {
  const Eigen::Index n = values.size();
  Eigen::VectorXi codes = Eigen::VectorXi::Zero(n);
  if (bins <= 1 || n == 0) return codes;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k) {
    edges.push_back(sorted[static_cast<std::size_t>(static_cast<long>(k) * n / bins)]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    codes(i) = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), values(i)) -
                                edges.begin());
  }
  // Collapse empty bins so codes stay dense.
  std::map<int, int> dense;
  for (Eigen::Index i = 0; i < n; ++i) dense.emplace(codes(i), 0);
  int next = 0;
  for (auto& [code, mapped] : dense) mapped = next++;
  for (Eigen::Index i = 0; i < n; ++i) codes(i) = dense[codes(i)];
  return codes;
}

absl::StatusOr<SampleTable> MaskColumns(const SampleTable& table,
                                        const std::vector<std::string>& columns) {
  const DatasetSchema& schema = table.schema();
  Eigen::MatrixXd data = table.data();
  for (const std::string& name : columns) {
    const int idx = schema.index_of(name);
    if (idx < 0 || schema.column(idx).role != ColumnRole::kFeature) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("'", name, "' is not a feature column"));
    }
    const ColumnSpec& spec = schema.column(idx);
    double fill = 0;
    if (spec.categorical()) {
      std::vector<long> counts(spec.cardinality, 0);
      for (Eigen::Index r = 0; r < data.rows(); ++r) ++counts[static_cast<long>(data(r, idx))];
      fill = static_cast<double>(std::max_element(counts.begin(), counts.end()) -
                                 counts.begin());
    } else {
      fill = data.col(idx).mean();
    }
    data.col(idx).setConstant(fill);
  }
  return SampleTable::Create(schema, std::move(data));
}

absl::StatusOr<SampleTable> KAnonymize(const SampleTable& table, int k) {
  if (k < 1) return MakeError(ErrorKind::kInvalidArgument, "k must be >= 1");
  const Eigen::Index n = table.rows();
  if (k == 1) return table;
  if (n < k) {
    return MakeError(ErrorKind::kCannotAnonymize,
                     absl::StrCat("only ", n, " rows, fewer than k = ", k));
  }
  const DatasetSchema& schema = table.schema();
  const std::vector<int>& features = schema.feature_indices();
  int top = 1;
  for (int f : features) top = std::max(top, DistinctCount(table.column(f)));
  top = std::min(top, kMaxLevel);

  for (int level = top; level >= 1; --level) {
    std::vector<Eigen::VectorXi> codes;
    for (int f : features) codes.push_back(LevelCodes(table.column(f), schema.column(f), level));
    std::map<std::vector<int>, long> groups;
    std::vector<int> key(features.size());
    for (Eigen::Index r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < features.size(); ++c) key[c] = codes[c](r);
      ++groups[key];
    }
    long smallest = n;
    for (const auto& [unused, count] : groups) smallest = std::min(smallest, count);
    if (smallest < k) continue;

    Eigen::MatrixXd data = table.data();
    for (std::size_t c = 0; c < features.size(); ++c) {
      const int f = features[c];
      std::map<int, std::pair<double, long>> stats;  // sum or min, count
      for (Eigen::Index r = 0; r < n; ++r) {
        auto [it, fresh] = stats.emplace(codes[c](r), std::make_pair(data(r, f), 0L));
        auto& [acc, count] = it->second;
        if (schema.column(f).categorical()) {
          acc = std::min(acc, data(r, f));
        } else if (!fresh) {
          acc += data(r, f);
        }
        ++count;
      }
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto& [acc, count] = stats[codes[c](r)];
        data(r, f) = schema.column(f).categorical() ? acc : acc / static_cast<double>(count);
      }
    }
    return SampleTable::Create(schema, std::move(data));
  }
  return MakeError(ErrorKind::kCannotAnonymize, "full generalization is still below k");
}

}  // namespace privfunnel::eval
