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

#include "privfunnel/eval/table.h"

#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privfunnel/status.h"

namespace privfunnel::eval {

absl::StatusOr<DatasetSchema> DatasetSchema::Create(std::vector<ColumnSpec> columns) {
  DatasetSchema schema;
  std::set<std::string> names;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    const ColumnSpec& c = columns[i];
    if (c.name.empty() || !names.insert(c.name).second) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("column names must be unique and non-empty: '", c.name,
                                    "'"));
    }
    if (c.cardinality < 0) {
      return MakeError(ErrorKind::kInvalidArgument, "negative cardinality");
    }
    switch (c.role) {
      case ColumnRole::kFeature:
        schema.features_.push_back(i);
        break;
      case ColumnRole::kUtilityLabel:
        if (schema.utility_ >= 0) {
          return MakeError(ErrorKind::kInvalidArgument, "more than one utility label");
        }
        schema.utility_ = i;
        break;
      case ColumnRole::kSensitiveLabel:
        if (schema.sensitive_ >= 0) {
          return MakeError(ErrorKind::kInvalidArgument, "more than one sensitive label");
        }
        schema.sensitive_ = i;
        break;
    }
    if (c.role != ColumnRole::kFeature && !c.categorical()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("label column '", c.name, "' must be categorical"));
    }
  }
  if (schema.features_.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "schema needs at least one feature");
  }
  if (schema.utility_ < 0 || schema.sensitive_ < 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "schema needs exactly one utility and one sensitive label");
  }
  schema.columns_ = std::move(columns);
  return schema;
}

std::vector<int> DatasetSchema::numeric_feature_indices() const {
  std::vector<int> out;
  for (int i : features_)
    if (!columns_[i].categorical()) out.push_back(i);
  return out;
}

int DatasetSchema::label_index(ColumnRole role) const {
  return role == ColumnRole::kUtilityLabel ? utility_
         : role == ColumnRole::kSensitiveLabel ? sensitive_
                                               : -1;
}

int DatasetSchema::index_of(std::string_view name) const {
  for (int i = 0; i < num_columns(); ++i)
    if (columns_[i].name == name) return i;
  return -1;
}

absl::StatusOr<SampleTable> SampleTable::Create(DatasetSchema schema, Eigen::MatrixXd data) {
  if (data.cols() != schema.num_columns()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("table has ", data.cols(), " columns, schema has ",
                                  schema.num_columns()));
  }
  if (!data.allFinite()) {
    return MakeError(ErrorKind::kInvalidArgument, "table contains missing or non-finite values");
  }
  for (int c = 0; c < schema.num_columns(); ++c) {
    const int card = schema.column(c).cardinality;
    if (card == 0) continue;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
      const double v = data(r, c);
      if (v != std::floor(v) || v < 0 || v >= card) {
        return MakeError(ErrorKind::kInvalidArgument,
                         absl::StrCat("row ", r, " column '", schema.column(c).name,
                                      "': code ", v, " outside [0, ", card, ")"));
      }
    }
  }
  return SampleTable(std::move(schema), std::move(data));
}

Eigen::VectorXi SampleTable::labels(ColumnRole role) const {
  const int idx = schema_.label_index(role);
  return data_.col(idx).cast<int>();
}

SampleTable SampleTable::Subset(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), data_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) sub.row(i) = data_.row(rows[i]);
  return SampleTable(schema_, std::move(sub));
}

}  // namespace privfunnel::eval
