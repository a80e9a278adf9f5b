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

#ifndef PRIVFUNNEL_EVAL_TABLE_H_
#define PRIVFUNNEL_EVAL_TABLE_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"

namespace privfunnel::eval {

enum class ColumnRole { kFeature, kUtilityLabel, kSensitiveLabel };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kFeature;
  int cardinality = 0;  // 0 for numeric columns

  bool categorical() const { return cardinality > 0; }
  bool operator==(const ColumnSpec&) const = default;
};

// Column roles for a table: at least one feature, exactly one utility label
// and one sensitive label. Labels must be categorical.
class DatasetSchema {
 public:
  static absl::StatusOr<DatasetSchema> Create(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const ColumnSpec& column(int i) const { return columns_.at(i); }
  int num_columns() const { return static_cast<int>(columns_.size()); }
  const std::vector<int>& feature_indices() const { return features_; }
  std::vector<int> numeric_feature_indices() const;
  int utility_index() const { return utility_; }
  int sensitive_index() const { return sensitive_; }
  int label_index(ColumnRole role) const;
  // -1 when absent.
  int index_of(std::string_view name) const;

  bool operator==(const DatasetSchema& other) const { return columns_ == other.columns_; }

 private:
  DatasetSchema() = default;
  std::vector<ColumnSpec> columns_;
  std::vector<int> features_;
  int utility_ = -1;
  int sensitive_ = -1;
};

// Row-major records (n x columns). Categorical values are integer codes
// stored as doubles.
class SampleTable {
 public:
  static absl::StatusOr<SampleTable> Create(DatasetSchema schema, Eigen::MatrixXd data);

  const DatasetSchema& schema() const { return schema_; }
  const Eigen::MatrixXd& data() const { return data_; }
  Eigen::Index rows() const { return data_.rows(); }
  Eigen::VectorXd column(int i) const { return data_.col(i); }
  Eigen::VectorXi labels(ColumnRole role) const;

  SampleTable Subset(const std::vector<Eigen::Index>& rows) const;

 private:
  SampleTable(DatasetSchema schema, Eigen::MatrixXd data)
      : schema_(std::move(schema)), data_(std::move(data)) {}
  DatasetSchema schema_;
  Eigen::MatrixXd data_;
};

}  // namespace privfunnel::eval

#endif  // PRIVFUNNEL_EVAL_TABLE_H_
