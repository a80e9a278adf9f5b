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

#include "privfunnel/cli/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "privfunnel/eval/fixtures.h"
#include "privfunnel/eval/generators.h"
#include "privfunnel/status.h"

namespace privfunnel::cli {
namespace {

using nlohmann::json;

absl::Status KeyError(const std::string& key, const std::string& what) {
  return MakeError(ErrorKind::kParseError, absl::StrCat("key '", key, "': ", what));
}

absl::Status CheckKeys(const json& obj, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (!obj.is_object()) return KeyError(where, "expected an object");
  for (const auto& [key, unused] : obj.items()) {
    if (!allowed.count(key)) return KeyError(where.empty() ? key : where + "." + key, "unknown key");
  }
  return absl::OkStatus();
}

template <typename T>
absl::StatusOr<T> Get(const json& obj, const std::string& key, const std::string& path) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    return KeyError(path, e.what());
  }
}

template <typename T>
absl::Status GetInto(const json& obj, const std::string& key, const std::string& prefix, T* out) {
  if (!obj.contains(key)) return absl::OkStatus();
  PF_ASSIGN_OR_RETURN(*out, Get<T>(obj, key, prefix + key));
  return absl::OkStatus();
}

absl::Status ParseTradeoff(const json& t, TradeoffConfig* cfg) {
  PF_RETURN_IF_ERROR(CheckKeys(t, "tradeoff",
                               {"lambda", "alpha0", "epsilon", "max_iters", "y_size",
                                "privacy_term", "l2", "controller"}));
  const std::string p = "tradeoff.";
  PF_RETURN_IF_ERROR(GetInto(t, "lambda", p, &cfg->lambda));
  PF_RETURN_IF_ERROR(GetInto(t, "alpha0", p, &cfg->alpha0));
  PF_RETURN_IF_ERROR(GetInto(t, "epsilon", p, &cfg->epsilon));
  PF_RETURN_IF_ERROR(GetInto(t, "max_iters", p, &cfg->max_iters));
  PF_RETURN_IF_ERROR(GetInto(t, "l2", p, &cfg->l2));
  if (t.contains("y_size")) {
    PF_ASSIGN_OR_RETURN(const int y, Get<int>(t, "y_size", p + "y_size"));
    cfg->y_size = y;
  }
  if (t.contains("privacy_term")) {
    PF_ASSIGN_OR_RETURN(const std::string term, Get<std::string>(t, "privacy_term", p + "privacy_term"));
    auto parsed = ParsePrivacyTerm(term);
    if (!parsed.ok()) return KeyError(p + "privacy_term", std::string(parsed.status().message()));
    cfg->privacy_term = *parsed;
  }
  if (t.contains("controller")) {
    const json& c = t.at("controller");
    PF_RETURN_IF_ERROR(CheckKeys(c, p + "controller", {"kind", "target_leakage_nats", "gain"}));
    std::string kind = "fixed";
    PF_RETURN_IF_ERROR(GetInto(c, "kind", p + "controller.", &kind));
    if (kind == "fixed") {
      cfg->lambda_controller.kind = LambdaController::Kind::kFixed;
    } else if (kind == "budget") {
      cfg->lambda_controller.kind = LambdaController::Kind::kBudget;
    } else {
      return KeyError(p + "controller.kind", "expected 'fixed' or 'budget'");
    }
    PF_RETURN_IF_ERROR(GetInto(c, "target_leakage_nats", p + "controller.",
                               &cfg->lambda_controller.target_leakage_nats));
    PF_RETURN_IF_ERROR(GetInto(c, "gain", p + "controller.", &cfg->lambda_controller.gain));
  }
  return absl::OkStatus();
}

absl::StatusOr<DiscreteJoint> ParseJoint(const json& j) {
  PF_RETURN_IF_ERROR(CheckKeys(j, "joint", {"dims", "probs"}));
  PF_ASSIGN_OR_RETURN(const std::vector<int> dims, Get<std::vector<int>>(j, "dims", "joint.dims"));
  PF_ASSIGN_OR_RETURN(const std::vector<double> probs,
                      Get<std::vector<double>>(j, "probs", "joint.probs"));
  if (dims.size() != 3) return KeyError("joint.dims", "expected [nx, nu, ns]");
  auto joint = DiscreteJoint::Create(dims[0], dims[1], dims[2], probs);
  if (!joint.ok()) return KeyError("joint", std::string(joint.status().message()));
  return *std::move(joint);
}

absl::StatusOr<Eigen::MatrixXd> ParseMatrix(const json& obj, const std::string& key,
                                            const std::string& path) {
  PF_ASSIGN_OR_RETURN(const auto rows, (Get<std::vector<std::vector<double>>>(obj, key, path)));
  if (rows.empty()) return KeyError(path, "empty matrix");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) return KeyError(path, "ragged matrix");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

absl::StatusOr<GaussianModel> ParseGaussian(const json& g) {
  PF_RETURN_IF_ERROR(CheckKeys(g, "gaussian", {"dim_x", "dim_u", "dim_s", "mean", "cov",
                                               "loadings", "noise_var", "seed"}));
  eval::GaussianGenSpec spec;
  PF_ASSIGN_OR_RETURN(spec.dim_x, Get<int>(g, "dim_x", "gaussian.dim_x"));
  PF_RETURN_IF_ERROR(GetInto(g, "dim_u", "gaussian.", &spec.dim_u));
  PF_RETURN_IF_ERROR(GetInto(g, "dim_s", "gaussian.", &spec.dim_s));
  absl::StatusOr<GaussianModel> model = absl::InternalError("unset");
  if (g.contains("cov")) {
    PF_ASSIGN_OR_RETURN(Eigen::MatrixXd cov, ParseMatrix(g, "cov", "gaussian.cov"));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(cov.rows());
    if (g.contains("mean")) {
      PF_ASSIGN_OR_RETURN(const std::vector<double> m,
                          Get<std::vector<double>>(g, "mean", "gaussian.mean"));
      mean = Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
    }
    model = GaussianModel::Create(spec.dim_x, spec.dim_u, spec.dim_s, mean, cov);
  } else {
    if (g.contains("loadings")) {
      PF_ASSIGN_OR_RETURN(spec.loadings, ParseMatrix(g, "loadings", "gaussian.loadings"));
    }
    PF_RETURN_IF_ERROR(GetInto(g, "noise_var", "gaussian.", &spec.noise_var));
    PF_RETURN_IF_ERROR(GetInto(g, "seed", "gaussian.", &spec.seed));
    model = eval::GenGaussian(spec);
  }
  if (!model.ok()) return KeyError("gaussian", std::string(model.status().message()));
  return *std::move(model);
}

absl::StatusOr<DatasetDecl> ParseDataset(const json& d, const std::filesystem::path& base) {
  PF_RETURN_IF_ERROR(CheckKeys(d, "dataset", {"csv", "features", "utility_label",
                                              "sensitive_label", "categorical", "generate",
                                              "n", "seed"}));
  DatasetDecl decl;
  if (d.contains("csv") == d.contains("generate")) {
    return KeyError("dataset", "set exactly one of 'csv' and 'generate'");
  }
  if (d.contains("csv")) {
    PF_ASSIGN_OR_RETURN(const std::string path, Get<std::string>(d, "csv", "dataset.csv"));
    const std::filesystem::path p(path);
    decl.csv = p.is_absolute() ? p : base / p;
    PF_ASSIGN_OR_RETURN(decl.table.utility_label,
                        Get<std::string>(d, "utility_label", "dataset.utility_label"));
    PF_ASSIGN_OR_RETURN(decl.table.sensitive_label,
                        Get<std::string>(d, "sensitive_label", "dataset.sensitive_label"));
    PF_RETURN_IF_ERROR(GetInto(d, "features", "dataset.", &decl.table.features));
    PF_RETURN_IF_ERROR(GetInto(d, "categorical", "dataset.", &decl.table.categorical));
  } else {
    std::string gen;
    PF_RETURN_IF_ERROR(GetInto(d, "generate", "dataset.", &gen));
    static const std::set<std::string> kKnown = {"structured_gaussian", "correlated_gaussian",
                                                 "gaussian", "joint"};
    if (!kKnown.count(gen)) return KeyError("dataset.generate", "unknown generator '" + gen + "'");
    decl.generate = gen;
    long n = decl.n;
    PF_RETURN_IF_ERROR(GetInto(d, "n", "dataset.", &n));
    if (n < 1) return KeyError("dataset.n", "must be >= 1");
    decl.n = n;
    PF_RETURN_IF_ERROR(GetInto(d, "seed", "dataset.", &decl.sample_seed));
  }
  return decl;
}

int LineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

absl::StatusOr<RunConfig> ParseConfig(std::string_view json_text,
                                      const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("line ", LineOf(json_text, e.byte == 0 ? 0 : e.byte - 1),
                                  ": ", e.what()));
  }
  PF_RETURN_IF_ERROR(CheckKeys(root, "", {"seed", "output_dir", "algorithm", "tradeoff",
                                          "fixture", "joint", "gaussian", "dataset", "noise",
                                          "sweep", "compare", "mi"}));
  RunConfig cfg;
  if (root.contains("seed")) {
    PF_ASSIGN_OR_RETURN(cfg.seed, Get<std::uint64_t>(root, "seed", "seed"));
  }
  if (root.contains("output_dir")) {
    PF_ASSIGN_OR_RETURN(const std::string out, Get<std::string>(root, "output_dir", "output_dir"));
    const std::filesystem::path p(out);
    cfg.output_dir = p.is_absolute() ? p : base_dir / p;
  } else {
    cfg.output_dir = base_dir;
  }
  PF_RETURN_IF_ERROR(GetInto(root, "algorithm", "", &cfg.algorithm));
  if (cfg.algorithm != "grad" && cfg.algorithm != "em" && cfg.algorithm != "noise") {
    return KeyError("algorithm", "expected 'grad', 'em' or 'noise'");
  }
  if (root.contains("tradeoff")) PF_RETURN_IF_ERROR(ParseTradeoff(root.at("tradeoff"), &cfg.tradeoff));

  if (root.contains("fixture")) {
    PF_ASSIGN_OR_RETURN(const std::string name, Get<std::string>(root, "fixture", "fixture"));
    if (name == "toy222") {
      cfg.joint = eval::ToyJoint222();
    } else if (name == "benchmark422") {
      cfg.joint = eval::BenchmarkJoint422();
    } else if (name == "separable") {
      cfg.joint = eval::SeparableJoint();
    } else if (name == "correlated_gaussian") {
      cfg.gaussian = eval::CorrelatedGaussian();
    } else if (name == "structured_gaussian") {
      cfg.gaussian = eval::StructuredGaussian();
    } else {
      return KeyError("fixture", "unknown fixture '" + name + "'");
    }
  }
  if (root.contains("joint")) {
    PF_ASSIGN_OR_RETURN(cfg.joint, ParseJoint(root.at("joint")));
  }
  if (root.contains("gaussian")) {
    PF_ASSIGN_OR_RETURN(cfg.gaussian, ParseGaussian(root.at("gaussian")));
  }
  if (root.contains("dataset")) {
    PF_ASSIGN_OR_RETURN(cfg.dataset, ParseDataset(root.at("dataset"), base_dir));
  }
  if (root.contains("noise")) {
    const json& n = root.at("noise");
    PF_RETURN_IF_ERROR(CheckKeys(n, "noise", {"slack", "cap"}));
    PF_RETURN_IF_ERROR(GetInto(n, "slack", "noise.", &cfg.noise_slack));
    if (n.contains("cap")) {
      PF_ASSIGN_OR_RETURN(cfg.sigma_cap, Get<double>(n, "cap", "noise.cap"));
    }
  }
  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    PF_RETURN_IF_ERROR(CheckKeys(s, "sweep", {"values"}));
    PF_RETURN_IF_ERROR(GetInto(s, "values", "sweep.", &cfg.sweep_values));
  }
  cfg.compare.tradeoff = cfg.tradeoff;
  cfg.compare.noise_slack = cfg.noise_slack;
  if (root.contains("compare")) {
    const json& c = root.at("compare");
    PF_RETURN_IF_ERROR(CheckKeys(c, "compare", {"methods", "mask_columns", "k", "bins"}));
    std::vector<std::string> names;
    PF_RETURN_IF_ERROR(GetInto(c, "methods", "compare.", &names));
    for (const std::string& name : names) {
      auto m = eval::ParseMethod(name);
      if (!m.ok()) return KeyError("compare.methods", std::string(m.status().message()));
      cfg.methods.push_back(*m);
    }
    PF_RETURN_IF_ERROR(GetInto(c, "mask_columns", "compare.", &cfg.compare.mask_columns));
    PF_RETURN_IF_ERROR(GetInto(c, "k", "compare.", &cfg.compare.k));
    PF_RETURN_IF_ERROR(GetInto(c, "bins", "compare.", &cfg.compare.bins));
  }
  cfg.bins = cfg.compare.bins;
  if (root.contains("mi")) {
    const json& m = root.at("mi");
    PF_RETURN_IF_ERROR(CheckKeys(m, "mi", {"pairs", "bins"}));
    std::vector<std::vector<std::string>> pairs;
    PF_RETURN_IF_ERROR(GetInto(m, "pairs", "mi.", &pairs));
    for (const auto& p : pairs) {
      if (p.size() != 2) return KeyError("mi.pairs", "each pair needs two column names");
      cfg.mi_pairs.emplace_back(p[0], p[1]);
    }
    PF_RETURN_IF_ERROR(GetInto(m, "bins", "mi.", &cfg.mi_bins));
    if (cfg.mi_bins < 1) return KeyError("mi.bins", "must be >= 1");
  }
  auto valid = cfg.tradeoff.Validate();
  if (!valid.ok()) return KeyError("tradeoff", std::string(valid.message()));
  return cfg;
}

absl::StatusOr<eval::SampleTable> LoadDataset(const RunConfig& cfg) {
  if (!cfg.dataset) return MakeError(ErrorKind::kParseError, "config has no 'dataset'");
  const DatasetDecl& d = *cfg.dataset;
  if (d.csv) {
    std::ifstream in(*d.csv, std::ios::binary);
    if (!in) {
      return MakeError(ErrorKind::kIoError, absl::StrCat("cannot read ", d.csv->string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    PF_ASSIGN_OR_RETURN(const CsvDocument doc, ParseCsv(buf.str()));
    return ToTable(doc, d.table);
  }
  const std::string& gen = *d.generate;
  if (gen == "joint") {
    if (!cfg.joint) return MakeError(ErrorKind::kParseError, "generator 'joint' needs a joint");
    return eval::SampleDiscrete(*cfg.joint, d.n, d.sample_seed);
  }
  GaussianModel model = eval::StructuredGaussian();
  if (gen == "correlated_gaussian") {
    model = eval::CorrelatedGaussian();
  } else if (gen == "gaussian") {
    if (!cfg.gaussian) {
      return MakeError(ErrorKind::kParseError, "generator 'gaussian' needs a gaussian model");
    }
    model = *cfg.gaussian;
  }
  return eval::SampleGaussianTable(model, d.n, d.sample_seed);
}

}  // namespace privfunnel::cli
