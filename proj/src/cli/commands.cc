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

#include "privfunnel/cli/commands.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "privfunnel/bounds.h"
#include "privfunnel/cli/config.h"
#include "privfunnel/cli/csv.h"
#include "privfunnel/cli/report.h"
#include "privfunnel/em_opt.h"
#include "privfunnel/eval/compare.h"
#include "privfunnel/eval/score.h"
#include "privfunnel/grad_opt.h"
#include "privfunnel/noise.h"
#include "privfunnel/status.h"

namespace privfunnel::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr char kPrivacyFormula[] =
    "privacy_score = clip(1 - (attacker_accuracy - chance) / (1 - chance), 0, 1); "
    "chance = majority sensitive-label rate on the test split";

struct Outputs {
  fs::path dir;
  std::map<std::string, std::string> files;  // written together at the end

  absl::Status Flush() const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return MakeError(ErrorKind::kIoError, absl::StrCat("cannot create ", dir.string()));
    for (const auto& [name, body] : files) PF_RETURN_IF_ERROR(WriteFileAtomic(dir / name, body));
    return absl::OkStatus();
  }
};

Json CardJson(const eval::ScoreCard& c) {
  return Json{{"utility_score", c.utility_score},
              {"privacy_score", c.privacy_score},
              {"utility_accuracy", c.utility_accuracy},
              {"attacker_accuracy", c.attacker_accuracy},
              {"chance", c.chance},
              {"mi_reduction_nats", c.mi_reduction}};
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

absl::StatusOr<std::uint64_t> ParseSeed(std::string_view text, std::string_view source) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat(std::string(source), ": '", std::string(text),
                                  "' is not an unsigned integer seed"));
  }
  return v;
}

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorKind::kIoError, absl::StrCat("cannot read ", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::StatusOr<DiscreteJoint> DiscreteSource(const RunConfig& cfg,
                                             std::optional<eval::SampleTable>* table,
                                             Eigen::VectorXi* codes) {
  if (cfg.dataset) {
    PF_ASSIGN_OR_RETURN(eval::SampleTable t, LoadDataset(cfg));
    PF_ASSIGN_OR_RETURN(eval::EmpiricalJoint emp, eval::EstimateJoint(t, cfg.bins));
    *codes = std::move(emp.x_codes);
    *table = std::move(t);
    return std::move(emp.joint);
  }
  if (cfg.joint) return *cfg.joint;
  return MakeError(ErrorKind::kParseError, "grad/em need a 'joint', 'fixture' or 'dataset'");
}

absl::StatusOr<GaussianModel> GaussianSource(const RunConfig& cfg,
                                             std::optional<eval::SampleTable>* table) {
  if (cfg.dataset) {
    PF_ASSIGN_OR_RETURN(eval::SampleTable t, LoadDataset(cfg));
    PF_ASSIGN_OR_RETURN(GaussianModel model, eval::FitGaussian(t));
    *table = std::move(t);
    return model;
  }
  if (cfg.gaussian) return *cfg.gaussian;
  return MakeError(ErrorKind::kParseError, "noise needs a 'gaussian', 'fixture' or 'dataset'");
}

absl::StatusOr<int> CmdMi(const RunConfig& cfg, Outputs* outs, std::ostream& out) {
  CsvDocument doc;
  std::map<std::string, int> categorical;
  if (cfg.dataset && cfg.dataset->csv) {
    PF_ASSIGN_OR_RETURN(const std::string text, ReadFile(*cfg.dataset->csv));
    PF_ASSIGN_OR_RETURN(doc, ParseCsv(text));
    categorical = cfg.dataset->table.categorical;
  } else {
    PF_ASSIGN_OR_RETURN(const eval::SampleTable t, LoadDataset(cfg));
    for (const eval::ColumnSpec& c : t.schema().columns()) {
      doc.header.push_back(c.name);
      if (c.categorical()) categorical[c.name] = c.cardinality;
    }
    doc.values = t.data();
  }
  auto find = [&](const std::string& name) -> absl::StatusOr<int> {
    for (std::size_t i = 0; i < doc.header.size(); ++i)
      if (doc.header[i] == name) return static_cast<int>(i);
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("line 1: column '", name, "' not found in header"));
  };
  auto codes = [&](int c) -> Eigen::VectorXi {
    const Eigen::VectorXd col = doc.values.col(c);
    if (categorical.count(doc.header[c])) return col.cast<int>();
    return eval::EqualWidthCodes(col, cfg.mi_bins);
  };
  std::vector<std::pair<std::string, std::string>> pairs = cfg.mi_pairs;
  if (pairs.empty()) {
    for (std::size_t a = 0; a < doc.header.size(); ++a)
      for (std::size_t b = a + 1; b < doc.header.size(); ++b)
        pairs.emplace_back(doc.header[a], doc.header[b]);
  }
  Json report{{"rows", doc.values.rows()}, {"bins", cfg.mi_bins}, {"pairs", Json::array()}};
  for (const auto& [a, b] : pairs) {
    PF_ASSIGN_OR_RETURN(const int ia, find(a));
    PF_ASSIGN_OR_RETURN(const int ib, find(b));
    const double nats = eval::PluginMi(codes(ia), codes(ib));
    report["pairs"].push_back(Json{{"a", a}, {"b", b}, {"nats", nats}, {"bits", nats / std::log(2.0)}});
  }
  outs->files["mi.json"] = Dump(report);
  out << Dump(report);
  return kExitOk;
}

absl::StatusOr<int> CmdOptimize(const RunConfig& cfg, std::uint64_t seed, Outputs* outs,
                                std::ostream& out) {
  std::optional<eval::SampleTable> table;
  eval::ScoreOptions score_opts;
  score_opts.seed = seed;
  if (cfg.algorithm == "noise") {
    PF_ASSIGN_OR_RETURN(const GaussianModel model, GaussianSource(cfg, &table));
    PF_ASSIGN_OR_RETURN(const NoiseSpec noise,
                        OptimizeSigma(model, cfg.noise_slack, cfg.sigma_cap));
    PF_ASSIGN_OR_RETURN(const GaussianModel noisy, Infuse(model, noise));
    PF_ASSIGN_OR_RETURN(const double i_xu, GaussianMi(model, model.x_block(), model.u_block()));
    PF_ASSIGN_OR_RETURN(const double i_xs, GaussianMi(model, model.x_block(), model.s_block()));
    PF_ASSIGN_OR_RETURN(const double c_xu, GaussianMi(noisy, noisy.x_block(), noisy.u_block()));
    PF_ASSIGN_OR_RETURN(const double c_xs, GaussianMi(noisy, noisy.x_block(), noisy.s_block()));
    const absl::StatusOr<double> h = NoiseEntropy(noise);
    const TradeoffPoint p = MakeTradeoffPoint(cfg.noise_slack, c_xu, c_xs, i_xu, i_xs, "Exact");
    Json card{{"algorithm", "noise"},
              {"status", "Converged"},
              {"utility_slack", cfg.noise_slack},
              {"i_xu_nats", i_xu},
              {"i_xs_nats", i_xs},
              {"i_xc_u_nats", c_xu},
              {"i_xc_s_nats", c_xs},
              {"utility_score", p.utility_score},
              {"privacy_score", p.privacy_score}};
    if (h.ok()) card["noise_entropy_nats"] = *h;
    if (table) {
      PF_ASSIGN_OR_RETURN(const eval::SampleTable released, ApplyNoise(*table, noise, seed));
      PF_ASSIGN_OR_RETURN(const eval::ScoreCard sc, eval::Score(*table, released, score_opts));
      card["table_score"] = CardJson(sc);
      card["privacy_score_formula"] = kPrivacyFormula;
      outs->files["released.csv"] = TableToCsv(released);
    }
    outs->files["sigma.csv"] = SigmaCsv(noise);
    outs->files["trace.csv"] = absl::StrCat(
        "stage,i_xc_u_nats,i_xc_s_nats\n", "clean,", FormatNumber(i_xu), ",", FormatNumber(i_xs),
        "\n", "optimized,", FormatNumber(c_xu), ",", FormatNumber(c_xs), "\n");
    outs->files["scorecard.json"] = Dump(card);
    out << "noise: I(Xc;U)=" << FormatNumber(c_xu) << " I(Xc;S)=" << FormatNumber(c_xs) << "\n";
    return kExitOk;
  }

  Eigen::VectorXi codes;
  PF_ASSIGN_OR_RETURN(const DiscreteJoint joint, DiscreteSource(cfg, &table, &codes));
  TradeoffConfig tc = cfg.tradeoff;
  tc.seed = seed;
  Channel channel = Channel::Identity(1);
  TerminalStatus status;
  Json card{{"algorithm", cfg.algorithm}};
  if (cfg.algorithm == "grad") {
    PF_ASSIGN_OR_RETURN(OptResult r, Optimize(joint, tc));
    status = r.trace.status;
    outs->files["trace.csv"] = TraceCsv(r.trace);
    card["iterations"] = r.trace.records.size();
    if (!r.trace.records.empty()) card["lambda"] = r.trace.records.back().lambda;
    channel = std::move(r.channel);
  } else {
    PF_ASSIGN_OR_RETURN(EmResult r, RunEm(joint, tc));
    status = r.trace.status;
    outs->files["trace.csv"] = EmTraceCsv(r.trace);
    card["iterations"] = r.trace.records.size();
    card["lambda"] = tc.lambda;
    channel = std::move(r.channel);
  }
  PF_ASSIGN_OR_RETURN(const ChannelInformation info, EvaluateChannel(joint, channel));
  const TradeoffPoint p = MakeTradeoffPoint(tc.lambda, info.i_yu, info.i_ys, info.i_xu,
                                            info.i_xs, std::string(TerminalStatusName(status)));
  card["status"] = p.status;
  card["i_yu_nats"] = info.i_yu;
  card["i_ys_nats"] = info.i_ys;
  card["i_xu_nats"] = info.i_xu;
  card["i_xs_nats"] = info.i_xs;
  card["utility_score"] = p.utility_score;
  card["privacy_score"] = p.privacy_score;
  if (table && status != TerminalStatus::kNonFiniteObjective) {
    PF_ASSIGN_OR_RETURN(const eval::SampleTable released,
                        eval::ReleaseThroughChannel(*table, codes, channel, seed));
    PF_ASSIGN_OR_RETURN(const eval::ScoreCard sc, eval::Score(*table, released, score_opts));
    card["table_score"] = CardJson(sc);
    card["privacy_score_formula"] = kPrivacyFormula;
    outs->files["released.csv"] = TableToCsv(released);
  }
  outs->files["channel.csv"] = ChannelCsv(channel);
  outs->files["scorecard.json"] = Dump(card);
  out << cfg.algorithm << ": " << p.status << " I(Y;U)=" << FormatNumber(info.i_yu)
      << " I(Y;S)=" << FormatNumber(info.i_ys) << "\n";
  switch (status) {
    case TerminalStatus::kConverged:
      return kExitOk;
    case TerminalStatus::kMaxIters:
      return kExitMaxIters;
    case TerminalStatus::kNonFiniteObjective:
      break;
  }
  return MakeError(ErrorKind::kNonFiniteObjective, "objective became non-finite");
}

absl::StatusOr<int> CmdSweep(const RunConfig& cfg, std::uint64_t seed, Outputs* outs,
                             std::ostream& out) {
  if (cfg.sweep_values.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "usage: sweep.values needs at least one value");
  }
  PF_RETURN_IF_ERROR(ValidateSweepValues(cfg.sweep_values));
  std::vector<TradeoffPoint> points;
  std::string x_label = "lambda";
  std::optional<eval::SampleTable> table;
  if (cfg.algorithm == "noise") {
    x_label = "noise scale";
    PF_ASSIGN_OR_RETURN(const GaussianModel model, GaussianSource(cfg, &table));
    PF_ASSIGN_OR_RETURN(const double i_xu, GaussianMi(model, model.x_block(), model.u_block()));
    PF_ASSIGN_OR_RETURN(const double i_xs, GaussianMi(model, model.x_block(), model.s_block()));
    PF_ASSIGN_OR_RETURN(const auto sweep, NoiseSweep(model, cfg.sweep_values));
    for (const NoiseSweepPoint& s : sweep) {
      points.push_back(MakeTradeoffPoint(s.scale, s.i_xc_u, s.i_xc_s, i_xu, i_xs, "Exact"));
    }
  } else {
    Eigen::VectorXi codes;
    PF_ASSIGN_OR_RETURN(const DiscreteJoint joint, DiscreteSource(cfg, &table, &codes));
    TradeoffConfig tc = cfg.tradeoff;
    tc.seed = seed;
    if (cfg.algorithm == "grad") {
      PF_ASSIGN_OR_RETURN(points, Sweep(joint, cfg.sweep_values, tc));
    } else {
      PF_ASSIGN_OR_RETURN(points, SweepEm(joint, cfg.sweep_values, tc));
    }
  }
  outs->files["tradeoff.csv"] = TradeoffCsv(points);
  outs->files["tradeoff.svg"] = TradeoffSvg(points, x_label);
  out << "sweep: " << points.size() << " points\n";
  for (const TradeoffPoint& p : points) {
    if (p.status == "Failed" || p.status == "NonFiniteObjective") return kExitError;
  }
  return kExitOk;
}

absl::StatusOr<int> CmdCompare(const RunConfig& cfg, std::uint64_t seed, Outputs* outs,
                               std::ostream& out) {
  PF_ASSIGN_OR_RETURN(const eval::SampleTable table, LoadDataset(cfg));
  eval::CompareOptions opts = cfg.compare;
  opts.seed = seed;
  PF_ASSIGN_OR_RETURN(const std::vector<eval::CompareRow> rows,
                      eval::Compare(cfg.methods, table, opts));
  Json card{{"privacy_score_formula", kPrivacyFormula}, {"methods", Json::array()}};
  for (const eval::CompareRow& r : rows) {
    Json entry{{"method", std::string(eval::MethodName(r.method))}};
    if (r.status.ok()) {
      entry["status"] = "ok";
      entry["card"] = CardJson(r.card);
    } else {
      entry["status"] = std::string(r.status.message());
    }
    card["methods"].push_back(entry);
  }
  outs->files["compare.csv"] = CompareCsv(rows);
  outs->files["scorecard.json"] = Dump(card);
  out << CompareCsv(rows);
  return kExitOk;
}

}  // namespace

absl::Status WriteFileAtomic(const fs::path& path, std::string_view contents) {
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) return MakeError(ErrorKind::kIoError, absl::StrCat("cannot write ", tmp.string()));
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) return MakeError(ErrorKind::kIoError, absl::StrCat("short write to ", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    return MakeError(ErrorKind::kIoError, absl::StrCat("cannot rename onto ", path.string()));
  }
  return absl::OkStatus();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"privfunnel: utility/privacy tradeoff optimizers and evaluation"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::string out_dir;
  const std::vector<std::string> names = {"mi", "optimize", "sweep", "compare"};
  const std::map<std::string, std::string> help = {
      {"mi", "plug-in mutual information between table columns"},
      {"optimize", "run the configured algorithm (grad, em or noise)"},
      {"sweep", "lambda or noise-scale sweep with tradeoff CSV and SVG"},
      {"compare", "score privacy mechanisms on one dataset"}};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed_flag, "seed override");
    sub->add_option("--out", out_dir, "output directory override");
  }
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  auto run = [&]() -> absl::StatusOr<int> {
    PF_ASSIGN_OR_RETURN(const std::string text, ReadFile(config_path));
    const fs::path base = fs::path(config_path).parent_path();
    PF_ASSIGN_OR_RETURN(RunConfig cfg, ParseConfig(text, base.empty() ? fs::path(".") : base));
    std::optional<std::uint64_t> seed = cfg.seed;
    if (const char* env = std::getenv("PRIVFUNNEL_SEED"); env != nullptr && *env != '\0') {
      PF_ASSIGN_OR_RETURN(seed, ParseSeed(env, "PRIVFUNNEL_SEED"));
    }
    if (seed_flag) seed = seed_flag;
    Outputs outs;
    outs.dir = out_dir.empty() ? cfg.output_dir : fs::path(out_dir);
    if (command != "mi" && !seed) {
      return MakeError(ErrorKind::kParseError, "key 'seed': required for " + command);
    }
    absl::StatusOr<int> code = kExitError;
    if (command == "mi") {
      code = CmdMi(cfg, &outs, out);
    } else if (command == "optimize") {
      code = CmdOptimize(cfg, *seed, &outs, out);
    } else if (command == "sweep") {
      code = CmdSweep(cfg, *seed, &outs, out);
    } else {
      code = CmdCompare(cfg, *seed, &outs, out);
    }
    if (!outs.files.empty()) PF_RETURN_IF_ERROR(outs.Flush());
    return code;
  };
  absl::StatusOr<int> code = run();
  if (!code.ok()) {
    err << "error: " << code.status().message() << "\n";
    return kExitError;
  }
  return *code;
}

}  // namespace privfunnel::cli
