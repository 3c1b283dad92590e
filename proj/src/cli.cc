/*
 * Copyright 2026 The fairweigh Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fairweigh/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "fairweigh/config.h"
#include "fairweigh/dataset.h"
#include "fairweigh/error.h"
#include "fairweigh/experiment.h"
#include "fairweigh/report.h"

namespace fairweigh {
namespace {

namespace fs = std::filesystem;

// Raised for problems that are the caller's fault (exit 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  int threads = 1;
};

ExperimentConfig ReadConfig(const Common& c) {
  if (!fs::is_regular_file(c.config_path)) {
    throw UsageError("config file '" + c.config_path + "' not found");
  }
  ExperimentConfig config = LoadConfig(c.config_path);
  if (c.seed) {
    config.seed = *c.seed;
    config.split_seed = *c.seed;
  }
  return config;
}

// --out wins; otherwise $FAIRWEIGH_OUT_DIR/<stem>.<ext>; otherwise stdout
// (empty path).
fs::path ResolveOut(const std::string& out, const std::string& stem,
                    std::string_view extension) {
  if (!out.empty()) return out;
  if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
    fs::create_directories(dir);
    return fs::path(dir) / (stem + "." + std::string(extension));
  }
  return {};
}

void Write(const Results& results, OutputFormat format, const fs::path& path,
           std::ostream& out) {
  if (path.empty()) {
    out << Render(results, format);
  } else {
    EmitResults(results, format, path);
  }
}

}  // namespace

int CliMain(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fair logistic regression by adaptive priority reweighing"};
  app.name("fairweigh");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Common run_opts;
  std::string trace_path;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config", run_opts.config_path, "Experiment config file")->required();
  run->add_option("--seed", run_opts.seed, "Override seed and split.seed");
  run->add_option("--out", run_opts.out, "Output file (default: stdout or $FAIRWEIGH_OUT_DIR)");
  run->add_option("--format", run_opts.format, "json, csv or markdown")->default_val("json");
  run->add_option("--threads", run_opts.threads, "Worker threads")->default_val(1)
      ->check(CLI::PositiveNumber);
  run->add_option("--trace", trace_path,
                  "Write the per-iteration trace of replication 0 as JSON lines");

  Common grid_opts;
  std::string alpha_text, eta_text;
  std::optional<int> folds;
  auto* grid = app.add_subcommand(
      "grid", "Cross-validate alpha and eta on the training split, then run the best");
  grid->add_option("--config", grid_opts.config_path, "Experiment config file")->required();
  grid->add_option("--alpha", alpha_text, "Comma-separated alpha grid (default grid.alpha)");
  grid->add_option("--eta", eta_text, "Comma-separated eta grid (default grid.eta)");
  grid->add_option("--folds", folds, "Cross-validation folds (default grid.folds)");
  grid->add_option("--seed", grid_opts.seed, "Override seed and split.seed");
  grid->add_option("--out", grid_opts.out, "Output file");
  grid->add_option("--format", grid_opts.format, "json, csv or markdown")->default_val("json");
  grid->add_option("--threads", grid_opts.threads, "Worker threads")->default_val(1)
      ->check(CLI::PositiveNumber);

  std::string results_path, report_out, report_format;
  auto* report = app.add_subcommand("report", "Re-render a saved JSON result file");
  report->add_option("results", results_path, "Result JSON written by run or grid")
      ->required();
  report->add_option("--format", report_format, "json, csv or markdown")
      ->default_val("markdown");
  report->add_option("--out", report_out, "Output file");

  std::size_t synth_n = 4000;
  double synth_bias = 0.8;
  std::uint64_t synth_seed = 1;
  bool synth_no_sensitive = false;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset as CSV");
  synth->add_option("--n", synth_n, "Rows")->default_val(4000);
  synth->add_option("--bias", synth_bias, "Label bias in [0, 1]")->default_val(0.8);
  synth->add_option("--seed", synth_seed, "Generator seed")->default_val(1);
  synth->add_flag("--no-sensitive", synth_no_sensitive,
                  "Leave the sensitive attribute out of the features");
  synth->add_option("--out", synth_out, "Output CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      const OutputFormat format = ParseFormat(run_opts.format);
      const ExperimentConfig config = ReadConfig(run_opts);
      RunOptions options;
      options.threads = run_opts.threads;
      options.keep_traces = !trace_path.empty();
      Results results;
      results.records.push_back(RunExperiment(config, options));
      if (!trace_path.empty()) {
        const auto& rep = results.records.front().replications.front();
        if (!rep.trace) throw UsageError("--trace requires method = adaptive");
        std::ofstream trace(trace_path);
        if (!trace) throw Error("cannot write trace to '" + trace_path + "'");
        WriteTraceJsonl(*rep.trace, trace);
      }
      Write(results, format, ResolveOut(run_opts.out, config.name, FileExtension(format)),
            out);
    } else if (*grid) {
      const OutputFormat format = ParseFormat(grid_opts.format);
      const ExperimentConfig config = ReadConfig(grid_opts);
      const auto alphas = alpha_text.empty() ? config.grid.alpha : ParseNumberList(alpha_text);
      const auto etas = eta_text.empty() ? config.grid.eta : ParseNumberList(eta_text);
      if (alphas.empty() || etas.empty()) {
        throw UsageError("grid needs --alpha/--eta or grid.alpha/grid.eta in the config");
      }
      RunOptions options;
      options.threads = grid_opts.threads;
      Results results;
      results.grid = GridSearch(config, alphas, etas, folds.value_or(config.grid.folds),
                                options);
      ExperimentConfig tuned = config;
      tuned.reweigh.alpha = results.grid->best.alpha;
      tuned.reweigh.eta = results.grid->best.eta;
      results.records.push_back(RunExperiment(tuned, options));
      Write(results, format,
            ResolveOut(grid_opts.out, config.name + "-grid", FileExtension(format)), out);
    } else if (*report) {
      const OutputFormat format = ParseFormat(report_format);
      if (!fs::is_regular_file(results_path)) {
        throw UsageError("results file '" + results_path + "' not found");
      }
      const Results results = LoadResults(results_path);
      Write(results, format,
            ResolveOut(report_out, fs::path(results_path).stem().string(),
                       FileExtension(format)),
            out);
    } else if (*synth) {
      const Dataset ds = GenerateSynthetic(synth_n, synth_bias, synth_seed, !synth_no_sensitive);
      const fs::path path = ResolveOut(synth_out, "synthetic", "csv");
      if (path.empty()) {
        WriteCsv(ds, out);
      } else {
        WriteCsv(ds, path);
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int CliMain(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return CliMain(args, std::cout, std::cerr);
}

}  // namespace fairweigh
