/* Copyright 2026 The trajarea Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// trajarea: fit group-based trajectory models and measure the areas between
// trajectories.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajarea/abt.hpp"
#include "trajarea/dataset_io.hpp"
#include "trajarea/error.hpp"
#include "trajarea/gbtm.hpp"
#include "trajarea/model_io.hpp"
#include "trajarea/pipeline.hpp"
#include "trajarea/report.hpp"
#include "trajarea/selection.hpp"
#include "trajarea/simulate.hpp"

namespace fs = std::filesystem;
using namespace trajarea;

namespace {

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  fs::path out_dir = ".";
  std::size_t segments = kDefaultSegments;
  unsigned threads = 1;
};

struct ScanFlags {
  fs::path data;
  int degree = 3;
  std::size_t min_groups = 2;
  std::size_t max_groups = 10;
  int starts = 10;
  int max_iterations = 500;
  double tol = 1e-8;
};

fs::path under(const GlobalFlags& g, const fs::path& p) {
  return p.is_absolute() ? p : g.out_dir / p;
}

fs::path metadata_path(const fs::path& output) {
  auto meta = output;
  meta.replace_extension(".meta.json");
  return meta;
}

void write_metadata(const std::string& command,
                    const std::vector<std::string>& args, std::uint64_t seed,
                    const std::vector<fs::path>& outputs,
                    const std::string& started) {
  std::vector<std::string> names;
  for (const auto& p : outputs) names.push_back(p.filename().string());
  atomic_write(metadata_path(outputs.front()),
               format_run_metadata(command, args, seed, names, started));
}

FitConfig fit_config(const GlobalFlags& g, int starts, int max_iterations,
                     double tol) {
  FitConfig config;
  config.n_starts = starts;
  config.max_iterations = max_iterations;
  config.rel_tol = tol;
  config.seed = g.seed.value_or(0);
  config.threads = g.threads;
  return config;
}

ScanOptions scan_options(const GlobalFlags& g, const ScanFlags& s) {
  ScanOptions options;
  options.degree = s.degree;
  options.k_min = s.min_groups;
  options.k_max = s.max_groups;
  options.fit = fit_config(g, s.starts, s.max_iterations, s.tol);
  return options;
}

void add_scan_flags(CLI::App* cmd, ScanFlags& s) {
  cmd->add_option("--degree", s.degree, "Polynomial degree (0-3)")
      ->check(CLI::Range(0, 3));
  cmd->add_option("--min-groups", s.min_groups, "Smallest K to fit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-groups", s.max_groups, "Largest K to fit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--starts", s.starts, "EM starts per K")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", s.max_iterations, "EM iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", s.tol, "Relative log-likelihood tolerance")
      ->check(CLI::PositiveNumber);
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw InvalidArgument("--pair expects A,B (1-based group numbers)");
  }
  try {
    const auto a = std::stoul(text.substr(0, comma));
    const auto b = std::stoul(text.substr(comma + 1));
    if (a < 1 || b < 1) throw InvalidArgument("group numbers start at 1");
    return {a - 1, b - 1};
  } catch (const std::logic_error&) {
    throw InvalidArgument("--pair expects A,B (1-based group numbers)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const std::string started = utc_timestamp();

  CLI::App app{"Group-based trajectory models and areas between trajectories"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  GlobalFlags global;
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--out-dir", global.out_dir, "Directory for outputs");
  app.add_option("--segments", global.segments,
                 "Trapezoid segments per grid interval")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", global.threads,
                 "Worker threads for EM starts (0 = all cores)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a dataset");
  simulate->fallthrough();
  std::optional<fs::path> sim_spec;
  fs::path sim_out = "data.csv";
  fs::path sim_labels = "labels.csv";
  simulate->add_option("--spec", sim_spec,
                       "Scenario JSON (default: built-in five-group scenario)");
  simulate->add_option("--out", sim_out, "Dataset CSV");
  simulate->add_option("--labels", sim_labels, "True group labels CSV");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit one K-group model");
  fit->fallthrough();
  fs::path fit_data;
  std::size_t fit_groups = 0;
  int fit_degree = 3;
  int fit_starts = 10;
  int fit_max_iter = 500;
  double fit_tol = 1e-8;
  fs::path fit_out = "model.json";
  fit->add_option("--data", fit_data, "Dataset CSV")->required();
  fit->add_option("--groups", fit_groups, "Number of groups K")
      ->required()
      ->check(CLI::PositiveNumber);
  fit->add_option("--degree", fit_degree, "Polynomial degree (0-3)")
      ->check(CLI::Range(0, 3));
  fit->add_option("--starts", fit_starts, "EM starts")
      ->check(CLI::PositiveNumber);
  fit->add_option("--max-iterations", fit_max_iter, "EM iteration cap")
      ->check(CLI::PositiveNumber);
  fit->add_option("--tol", fit_tol, "Relative log-likelihood tolerance")
      ->check(CLI::PositiveNumber);
  fit->add_option("--out", fit_out, "Model JSON");

  // scan
  auto* scan = app.add_subcommand("scan", "Fit K = min..max and tabulate criteria");
  scan->fallthrough();
  ScanFlags scan_flags;
  fs::path scan_out = "scan.csv";
  scan->add_option("--data", scan_flags.data, "Dataset CSV")->required();
  add_scan_flags(scan, scan_flags);
  scan->add_option("--out", scan_out, "Scan CSV");

  // abt
  auto* abt = app.add_subcommand("abt", "Areas between two trajectories");
  abt->fallthrough();
  fs::path abt_model;
  std::optional<std::string> abt_pair;
  std::optional<fs::path> abt_data;
  std::optional<std::string> abt_individual;
  std::optional<std::size_t> abt_group;
  fs::path abt_out = "abt.csv";
  abt->add_option("--model", abt_model, "Model JSON")->required();
  auto* pair_opt =
      abt->add_option("--pair", abt_pair, "Group pair A,B (1-based)");
  auto* ind_opt =
      abt->add_option("--individual", abt_individual, "Individual id");
  abt->add_option("--data", abt_data, "Dataset CSV (with --individual)");
  abt->add_option("--group", abt_group, "Group number (1-based)")
      ->check(CLI::PositiveNumber);
  abt->add_option("--out", abt_out, "ABT CSV");
  pair_opt->excludes(ind_opt);
  ind_opt->needs("--data")->needs("--group");

  // dist
  auto* dist = app.add_subcommand(
      "dist", "Interval ABTs across all pairwise group comparisons");
  dist->fallthrough();
  fs::path dist_model;
  fs::path dist_out = "dist.csv";
  bool dist_summary = false;
  std::optional<fs::path> dist_histogram;
  dist->add_option("--model", dist_model, "Model JSON")->required();
  dist->add_option("--out", dist_out, "Output CSV");
  dist->add_flag("--summary", dist_summary,
                 "Write per-pair mean, sd, min, max instead of raw values");
  dist->add_option("--histogram", dist_histogram,
                   "Also write shared-bin histogram counts here");

  // report
  auto* report = app.add_subcommand(
      "report", "Scan a dataset and write the full report bundle");
  report->fallthrough();
  ScanFlags report_flags;
  report->add_option("--data", report_flags.data, "Dataset CSV")->required();
  add_scan_flags(report, report_flags);

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline", "Simulate (or load), scan, and report end to end");
  pipeline->fallthrough();
  std::optional<fs::path> pipe_spec;
  std::optional<fs::path> pipe_data;
  ScanFlags pipe_flags;
  auto* pipe_spec_opt =
      pipeline->add_option("--spec", pipe_spec, "Scenario JSON");
  auto* pipe_data_opt =
      pipeline->add_option("--data", pipe_data, "Dataset CSV");
  pipe_spec_opt->excludes(pipe_data_opt);
  add_scan_flags(pipeline, pipe_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::config);
  }

  try {
    if (*simulate) {
      ScenarioSpec spec = sim_spec ? load_scenario(*sim_spec)
                                   : default_scenario();
      if (global.seed) spec.seed = *global.seed;
      const auto sim = generate_dataset(spec);
      const auto data_path = under(global, sim_out);
      const auto labels_path = under(global, sim_labels);
      atomic_write(data_path, format_dataset(sim.dataset));
      atomic_write(labels_path, format_labels(sim));
      write_metadata("simulate", args, spec.seed, {data_path, labels_path},
                     started);
      std::cout << "simulated " << sim.dataset.size() << " individuals on "
                << sim.dataset.grid().size() << " time points -> "
                << data_path.string() << '\n';
    } else if (*fit) {
      const auto data = load_dataset(fit_data);
      const auto config = fit_config(global, fit_starts, fit_max_iter, fit_tol);
      const auto result = fit_em(data, fit_groups, fit_degree, config);
      const auto path = under(global, fit_out);
      save_model(result.model, path);
      write_metadata("fit", args, config.seed, {path}, started);
      const auto diag = diagnose(result, data.size());
      std::cout << "K = " << fit_groups
                << "  logL = " << format_real(result.model.log_likelihood, 10)
                << "  BIC = " << format_real(diag.bic, 10)
                << "  SABIC = " << format_real(diag.sabic, 10)
                << "  APPA = " << format_real(diag.appa_model, 6)
                << "  smallest % = " << format_real(diag.smallest_group_pct, 6)
                << (result.model.converged ? "" : "  (not converged)") << '\n';
    } else if (*scan) {
      const auto data = load_dataset(scan_flags.data);
      const auto options = scan_options(global, scan_flags);
      const auto result = scan_models(data, options);
      const auto path = under(global, scan_out);
      atomic_write(path, format_scan_csv(result));
      write_metadata("scan", args, options.fit.seed, {path}, started);
      std::cout << format_fit_indices_text(result);
    } else if (*abt) {
      const auto model = load_model(abt_model);
      AbtResult result;
      if (abt_pair) {
        const auto [a, b] = parse_pair(*abt_pair);
        result = group_pair_abt(model, a, b, global.segments);
      } else if (abt_individual) {
        const auto data = load_dataset(*abt_data);
        result = individual_to_group_abt(data, *abt_individual, model,
                                         *abt_group - 1, global.segments);
      } else {
        throw InvalidArgument("abt needs --pair or --individual");
      }
      const auto path = under(global, abt_out);
      atomic_write(path, format_abt_csv(result));
      write_metadata("abt", args, global.seed.value_or(0), {path}, started);
      std::cout << result.curve_a.label() << " vs " << result.curve_b.label()
                << ": total area " << format_real(result.total, 6) << '\n';
    } else if (*dist) {
      const auto model = load_model(dist_model);
      const auto d = pairwise_distributions(model, global.segments);
      const auto path = under(global, dist_out);
      atomic_write(path, dist_summary ? format_distribution_summary_csv(d)
                                      : format_distribution_csv(d));
      std::vector<fs::path> outputs{path};
      if (dist_histogram) {
        outputs.push_back(under(global, *dist_histogram));
        atomic_write(outputs.back(), format_histogram_csv(d));
      }
      write_metadata("dist", args, global.seed.value_or(0), outputs, started);
    } else if (*report) {
      const auto data = load_dataset(report_flags.data);
      const auto options = scan_options(global, report_flags);
      if (data.size() <= options.k_min) {
        throw FitPreconditionError("need more individuals than groups");
      }
      const auto result = scan_models(data, options);
      ReportOptions report_options;
      report_options.out_dir = global.out_dir;
      report_options.segments = global.segments;
      const auto bundle = write_report(data, result, report_options);
      std::vector<std::string> names;
      for (const auto& p : bundle.files) names.push_back(p.filename().string());
      atomic_write(global.out_dir / "run_metadata.json",
                   format_run_metadata("report", args, options.fit.seed, names,
                                       started));
      std::cout << format_fit_indices_text(result);
    } else if (*pipeline) {
      PipelineConfig config;
      config.scenario = pipe_spec;
      config.data = pipe_data;
      config.out_dir = global.out_dir;
      config.seed = global.seed;
      config.segments = global.segments;
      config.scan = scan_options(global, pipe_flags);
      config.arguments = args;
      const auto outcome = run_pipeline(config);
      std::cout << format_fit_indices_text(outcome.scan) << "wrote "
                << outcome.report.files.size() + 1 << " report files to "
                << global.out_dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(exit_code_for(e));
  }
  return 0;
}
