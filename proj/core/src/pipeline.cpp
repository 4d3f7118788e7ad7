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

#include "trajarea/pipeline.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "trajarea/dataset_io.hpp"
#include "trajarea/error.hpp"
#include "trajarea/rng.hpp"

namespace trajarea {

ExitCode exit_code_for(const std::exception& error) noexcept {
  if (dynamic_cast<const FitError*>(&error) ||
      dynamic_cast<const EmptyGroupError*>(&error)) {
    return ExitCode::fit;
  }
  if (dynamic_cast<const IoError*>(&error)) return ExitCode::io;
  if (dynamic_cast<const Error*>(&error)) return ExitCode::config;
  return ExitCode::failure;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string format_run_metadata(const std::string& command,
                                const std::vector<std::string>& arguments,
                                std::uint64_t seed,
                                const std::vector<std::string>& files,
                                const std::string& started_utc) {
  nlohmann::json doc;
  doc["tool"] = "trajarea";
  doc["version"] = std::string(kVersion);
  doc["command"] = command;
  doc["arguments"] = arguments;
  doc["seed"] = seed;
  doc["rng_algorithm"] = std::string(kRngAlgorithm);
  doc["conventions"] = {
      {"bic_sample_size", "individuals"},
      {"sabic_adjustment", "(n+2)/24"},
      {"appa_model_level", "minimum over groups"},
      {"time_scale", "raw"},
      {"score_scale", "raw"},
      {"abt_integrand", "absolute difference"},
  };
  doc["files"] = files;
  doc["started_utc"] = started_utc;
  doc["finished_utc"] = utc_timestamp();
  return doc.dump(2) + "\n";
}

PipelineOutcome run_pipeline(const PipelineConfig& config) {
  const std::string started = utc_timestamp();

  std::optional<SimulatedData> simulated;
  std::optional<ScenarioSpec> scenario;
  std::optional<LongitudinalDataset> loaded;
  if (config.data) {
    loaded = load_dataset(*config.data);
  } else {
    scenario = config.scenario ? load_scenario(*config.scenario)
                               : default_scenario();
    if (config.seed) scenario->seed = *config.seed;
    simulated = generate_dataset(*scenario);
  }
  const LongitudinalDataset& data =
      simulated ? simulated->dataset : *loaded;

  ScanOptions scan_options = config.scan;
  const std::uint64_t seed =
      config.seed.value_or(scenario ? scenario->seed : config.scan.fit.seed);
  scan_options.fit.seed = seed;
  if (data.size() <= scan_options.k_min) {
    throw FitPreconditionError(
        "need more individuals than groups at scan start (N = " +
        std::to_string(data.size()) +
        ", K = " + std::to_string(scan_options.k_min) + ")");
  }

  PipelineOutcome outcome;
  outcome.scan = scan_models(data, scan_options);
  bool any_fit = false;
  for (const auto& row : outcome.scan.rows) any_fit = any_fit || !row.failed;
  if (!any_fit) {
    throw DegenerateFitError("degenerate fit: every K in the scan failed");
  }

  if (simulated) {
    atomic_write(config.out_dir / "scenario.json", format_scenario(*scenario));
    atomic_write(config.out_dir / "data.csv", format_dataset(data));
    atomic_write(config.out_dir / "labels.csv", format_labels(*simulated));
  }
  ReportOptions report_options;
  report_options.out_dir = config.out_dir;
  report_options.segments = config.segments;
  outcome.report = write_report(data, outcome.scan, report_options);

  std::vector<std::string> names;
  if (simulated) names = {"scenario.json", "data.csv", "labels.csv"};
  for (const auto& path : outcome.report.files) {
    names.push_back(path.filename().string());
  }
  atomic_write(config.out_dir / "run_metadata.json",
               format_run_metadata("pipeline", config.arguments, seed, names,
                                   started));
  return outcome;
}

}  // namespace trajarea
