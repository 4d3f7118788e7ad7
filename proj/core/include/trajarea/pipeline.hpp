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

#ifndef TRAJAREA_PIPELINE_HPP
#define TRAJAREA_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trajarea/report.hpp"
#include "trajarea/selection.hpp"
#include "trajarea/simulate.hpp"

namespace trajarea {

inline constexpr std::string_view kVersion = "0.1.0";

/// Process exit codes shared by every subcommand.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  config = 2,
  fit = 3,
  io = 4,
};

/// Maps a caught exception onto the exit-code table.
ExitCode exit_code_for(const std::exception& error) noexcept;

struct PipelineConfig {
  /// Scenario file; ignored when `data` is set. Neither set means
  /// default_scenario().
  std::optional<std::filesystem::path> scenario;
  std::optional<std::filesystem::path> data;
  std::filesystem::path out_dir = ".";
  /// Overrides the scenario seed and seeds the fitter.
  std::optional<std::uint64_t> seed;
  ScanOptions scan;
  std::size_t segments = kDefaultSegments;
  /// Echoed into run_metadata.json.
  std::vector<std::string> arguments;
};

struct PipelineOutcome {
  ScanResult scan;
  ReportBundle report;
};

/// simulate (unless data given) -> scan -> report -> run_metadata.json.
/// All inputs are validated before the first file is written.
PipelineOutcome run_pipeline(const PipelineConfig& config);

/// Shared run metadata document (inputs, seed, versions, timestamps).
std::string format_run_metadata(const std::string& command,
                                const std::vector<std::string>& arguments,
                                std::uint64_t seed,
                                const std::vector<std::string>& files,
                                const std::string& started_utc);
std::string utc_timestamp();

}  // namespace trajarea

#endif  // TRAJAREA_PIPELINE_HPP
