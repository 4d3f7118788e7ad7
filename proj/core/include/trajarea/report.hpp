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

#ifndef TRAJAREA_REPORT_HPP
#define TRAJAREA_REPORT_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "trajarea/abt.hpp"
#include "trajarea/gbtm.hpp"
#include "trajarea/selection.hpp"
#include "trajarea/types.hpp"

namespace trajarea {

/// printf-style %.{digits}g; 17 digits round-trips a double.
std::string format_real(double value, int significant_digits = 17);

/// Writes to a sibling temporary file and renames it over `path`, so
/// readers never observe a partial file. Throws IoError.
void atomic_write(const std::filesystem::path& path,
                  const std::string& contents);

/// K, smallest_group_pct, bic, sabic, appa_model, appa_g1..appa_gM,
/// excluded; M is the largest K in the scan and shorter rows are padded.
std::string format_scan_csv(const ScanResult& scan);

/// Fit-index table with n_params, log-likelihood and status columns added.
/// `significant_digits` 6 gives the display table, 17 the raw twin.
std::string format_fit_indices_csv(const ScanResult& scan,
                                   int significant_digits);
/// Aligned plain-text rendering of the fit-index table.
std::string format_fit_indices_text(const ScanResult& scan);

/// group, t, value with `points` evenly spaced times over the grid span.
std::string format_curves_csv(const FittedModel& model,
                              std::size_t points = 200);

/// interval_start, interval_end, area plus a closing `total` row.
std::string format_abt_csv(const AbtResult& result);

/// pair, interval, area.
std::string format_distribution_csv(const AbtDistribution& dist);
/// pair, mean, sd, min, max.
std::string format_distribution_summary_csv(const AbtDistribution& dist);
/// pair, bin, lower, upper, count.
std::string format_histogram_csv(const AbtDistribution& dist);

/// id, group, total: each individual against its modal group.
std::string format_individual_abt_csv(const LongitudinalDataset& data,
                                      const FitResult& fit,
                                      std::size_t segments = kDefaultSegments);

struct ReportOptions {
  std::filesystem::path out_dir;
  std::size_t segments = kDefaultSegments;
  std::size_t curve_points = 200;
};

struct ReportBundle {
  std::vector<std::filesystem::path> files;
  /// False when no model survived the size rule; the table is still written.
  bool has_candidates = true;
};

/// Fit-index tables for every scanned K plus, per candidate K, the model
/// file, sampled curves, individual-to-modal-group ABTs, and the pairwise
/// per-interval ABTs with their summary and histogram.
ReportBundle write_report(const LongitudinalDataset& data,
                          const ScanResult& scan,
                          const ReportOptions& options);

}  // namespace trajarea

#endif  // TRAJAREA_REPORT_HPP
