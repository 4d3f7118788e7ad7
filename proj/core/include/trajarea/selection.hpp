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

#ifndef TRAJAREA_SELECTION_HPP
#define TRAJAREA_SELECTION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trajarea/gbtm.hpp"

namespace trajarea {

/// Minimum modal group share, in percent, for a model to stay a candidate.
inline constexpr double kMinGroupPct = 5.0;
/// Conventional adequacy threshold for APPA.
inline constexpr double kAppaThreshold = 0.70;

/// K (degree + 1) trajectory coefficients, K - 1 free mixing weights and
/// the shared sigma.
std::size_t parameter_count(std::size_t groups, int degree);

/// n_params ln(n) - 2 logL, with n the number of individuals.
double bic(double log_likelihood, std::size_t n_params, std::size_t n);
/// Sample-size adjusted BIC: n is replaced by (n + 2) / 24.
double sabic(double log_likelihood, std::size_t n_params, std::size_t n);

struct Appa {
  std::vector<double> per_group;
  /// Minimum of per_group.
  double model_level = 0.0;
};

/// Mean posterior of the assigned group among its modal members. Throws
/// EmptyGroupError for a group with no modal members.
Appa appa(const PosteriorMatrix& posterior);

/// 100 * smallest modal count / N.
double smallest_group_pct(const PosteriorMatrix& posterior);

struct FitDiagnostics {
  std::size_t groups = 0;
  std::size_t n_params = 0;
  double log_likelihood = 0.0;
  double bic = 0.0;
  double sabic = 0.0;
  /// NaN for a group without modal members.
  std::vector<double> appa_per_group;
  /// NaN when any group is empty.
  double appa_model = 0.0;
  double smallest_group_pct = 0.0;
  bool excluded_by_size_rule = false;
  /// Set when fitting this K threw; the numeric fields are then meaningless.
  bool failed = false;
  std::string failure;
};

FitDiagnostics diagnose(const FitResult& fit, std::size_t n_individuals);

struct ScanResult {
  std::vector<FitDiagnostics> rows;
  /// Fit per row; empty for failed rows.
  std::vector<std::optional<FitResult>> fits;
  std::vector<std::size_t> candidate_set;
  std::optional<std::size_t> recommended_by_bic;

  /// Fit for a given K, if that row exists and succeeded.
  const FitResult* fit_for(std::size_t groups) const;
};

struct ScanOptions {
  int degree = 3;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  FitConfig fit;
};

/// Fits K = k_min, k_min + 1, ... and stops after the first K whose smallest
/// group falls under kMinGroupPct; that K is still reported. Failed fits are
/// recorded and the scan moves on.
ScanResult scan_models(const LongitudinalDataset& data,
                       const ScanOptions& options);

}  // namespace trajarea

#endif  // TRAJAREA_SELECTION_HPP
