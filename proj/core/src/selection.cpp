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

#include "trajarea/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trajarea/error.hpp"

namespace trajarea {

std::size_t parameter_count(std::size_t groups, int degree) {
  return groups * static_cast<std::size_t>(degree + 1) + (groups - 1) + 1;
}

double bic(double log_likelihood, std::size_t n_params, std::size_t n) {
  if (n < 1) throw InvalidArgument("bic: n must be >= 1");
  return static_cast<double>(n_params) * std::log(static_cast<double>(n)) -
         2.0 * log_likelihood;
}

double sabic(double log_likelihood, std::size_t n_params, std::size_t n) {
  if (n < 1) throw InvalidArgument("sabic: n must be >= 1");
  const double adjusted = (static_cast<double>(n) + 2.0) / 24.0;
  return static_cast<double>(n_params) * std::log(adjusted) -
         2.0 * log_likelihood;
}

namespace {

std::vector<std::size_t> modal_counts(const PosteriorMatrix& posterior) {
  std::vector<std::size_t> counts(posterior.groups(), 0);
  for (std::size_t g : posterior.modal()) ++counts[g];
  return counts;
}

/// Per-group APPA with NaN marking groups that have no modal members.
std::vector<double> appa_or_nan(const PosteriorMatrix& posterior) {
  std::vector<double> sum(posterior.groups(), 0.0);
  const auto counts = modal_counts(posterior);
  for (std::size_t i = 0; i < posterior.rows(); ++i) {
    const std::size_t g = posterior.modal()[i];
    sum[g] += posterior(i, g);
  }
  for (std::size_t k = 0; k < sum.size(); ++k) {
    sum[k] = counts[k] == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : sum[k] / static_cast<double>(counts[k]);
  }
  return sum;
}

}  // namespace

Appa appa(const PosteriorMatrix& posterior) {
  Appa out;
  out.per_group = appa_or_nan(posterior);
  for (std::size_t k = 0; k < out.per_group.size(); ++k) {
    if (std::isnan(out.per_group[k])) throw EmptyGroupError(k);
  }
  out.model_level =
      *std::min_element(out.per_group.begin(), out.per_group.end());
  return out;
}

double smallest_group_pct(const PosteriorMatrix& posterior) {
  if (posterior.rows() < 1) {
    throw InvalidArgument("smallest_group_pct: empty posterior");
  }
  const auto counts = modal_counts(posterior);
  const auto smallest = *std::min_element(counts.begin(), counts.end());
  return 100.0 * static_cast<double>(smallest) /
         static_cast<double>(posterior.rows());
}

FitDiagnostics diagnose(const FitResult& fit, std::size_t n_individuals) {
  FitDiagnostics d;
  d.groups = fit.model.groups();
  d.n_params = parameter_count(d.groups, fit.model.degree);
  d.log_likelihood = fit.model.log_likelihood;
  d.bic = bic(d.log_likelihood, d.n_params, n_individuals);
  d.sabic = sabic(d.log_likelihood, d.n_params, n_individuals);
  d.appa_per_group = appa_or_nan(fit.posterior);
  d.appa_model = std::numeric_limits<double>::quiet_NaN();
  if (std::none_of(d.appa_per_group.begin(), d.appa_per_group.end(),
                   [](double v) { return std::isnan(v); })) {
    d.appa_model =
        *std::min_element(d.appa_per_group.begin(), d.appa_per_group.end());
  }
  d.smallest_group_pct = smallest_group_pct(fit.posterior);
  d.excluded_by_size_rule = d.smallest_group_pct < kMinGroupPct;
  return d;
}

const FitResult* ScanResult::fit_for(std::size_t groups) const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].groups == groups && fits[r]) return &*fits[r];
  }
  return nullptr;
}

ScanResult scan_models(const LongitudinalDataset& data,
                       const ScanOptions& options) {
  if (options.k_min < 1) throw InvalidArgument("scan: k_min must be >= 1");
  if (options.k_max < options.k_min) {
    throw InvalidArgument("scan: k_max must be >= k_min");
  }
  ScanResult scan;
  for (std::size_t k = options.k_min; k <= options.k_max; ++k) {
    FitDiagnostics row;
    std::optional<FitResult> fit;
    try {
      fit = fit_em(data, k, options.degree, options.fit);
      row = diagnose(*fit, data.size());
    } catch (const FitError& e) {
      row = FitDiagnostics{};
      row.groups = k;
      row.n_params = parameter_count(k, options.degree);
      row.failed = true;
      row.failure = e.what();
      fit.reset();
    }
    scan.rows.push_back(row);
    scan.fits.push_back(std::move(fit));
    if (row.failed) continue;
    if (row.excluded_by_size_rule) break;
    scan.candidate_set.push_back(k);
    if (!scan.recommended_by_bic ||
        row.bic < scan.rows[*scan.recommended_by_bic - options.k_min].bic) {
      scan.recommended_by_bic = k;
    }
  }
  return scan;
}

}  // namespace trajarea
