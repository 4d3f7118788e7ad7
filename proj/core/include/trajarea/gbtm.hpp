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

#ifndef TRAJAREA_GBTM_HPP
#define TRAJAREA_GBTM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajarea/types.hpp"

namespace trajarea {

inline constexpr int kMaxDegree = 3;
inline constexpr double kDefaultSigmaFloor = 1e-6;

/// Basis (1, t, ..., t^degree). Throws InvalidArgument for degree outside
/// [0, 3].
std::vector<double> design_row(double t, int degree);

/// K polynomial group trajectories with a shared Gaussian residual scale.
///
/// Groups are ordered by the mean of their fitted values over the grid, so
/// group 0 is always the lowest trajectory.
struct FittedModel {
  TimeGrid grid = TimeGrid({0.0, 1.0});
  int degree = 0;
  std::vector<double> mixing_proportions;
  /// One vector of degree + 1 coefficients per group, ascending powers.
  std::vector<std::vector<double>> coefficients;
  double sigma = 1.0;
  double log_likelihood = 0.0;
  std::size_t n_individuals = 0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;

  std::size_t groups() const noexcept { return mixing_proportions.size(); }
  Polynomial trajectory(std::size_t group) const;
  /// Mean of the group curve over the grid points.
  double grid_mean(std::size_t group) const;

  /// Throws SchemaError when shapes, simplex, sigma or ordering are off.
  void validate() const;

  friend bool operator==(const FittedModel&, const FittedModel&) = default;
};

/// N x K posterior membership plus modal (argmax, lowest index on ties)
/// assignment.
class PosteriorMatrix {
 public:
  PosteriorMatrix(std::vector<std::string> ids, std::size_t groups,
                  std::vector<double> probs);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t groups() const noexcept { return groups_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const double> row(std::size_t i) const {
    return {probs_.data() + i * groups_, groups_};
  }
  double operator()(std::size_t i, std::size_t k) const {
    return probs_[i * groups_ + k];
  }
  const std::vector<std::size_t>& modal() const noexcept { return modal_; }

 private:
  std::vector<std::string> ids_;
  std::size_t groups_;
  std::vector<double> probs_;
  std::vector<std::size_t> modal_;
};

struct FitConfig {
  int n_starts = 10;
  int max_iterations = 500;
  double rel_tol = 1e-8;
  double sigma_floor = kDefaultSigmaFloor;
  std::uint64_t seed = 0;
  /// Worker threads for independent starts; 0 picks hardware concurrency.
  /// Results never depend on this value.
  unsigned threads = 1;

  void validate() const;
};

/// Outcome of one EM start.
struct StartReport {
  bool failed = false;
  std::string failure;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  /// Log-likelihood after every M-step.
  std::vector<double> trace;
};

struct FitResult {
  FittedModel model;
  PosteriorMatrix posterior;
  std::vector<StartReport> starts;
  std::size_t best_start = 0;
};

double log_likelihood(const FittedModel& model,
                      const LongitudinalDataset& data);

PosteriorMatrix posterior_probabilities(const FittedModel& model,
                                        const LongitudinalDataset& data);

/// Multi-start EM. Each start draws a uniform simplex responsibility row per
/// individual from make_stream(config.seed, start). The highest final
/// log-likelihood wins (lowest start index on ties).
///
/// Throws FitPreconditionError when N <= K or K < 1, DegenerateFitError
/// when every start collapses.
FitResult fit_em(const LongitudinalDataset& data, std::size_t groups,
                 int degree, const FitConfig& config);

/// Single EM run from explicit N x K row-major initial responsibilities.
/// The returned model is already relabeled; on collapse `report.failed` is
/// set and the model is left default-constructed.
struct SingleFit {
  FittedModel model;
  StartReport report;
};
SingleFit fit_from_responsibilities(const LongitudinalDataset& data,
                                    std::size_t groups, int degree,
                                    const FitConfig& config,
                                    std::vector<double> responsibilities);

}  // namespace trajarea

#endif  // TRAJAREA_GBTM_HPP
