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

#ifndef TRAJAREA_TYPES_HPP
#define TRAJAREA_TYPES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace trajarea {

/// Closed score range used to validate observations.
struct ScoreBounds {
  double lower = 0.0;
  double upper = 21.0;

  bool contains(double y) const noexcept { return y >= lower && y <= upper; }
  friend bool operator==(const ScoreBounds&, const ScoreBounds&) = default;
};

/// Strictly increasing measurement times shared by every individual.
class TimeGrid {
 public:
  /// Throws InvalidArgument unless `times` has at least two strictly
  /// increasing finite entries.
  explicit TimeGrid(std::vector<double> times);

  /// Evenly spaced grid `start, start + step, ..., stop`.
  static TimeGrid uniform(double start, double stop, double step);

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t intervals() const noexcept { return times_.size() - 1; }
  double operator[](std::size_t i) const { return times_[i]; }
  double front() const noexcept { return times_.front(); }
  double back() const noexcept { return times_.back(); }
  std::span<const double> times() const noexcept { return times_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> times_;
};

/// Polynomial in ascending power order, c0 + c1 t + c2 t^2 + ...
struct Polynomial {
  std::vector<double> coefficients;

  double operator()(double t) const noexcept {
    double value = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      value = value * t + *it;
    }
    return value;
  }
  std::size_t degree() const noexcept {
    return coefficients.empty() ? 0 : coefficients.size() - 1;
  }
};

struct Individual {
  std::string id;
  std::vector<double> scores;
};

/// Complete panel of scores on a shared grid. Immutable once built.
class LongitudinalDataset {
 public:
  /// Validates score-vector length, finiteness, bounds and id uniqueness.
  /// Individuals keep the order given.
  LongitudinalDataset(TimeGrid grid, std::vector<Individual> individuals,
                      ScoreBounds bounds = {});

  const TimeGrid& grid() const noexcept { return grid_; }
  const ScoreBounds& bounds() const noexcept { return bounds_; }
  std::size_t size() const noexcept { return individuals_.size(); }
  const std::vector<Individual>& individuals() const noexcept {
    return individuals_;
  }
  const Individual& operator[](std::size_t i) const { return individuals_[i]; }

  std::optional<std::size_t> index_of(const std::string& id) const;

  friend bool operator==(const LongitudinalDataset& a,
                         const LongitudinalDataset& b);

 private:
  TimeGrid grid_;
  std::vector<Individual> individuals_;
  ScoreBounds bounds_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Piecewise-linear path through one individual's observed points. Views the
/// grid and scores; both must outlive it.
class IndividualTrajectory {
 public:
  IndividualTrajectory(const TimeGrid& grid, std::span<const double> scores);

  /// Linear interpolation; clamps to the end values outside the grid span.
  double operator()(double t) const;

  /// Linear piece on grid interval `interval` (exact chord, no search).
  double on_interval(std::size_t interval, double t) const;

 private:
  std::span<const double> times_;
  std::span<const double> scores_;
};

/// Ordering used for individual ids: integer ids numerically first, then
/// the rest lexicographically.
bool id_less(const std::string& a, const std::string& b);

}  // namespace trajarea

#endif  // TRAJAREA_TYPES_HPP
