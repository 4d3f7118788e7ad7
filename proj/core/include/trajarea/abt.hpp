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

#ifndef TRAJAREA_ABT_HPP
#define TRAJAREA_ABT_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "trajarea/error.hpp"
#include "trajarea/gbtm.hpp"
#include "trajarea/types.hpp"

namespace trajarea {

inline constexpr std::size_t kDefaultSegments = 1000;

/// Composite trapezoid estimate of the integral of |a(t) - b(t)| over
/// [t0, t1] using n_segments equal segments (n_segments + 1 nodes).
template <class CurveA, class CurveB>
double trapezoid_area(const CurveA& a, const CurveB& b, double t0, double t1,
                      std::size_t n_segments) {
  if (!(t1 > t0)) throw InvalidArgument("trapezoid_area: require t1 > t0");
  if (n_segments < 1) throw InvalidArgument("trapezoid_area: n_segments < 1");
  const double width = t1 - t0;
  const auto n = static_cast<double>(n_segments);
  const auto gap = [&](std::size_t j) {
    // Last node pinned to t1 so endpoints are evaluated exactly.
    const double t =
        j == n_segments ? t1 : t0 + width * (static_cast<double>(j) / n);
    const double d = std::abs(a(t) - b(t));
    if (!std::isfinite(d)) {
      throw NumericError("trapezoid_area: non-finite curve value at t = " +
                         std::to_string(t));
    }
    return d;
  };
  double sum = 0.5 * (gap(0) + gap(n_segments));
  for (std::size_t j = 1; j < n_segments; ++j) sum += gap(j);
  return width * sum / n;
}

/// One trapezoid_area per consecutive grid interval.
template <class CurveA, class CurveB>
std::vector<double> interval_areas(const CurveA& a, const CurveB& b,
                                   const TimeGrid& grid,
                                   std::size_t n_segments) {
  std::vector<double> areas(grid.intervals());
  for (std::size_t i = 0; i < areas.size(); ++i) {
    areas[i] = trapezoid_area(a, b, grid[i], grid[i + 1], n_segments);
  }
  return areas;
}

struct CurveRef {
  enum class Kind { group, individual };
  Kind kind = Kind::group;
  std::size_t group = 0;
  std::string id;

  static CurveRef of_group(std::size_t g) { return {Kind::group, g, {}}; }
  static CurveRef of_individual(std::string id) {
    return {Kind::individual, 0, std::move(id)};
  }
  /// "G1" style label for groups (1-based), the id for individuals.
  std::string label() const;
};

struct AbtResult {
  CurveRef curve_a;
  CurveRef curve_b;
  TimeGrid grid = TimeGrid({0.0, 1.0});
  std::vector<double> interval_areas;
  double total = 0.0;
  std::size_t segments_per_interval = kDefaultSegments;
};

/// Areas between two group trajectories of `model` (0-based indices).
AbtResult group_pair_abt(const FittedModel& model, std::size_t group_a,
                         std::size_t group_b,
                         std::size_t n_segments = kDefaultSegments);

/// Areas between an individual's piecewise-linear path and group `group`.
AbtResult individual_to_group_abt(const LongitudinalDataset& data,
                                  const std::string& id,
                                  const FittedModel& model, std::size_t group,
                                  std::size_t n_segments = kDefaultSegments);

struct PairDistribution {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  std::vector<double> values;
  double mean = 0.0;
  /// Sample standard deviation (n - 1 denominator).
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::size_t> counts;
};

struct AbtDistribution {
  std::vector<PairDistribution> pairs;
  /// Shared equal-width edges over [0, global max]; bins + 1 entries.
  std::vector<double> bin_edges;
  std::size_t segments_per_interval = kDefaultSegments;
  TimeGrid grid = TimeGrid({0.0, 1.0});
};

/// Interval areas for every unordered pair (a < b, lexicographic), with
/// summaries and a shared histogram of max(10, ceil(sqrt(values))) bins.
AbtDistribution pairwise_distributions(
    const FittedModel& model, std::size_t n_segments = kDefaultSegments);

/// Bin index for `value` on `edges`; the top edge is inclusive.
std::size_t histogram_bin(const std::vector<double>& edges, double value);

}  // namespace trajarea

#endif  // TRAJAREA_ABT_HPP
