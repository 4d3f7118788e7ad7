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

#include "trajarea/abt.hpp"

#include <algorithm>
#include <numeric>

namespace trajarea {

std::string CurveRef::label() const {
  return kind == Kind::group ? "G" + std::to_string(group + 1) : id;
}

namespace {

void check_group(const FittedModel& model, std::size_t g) {
  if (g >= model.groups()) {
    throw InvalidArgument("group " + std::to_string(g + 1) +
                          " out of range (K = " +
                          std::to_string(model.groups()) + ")");
  }
}

double sum_of(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

AbtResult group_pair_abt(const FittedModel& model, std::size_t group_a,
                         std::size_t group_b, std::size_t n_segments) {
  check_group(model, group_a);
  check_group(model, group_b);
  AbtResult result;
  result.curve_a = CurveRef::of_group(group_a);
  result.curve_b = CurveRef::of_group(group_b);
  result.grid = model.grid;
  result.segments_per_interval = n_segments;
  if (group_a == group_b) {
    result.interval_areas.assign(model.grid.intervals(), 0.0);
    return result;
  }
  result.interval_areas =
      interval_areas(model.trajectory(group_a), model.trajectory(group_b),
                     model.grid, n_segments);
  result.total = sum_of(result.interval_areas);
  return result;
}

AbtResult individual_to_group_abt(const LongitudinalDataset& data,
                                  const std::string& id,
                                  const FittedModel& model, std::size_t group,
                                  std::size_t n_segments) {
  const auto index = data.index_of(id);
  if (!index) throw InvalidArgument("unknown individual id: " + id);
  check_group(model, group);
  if (!(model.grid == data.grid())) {
    throw GridMismatchError("model grid differs from dataset grid");
  }
  const IndividualTrajectory path(data.grid(), data[*index].scores);
  const Polynomial curve = model.trajectory(group);

  AbtResult result;
  result.curve_a = CurveRef::of_individual(id);
  result.curve_b = CurveRef::of_group(group);
  result.grid = model.grid;
  result.segments_per_interval = n_segments;
  result.interval_areas.resize(model.grid.intervals());
  for (std::size_t i = 0; i < result.interval_areas.size(); ++i) {
    // The observed path is a single chord on each interval.
    const auto chord = [&](double t) { return path.on_interval(i, t); };
    result.interval_areas[i] = trapezoid_area(
        chord, curve, model.grid[i], model.grid[i + 1], n_segments);
  }
  result.total = sum_of(result.interval_areas);
  return result;
}

std::size_t histogram_bin(const std::vector<double>& edges, double value) {
  const std::size_t bins = edges.size() - 1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const auto bin = static_cast<std::size_t>(it - edges.begin());
  if (bin == 0) return 0;
  return std::min(bin - 1, bins - 1);
}

AbtDistribution pairwise_distributions(const FittedModel& model,
                                       std::size_t n_segments) {
  if (model.groups() < 2) {
    throw InvalidArgument("pairwise distributions need K >= 2");
  }
  AbtDistribution dist;
  dist.segments_per_interval = n_segments;
  dist.grid = model.grid;

  double global_max = 0.0;
  std::size_t total_values = 0;
  for (std::size_t a = 0; a < model.groups(); ++a) {
    for (std::size_t b = a + 1; b < model.groups(); ++b) {
      PairDistribution pair;
      pair.group_a = a;
      pair.group_b = b;
      pair.values = group_pair_abt(model, a, b, n_segments).interval_areas;
      const auto n = static_cast<double>(pair.values.size());
      pair.mean = sum_of(pair.values) / n;
      double ss = 0.0;
      for (double v : pair.values) ss += (v - pair.mean) * (v - pair.mean);
      pair.sd = pair.values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      const auto [lo, hi] =
          std::minmax_element(pair.values.begin(), pair.values.end());
      pair.min = *lo;
      pair.max = *hi;
      global_max = std::max(global_max, pair.max);
      total_values += pair.values.size();
      dist.pairs.push_back(std::move(pair));
    }
  }

  const auto bins = std::max<std::size_t>(
      10, static_cast<std::size_t>(
              std::ceil(std::sqrt(static_cast<double>(total_values)))));
  // All-zero areas still get a usable unit-width range.
  const double upper = global_max > 0.0 ? global_max : 1.0;
  dist.bin_edges.resize(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j) {
    dist.bin_edges[j] =
        j == bins ? upper
                  : upper * (static_cast<double>(j) / static_cast<double>(bins));
  }
  for (auto& pair : dist.pairs) {
    pair.counts.assign(bins, 0);
    for (double v : pair.values) ++pair.counts[histogram_bin(dist.bin_edges, v)];
  }
  return dist;
}

}  // namespace trajarea
