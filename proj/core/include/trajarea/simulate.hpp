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

#ifndef TRAJAREA_SIMULATE_HPP
#define TRAJAREA_SIMULATE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "trajarea/types.hpp"

namespace trajarea {

struct ScenarioGroup {
  std::string label;
  double proportion = 0.0;
  Polynomial mean_curve;
  double noise_sd = 0.0;
};

/// Generative description of latent trajectory groups.
struct ScenarioSpec {
  TimeGrid grid = TimeGrid::uniform(0.0, 16.0, 2.0);
  std::size_t n_individuals = 0;
  std::vector<ScenarioGroup> groups;
  ScoreBounds bounds;
  std::uint64_t seed = 1;
  bool round_to_integer = false;

  /// Throws InvalidArgument on empty groups, proportions not summing to 1
  /// (1e-9), curves with more than four coefficients, negative noise.
  void validate() const;
};

struct SimulatedData {
  LongitudinalDataset dataset;
  /// (id, group label) in dataset order.
  std::vector<std::pair<std::string, std::string>> labels;
  /// Index into ScenarioSpec::groups per individual.
  std::vector<std::size_t> group_index;
};

/// Individual i (0-based, id "i+1") draws its group and then one Gaussian
/// value per grid time from make_stream(spec.seed, i). Scores are clamped to
/// the bounds and optionally rounded.
SimulatedData generate_dataset(const ScenarioSpec& spec);

/// Five sleep-quality-like groups on weeks 0..16, N = 1000: two parallel
/// low groups (the second offset upward), a stable poor group, an improving
/// cubic and a worsening quadratic.
ScenarioSpec default_scenario();

/// Indices of the two parallel low groups in default_scenario().
inline constexpr std::pair<std::size_t, std::size_t> kDefaultLowPair{0, 1};

ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec parse_scenario(const std::string& json_text);
std::string format_scenario(const ScenarioSpec& spec);

std::string format_labels(const SimulatedData& sim);

}  // namespace trajarea

#endif  // TRAJAREA_SIMULATE_HPP
