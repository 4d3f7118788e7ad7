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

#include "trajarea/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "trajarea/error.hpp"
#include "trajarea/rng.hpp"

namespace trajarea {

void ScenarioSpec::validate() const {
  if (n_individuals < 1) {
    throw InvalidArgument("scenario: n_individuals must be >= 1");
  }
  if (groups.empty()) throw InvalidArgument("scenario: no groups");
  if (!(bounds.upper >= bounds.lower)) {
    throw InvalidArgument("scenario: bounds must satisfy lower <= upper");
  }
  double total = 0.0;
  for (const auto& g : groups) {
    if (!(g.proportion > 0.0 && g.proportion <= 1.0)) {
      throw InvalidArgument("scenario: proportion of '" + g.label +
                            "' must be in (0, 1]");
    }
    const auto n_coef = g.mean_curve.coefficients.size();
    if (n_coef < 1 || n_coef > 4) {
      throw InvalidArgument("scenario: mean curve of '" + g.label +
                            "' needs 1 to 4 coefficients");
    }
    for (double c : g.mean_curve.coefficients) {
      if (!std::isfinite(c)) {
        throw InvalidArgument("scenario: non-finite coefficient in '" +
                              g.label + "'");
      }
    }
    if (!(g.noise_sd >= 0.0) || !std::isfinite(g.noise_sd)) {
      throw InvalidArgument("scenario: noise_sd of '" + g.label +
                            "' must be finite and >= 0");
    }
    total += g.proportion;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("scenario: proportions sum to " +
                          std::to_string(total) + ", expected 1");
  }
}

SimulatedData generate_dataset(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<double> cumulative(spec.groups.size());
  double running = 0.0;
  for (std::size_t k = 0; k < spec.groups.size(); ++k) {
    running += spec.groups[k].proportion;
    cumulative[k] = running;
  }

  std::vector<Individual> individuals;
  individuals.reserve(spec.n_individuals);
  std::vector<std::pair<std::string, std::string>> labels;
  labels.reserve(spec.n_individuals);
  std::vector<std::size_t> group_index;
  group_index.reserve(spec.n_individuals);

  for (std::size_t i = 0; i < spec.n_individuals; ++i) {
    Engine engine = make_stream(spec.seed, i);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    const ScenarioGroup& group = spec.groups[k];

    Individual person{std::to_string(i + 1), {}};
    person.scores.reserve(spec.grid.size());
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double t : spec.grid.times()) {
      double y = group.mean_curve(t);
      if (group.noise_sd > 0.0) y += group.noise_sd * noise(engine);
      y = std::clamp(y, spec.bounds.lower, spec.bounds.upper);
      if (spec.round_to_integer) y = std::round(y);
      person.scores.push_back(y);
    }
    labels.emplace_back(person.id, group.label);
    group_index.push_back(k);
    individuals.push_back(std::move(person));
  }
  return {LongitudinalDataset(spec.grid, std::move(individuals), spec.bounds),
          std::move(labels), std::move(group_index)};
}

ScenarioSpec default_scenario() {
  // Improving: Hermite cubic from 15 to 6 with slope -0.2 at both ends.
  constexpr double kImproveCubic = 5.8 / 2048.0;
  ScenarioSpec spec;
  spec.grid = TimeGrid::uniform(0.0, 16.0, 2.0);
  spec.n_individuals = 1000;
  spec.bounds = {0.0, 21.0};
  spec.seed = 1;
  spec.groups = {
      {"good-stable", 0.28, Polynomial{{3.0, 0.03}}, 1.0},
      {"low-stable", 0.22, Polynomial{{5.6, 0.03}}, 1.0},
      {"poor-stable", 0.14, Polynomial{{16.0, -0.05}}, 1.5},
      {"improving", 0.18,
       Polynomial{{15.0, -0.2, -24.0 * kImproveCubic, kImproveCubic}}, 1.5},
      {"worsening", 0.18, Polynomial{{6.5, 0.9, -0.0234375}}, 1.5},
  };
  return spec;
}

namespace {

using nlohmann::json;

template <class T>
T require(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) {
    throw SchemaError(std::string("scenario: missing field '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario: malformed field '") + name +
                      "': " + e.what());
  }
}

template <class T>
T optional_field(const json& doc, const char* name, T fallback) {
  return doc.contains(name) ? require<T>(doc, name) : fallback;
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("scenario: expected an object");

  ScenarioSpec spec;
  try {
    spec.grid = TimeGrid(require<std::vector<double>>(doc, "grid"));
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("scenario: bad grid: ") + e.what());
  }
  spec.n_individuals = require<std::size_t>(doc, "n_individuals");
  const auto bounds = optional_field<std::vector<double>>(
      doc, "bounds", {spec.bounds.lower, spec.bounds.upper});
  if (bounds.size() != 2) throw SchemaError("scenario: bounds needs 2 values");
  spec.bounds = {bounds[0], bounds[1]};
  spec.seed = optional_field<std::uint64_t>(doc, "seed", spec.seed);
  spec.round_to_integer =
      optional_field<bool>(doc, "round_to_integer", spec.round_to_integer);

  const auto groups = doc.find("groups");
  if (groups == doc.end() || !groups->is_array()) {
    throw SchemaError("scenario: 'groups' must be an array");
  }
  for (const auto& g : *groups) {
    if (!g.is_object()) throw SchemaError("scenario: group must be an object");
    ScenarioGroup group;
    group.label = require<std::string>(g, "label");
    group.proportion = require<double>(g, "proportion");
    group.mean_curve.coefficients =
        require<std::vector<double>>(g, "mean_curve");
    group.noise_sd = require<double>(g, "noise_sd");
    spec.groups.push_back(std::move(group));
  }
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError(e.what());
  }
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string format_scenario(const ScenarioSpec& spec) {
  json doc;
  doc["grid"] =
      std::vector<double>(spec.grid.times().begin(), spec.grid.times().end());
  doc["n_individuals"] = spec.n_individuals;
  doc["bounds"] = {spec.bounds.lower, spec.bounds.upper};
  doc["seed"] = spec.seed;
  doc["round_to_integer"] = spec.round_to_integer;
  doc["groups"] = json::array();
  for (const auto& g : spec.groups) {
    doc["groups"].push_back({{"label", g.label},
                             {"proportion", g.proportion},
                             {"mean_curve", g.mean_curve.coefficients},
                             {"noise_sd", g.noise_sd}});
  }
  return doc.dump(2) + "\n";
}

std::string format_labels(const SimulatedData& sim) {
  std::string out = "id,group\n";
  for (const auto& [id, label] : sim.labels) {
    out += id;
    out += ',';
    out += label;
    out += '\n';
  }
  return out;
}

}  // namespace trajarea
