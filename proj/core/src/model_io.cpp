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

#include "trajarea/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trajarea/error.hpp"
#include "trajarea/report.hpp"

namespace trajarea {
namespace {

using nlohmann::json;

const json& field(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) {
    throw SchemaError(std::string("model file: missing field '") + name + "'");
  }
  return *it;
}

template <class T>
T get_as(const json& doc, const char* name) {
  try {
    return field(doc, name).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model file: malformed field '") + name +
                      "': " + e.what());
  }
}

}  // namespace

std::string format_model(const FittedModel& model) {
  model.validate();
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["grid"] = std::vector<double>(model.grid.times().begin(),
                                    model.grid.times().end());
  doc["K"] = model.groups();
  doc["degree"] = model.degree;
  doc["mixing_proportions"] = model.mixing_proportions;
  doc["coefficients"] = model.coefficients;
  doc["sigma"] = model.sigma;
  doc["log_likelihood"] = model.log_likelihood;
  doc["n_individuals"] = model.n_individuals;
  doc["converged"] = model.converged;
  doc["iterations"] = model.iterations;
  doc["seed"] = model.seed;
  // Fitting runs on untransformed weeks and scores.
  doc["time_scale"] = "raw";
  doc["score_scale"] = "raw";
  return doc.dump(2) + "\n";
}

FittedModel parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model file: expected an object");
  const int version = get_as<int>(doc, "schema_version");
  if (version != kModelSchemaVersion) {
    throw SchemaError("model file: schema_version " + std::to_string(version) +
                      " not supported (expected " +
                      std::to_string(kModelSchemaVersion) + ")");
  }

  FittedModel model;
  try {
    model.grid = TimeGrid(get_as<std::vector<double>>(doc, "grid"));
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("model file: bad grid: ") + e.what());
  }
  const auto groups = get_as<std::size_t>(doc, "K");
  model.degree = get_as<int>(doc, "degree");
  model.mixing_proportions =
      get_as<std::vector<double>>(doc, "mixing_proportions");
  model.coefficients =
      get_as<std::vector<std::vector<double>>>(doc, "coefficients");
  model.sigma = get_as<double>(doc, "sigma");
  model.log_likelihood = get_as<double>(doc, "log_likelihood");
  model.n_individuals = get_as<std::size_t>(doc, "n_individuals");
  model.converged = get_as<bool>(doc, "converged");
  model.iterations = get_as<int>(doc, "iterations");
  model.seed = get_as<std::uint64_t>(doc, "seed");
  if (groups != model.mixing_proportions.size()) {
    throw SchemaError("model file: K does not match mixing_proportions");
  }
  model.validate();
  return model;
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
  atomic_write(path, format_model(model));
}

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

}  // namespace trajarea
