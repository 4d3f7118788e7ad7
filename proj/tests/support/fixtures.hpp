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

#ifndef TRAJAREA_TESTS_FIXTURES_HPP
#define TRAJAREA_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "trajarea/gbtm.hpp"
#include "trajarea/simulate.hpp"

namespace fixtures {

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("trajarea_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

/// Two constant groups (means 2 and 18) with Gaussian noise.
inline trajarea::ScenarioSpec two_constant_groups(std::size_t n, double sd,
                                                  std::uint64_t seed) {
  trajarea::ScenarioSpec spec;
  spec.grid = trajarea::TimeGrid::uniform(0.0, 16.0, 2.0);
  spec.n_individuals = n;
  spec.seed = seed;
  spec.groups = {{"low", 0.5, trajarea::Polynomial{{2.0}}, sd},
                 {"high", 0.5, trajarea::Polynomial{{18.0}}, sd}};
  return spec;
}

/// Random polynomial of degree <= 3 with moderate coefficients on [0, 16].
inline trajarea::Polynomial random_polynomial(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> degree(0, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  trajarea::Polynomial p;
  const int d = degree(rng);
  const double scale[] = {10.0, 1.0, 0.06, 0.004};
  for (int j = 0; j <= d; ++j) p.coefficients.push_back(scale[j] * u(rng));
  return p;
}

}  // namespace fixtures

#endif  // TRAJAREA_TESTS_FIXTURES_HPP
