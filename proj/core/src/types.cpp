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

#include "trajarea/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>

#include "trajarea/error.hpp"

namespace trajarea {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) {
    throw InvalidArgument("time grid needs at least two points");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) {
      throw InvalidArgument("time grid contains a non-finite time");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw InvalidArgument("time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop > start)) {
    throw InvalidArgument("uniform grid needs stop > start and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::llround((stop - start) / step));
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    times[i] = start + step * static_cast<double>(i);
  }
  return TimeGrid(std::move(times));
}

LongitudinalDataset::LongitudinalDataset(TimeGrid grid,
                                         std::vector<Individual> individuals,
                                         ScoreBounds bounds)
    : grid_(std::move(grid)),
      individuals_(std::move(individuals)),
      bounds_(bounds) {
  if (!(bounds_.upper >= bounds_.lower)) {
    throw InvalidArgument("score bounds must satisfy lower <= upper");
  }
  index_.reserve(individuals_.size());
  for (std::size_t i = 0; i < individuals_.size(); ++i) {
    const Individual& person = individuals_[i];
    if (person.scores.size() != grid_.size()) {
      throw IncompletePanelError(person.id);
    }
    for (double y : person.scores) {
      if (!std::isfinite(y)) {
        throw ParseError("non-finite score for id " + person.id);
      }
      if (!bounds_.contains(y)) {
        throw RangeError("score " + std::to_string(y) + " for id " +
                         person.id + " outside [" +
                         std::to_string(bounds_.lower) + ", " +
                         std::to_string(bounds_.upper) + "]");
      }
    }
    if (!index_.emplace(person.id, i).second) {
      throw InvalidArgument("duplicate id: " + person.id);
    }
  }
}

std::optional<std::size_t> LongitudinalDataset::index_of(
    const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const LongitudinalDataset& a, const LongitudinalDataset& b) {
  if (!(a.grid_ == b.grid_) || !(a.bounds_ == b.bounds_) ||
      a.individuals_.size() != b.individuals_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.individuals_.size(); ++i) {
    if (a.individuals_[i].id != b.individuals_[i].id ||
        a.individuals_[i].scores != b.individuals_[i].scores) {
      return false;
    }
  }
  return true;
}

IndividualTrajectory::IndividualTrajectory(const TimeGrid& grid,
                                           std::span<const double> scores)
    : times_(grid.times()), scores_(scores) {
  if (scores_.size() != times_.size()) {
    throw InvalidArgument("trajectory needs one score per grid time");
  }
}

double IndividualTrajectory::on_interval(std::size_t interval,
                                         double t) const {
  const double t0 = times_[interval];
  const double t1 = times_[interval + 1];
  const double y0 = scores_[interval];
  const double y1 = scores_[interval + 1];
  if (t == t1) return y1;
  return y0 + (y1 - y0) * ((t - t0) / (t1 - t0));
}

double IndividualTrajectory::operator()(double t) const {
  if (t <= times_.front()) return scores_.front();
  if (t >= times_.back()) return scores_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto interval = static_cast<std::size_t>(it - times_.begin()) - 1;
  return on_interval(interval, t);
}

namespace {

std::optional<std::int64_t> as_integer(const std::string& s) {
  std::int64_t value = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

bool id_less(const std::string& a, const std::string& b) {
  const auto ia = as_integer(a);
  const auto ib = as_integer(b);
  if (ia && ib) {
    if (*ia != *ib) return *ia < *ib;
    return a < b;  // "7" vs "07"
  }
  if (ia.has_value() != ib.has_value()) return ia.has_value();
  return a < b;
}

}  // namespace trajarea
