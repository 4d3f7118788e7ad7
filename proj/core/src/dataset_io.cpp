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

#include "trajarea/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "trajarea/error.hpp"
#include "trajarea/report.hpp"

namespace trajarea {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, std::size_t line) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError("line " + std::to_string(line) + ": cannot parse '" +
                     std::string(text) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line) + ": non-finite value '" +
                     std::string(text) + "'");
  }
  return value;
}

}  // namespace

LongitudinalDataset parse_dataset(std::istream& in,
                                  std::optional<ScoreBounds> bounds) {
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  // id -> (time -> score)
  std::map<std::string, std::map<double, double>> cells;
  std::vector<double> all_times;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row(line);
    if (line_no == 1 && row.starts_with("\xEF\xBB\xBF")) row.remove_prefix(3);
    if (trim(row).empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = row.find(',', start);
      fields.push_back(trim(row.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!saw_header) {
      if (fields.size() != 3 || fields[0] != "id" || fields[1] != "time" ||
          fields[2] != "score") {
        throw ParseError("expected header 'id,time,score'");
      }
      saw_header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 3 fields, found " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty id");
    }
    const double t = parse_real(fields[1], line_no);
    const double y = parse_real(fields[2], line_no);
    auto& series = cells[std::string(fields[0])];
    if (!series.emplace(t, y).second) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": duplicate observation for id " +
                       std::string(fields[0]));
    }
    all_times.push_back(t);
  }
  if (!saw_header) throw ParseError("empty dataset file");
  if (cells.empty()) throw ParseError("dataset has no rows");

  std::sort(all_times.begin(), all_times.end());
  all_times.erase(std::unique(all_times.begin(), all_times.end()),
                  all_times.end());
  if (all_times.size() < 2) {
    throw ParseError("dataset needs at least two distinct times");
  }
  TimeGrid grid(all_times);

  std::vector<std::string> ids;
  ids.reserve(cells.size());
  for (const auto& [id, series] : cells) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), id_less);

  std::vector<Individual> individuals;
  individuals.reserve(ids.size());
  for (const auto& id : ids) {
    const auto& series = cells.at(id);
    if (series.size() != grid.size()) throw IncompletePanelError(id);
    Individual person{id, {}};
    person.scores.reserve(series.size());
    for (const auto& [t, y] : series) person.scores.push_back(y);
    individuals.push_back(std::move(person));
  }
  return LongitudinalDataset(std::move(grid), std::move(individuals),
                             bounds.value_or(ScoreBounds{}));
}

LongitudinalDataset load_dataset(const std::filesystem::path& path,
                                 std::optional<ScoreBounds> bounds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_dataset(in, bounds);
}

std::string format_dataset(const LongitudinalDataset& data) {
  std::ostringstream out;
  out << "id,time,score\n";
  for (const auto& person : data.individuals()) {
    for (std::size_t t = 0; t < data.grid().size(); ++t) {
      out << person.id << ',' << format_real(data.grid()[t]) << ','
          << format_real(person.scores[t]) << '\n';
    }
  }
  return out.str();
}

void save_dataset(const LongitudinalDataset& data,
                  const std::filesystem::path& path) {
  atomic_write(path, format_dataset(data));
}

}  // namespace trajarea
