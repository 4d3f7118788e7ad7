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

#ifndef TRAJAREA_DATASET_IO_HPP
#define TRAJAREA_DATASET_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "trajarea/types.hpp"

namespace trajarea {

/// Reads a long-format `id,time,score` CSV. The grid is the sorted set of
/// distinct times; every id must have exactly one row per grid time.
/// Individuals are ordered by id_less, so row order never matters.
LongitudinalDataset load_dataset(const std::filesystem::path& path,
                                 std::optional<ScoreBounds> bounds = {});
LongitudinalDataset parse_dataset(std::istream& in,
                                  std::optional<ScoreBounds> bounds = {});

/// Emits one row per (id, time), ids in dataset order, times ascending.
std::string format_dataset(const LongitudinalDataset& data);
void save_dataset(const LongitudinalDataset& data,
                  const std::filesystem::path& path);

}  // namespace trajarea

#endif  // TRAJAREA_DATASET_IO_HPP
