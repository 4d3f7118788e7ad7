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

#ifndef TRAJAREA_MODEL_IO_HPP
#define TRAJAREA_MODEL_IO_HPP

#include <filesystem>
#include <string>

#include "trajarea/gbtm.hpp"

namespace trajarea {

inline constexpr int kModelSchemaVersion = 1;

/// JSON document. Reals are written in shortest round-trip decimal form,
/// so load_model(save_model(m)) is bit-identical.
std::string format_model(const FittedModel& model);
FittedModel parse_model(const std::string& json_text);

void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

}  // namespace trajarea

#endif  // TRAJAREA_MODEL_IO_HPP
