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

#ifndef TRAJAREA_RNG_HPP
#define TRAJAREA_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace trajarea {

/// Generator used for every random draw in the library.
using Engine = std::mt19937_64;

/// Identifier recorded in output metadata next to the seed.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64/seed_seq(seed,stream)";

/// Independent engine for substream `stream` of `seed`. Used per simulated
/// individual and per EM start so serial and parallel runs agree.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace trajarea

#endif  // TRAJAREA_RNG_HPP
