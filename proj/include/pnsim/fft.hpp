/*
 * Copyright 2026 The pnsim Authors
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

#pragma once

#include <span>

#include "pnsim/common.hpp"

namespace pnsim {

enum class fft_direction { forward, inverse };

/// Unitary DFT of arbitrary length (scale 1/sqrt(n) in both directions).
/// `in` and `out` must have equal size; they may alias.
/// Thread-safe: plans are created once per (size, direction) under a lock and
/// executed through FFTW's new-array interface.
void unitary_dft(std::span<const cf64> in, std::span<cf64> out, fft_direction dir);

/// Same, but without the 1/sqrt(n) scale (raw FFTW convention).
void raw_dft(std::span<const cf64> in, std::span<cf64> out, fft_direction dir);

}  // namespace pnsim
