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

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnsim {

using cf64 = std::complex<double>;
using cvec = std::vector<cf64>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error taxonomy. Every error raised by the library derives from pnsim::error
// so callers (the CLI in particular) can map any failure to a nonzero exit.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct domain_error : error {
    using error::error;
};

/// Inconsistent or unrepresentable configuration.
struct config_error : error {
    using error::error;
};

/// Receiver could not form an estimate (e.g. no pilots).
struct estimation_error : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// Seeding

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for Monte-Carlo drop `index` under `base_seed`.
constexpr std::uint64_t drop_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return base_seed ^ splitmix64(index);
}

/// Fixed substream labels. Streams inside one drop never share a generator.
enum class stream : std::uint64_t {
    data_bits = 1,
    phase_noise = 2,
    awgn = 3,
    interferer_bits = 4,
    interferer_phase_noise = 5,
    interferer_channel = 6,
    trp_base = 0x100,  // TRP t uses trp_base + t
};

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t label) noexcept {
    return splitmix64(seed ^ splitmix64(label * 0xd1b54a32d192ed03ULL));
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, stream label) noexcept {
    return substream_seed(seed, static_cast<std::uint64_t>(label));
}

using rng_engine = std::mt19937_64;

}  // namespace pnsim
