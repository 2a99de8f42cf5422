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

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pnsim/grid.hpp"
#include "pnsim/waveform.hpp"

namespace pnsim {

enum class cpe_source : std::uint8_t { measured, interpolated };

/// Per-symbol common phase error.
struct cpe_estimate {
    std::vector<double> per_symbol_phase_rad;
    std::vector<cpe_source> source;
    std::vector<int> n_pilots_used;

    [[nodiscard]] std::size_t n_symbols() const { return per_symbol_phase_rad.size(); }
};

/// Coherent pilot combining: for each symbol carrying PT-RS,
/// phase = arg(sum rx * conj(pilot * 10^(boost/20))). Symbols without PT-RS
/// are filled by interpolate_cpe.
///
/// `plane` is an (n_subcarriers x n_symbols) symbol-major value plane, the
/// layout ofdm_demodulate and decode_plane produce.
cpe_estimate estimate_cpe(std::span<const cf64> plane, int n_symbols, const re_set& ptrs_positions,
                          cf64 pilot_value, double boost_db);

/// Linear interpolation of the unwrapped measured phases; symbols before the
/// first or after the last measurement hold the nearest measured value.
cpe_estimate interpolate_cpe(cpe_estimate est);

/// Multiplies every RE of symbol s by exp(-j phase[s]).
cvec compensate(std::span<const cf64> plane, const cpe_estimate& est);

/// (1/N) sum exp(j theta[n]) over the CP-free body of each symbol.
cvec reference_cpe(std::span<const double> theta_rad, const ofdm_params& params, int n_symbols);

/// RMS of the wrapped difference between estimated and reference phases.
double cpe_rmse(const cpe_estimate& est, std::span<const cf64> reference);

// ---------------------------------------------------------------------------

/// -inf marks a zero error vector; CSV output writes it as the literal "-inf".
inline constexpr double kEvmDbFloor = -std::numeric_limits<double>::infinity();

struct evm_report {
    double evm_percent = 0.0;
    double evm_db = kEvmDbFloor;
    double p_error = 0.0;
    double p_reference = 0.0;
    int modulation = 0;
    bool passes_requirement = false;
};

/// Required EVM in percent for a constellation order.
double evm_requirement_percent(int order);

/// EVM (dB) = 10 log10(P_error / P_reference), percent = 100 sqrt(ratio).
evm_report evm(std::span<const cf64> rx, std::span<const cf64> ref, int modulation);

/// Report from a given power ratio (used for the boundary arithmetic).
evm_report evm_from_powers(double p_error, double p_reference, int modulation);

/// Fraction of `bits_per_symbol`-bit groups with at least one bit error.
double symbol_error_rate(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits,
                         int bits_per_symbol);

}  // namespace pnsim
