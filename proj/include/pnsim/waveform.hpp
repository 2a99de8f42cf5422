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

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "pnsim/grid.hpp"
#include "pnsim/phase_noise.hpp"

namespace pnsim {

struct ofdm_params {
    int fft_size = 1024;  ///< N, power of two
    int cp_len = 128;     ///< samples
    int n_used = 384;     ///< occupied subcarriers, n_rb * 12
    double subcarrier_spacing_hz = 120e3;

    /// Defaults for an allocation: N=1024, CP=N/8, 120 kHz.
    static ofdm_params for_allocation(int n_rb, int fft_size = 1024, double scs_hz = 120e3);

    void validate() const;
    [[nodiscard]] double sample_rate_hz() const { return fft_size * subcarrier_spacing_hz; }
    [[nodiscard]] int symbol_len() const { return fft_size + cp_len; }
};

struct time_signal {
    cvec samples;
    double sample_rate_hz = 0.0;
};

/// FFT bin of occupied subcarrier `index`: the allocation is centered on DC
/// and skips the DC bin. Lower half maps to negative frequencies.
int subcarrier_bin(int index, int n_used, int fft_size);

/// Per symbol: occupied subcarriers into their bins, unitary IDFT, cyclic
/// prefix prepended. Symbols are concatenated.
time_signal ofdm_modulate(const resource_grid& grid, const ofdm_params& params);

/// Inverse of ofdm_modulate: strips the CP, unitary DFT, picks the occupied
/// bins. Returns an (n_used x n_symbols) symbol-major value plane.
cvec ofdm_demodulate(const time_signal& sig, const ofdm_params& params, int n_symbols);

/// Unitary m-point forward DFT of a pre-DFT sample vector.
cvec transform_precode(std::span<const cf64> samples, int m);
/// Unitary m-point inverse DFT (receiver side de-precoding).
cvec transform_decode(std::span<const cf64> bins, int m);

/// Applies transform_precode to every symbol column; labels are kept.
resource_grid precode_grid(const resource_grid& pre_dft);
/// Applies transform_decode to every symbol column of a value plane.
cvec decode_plane(std::span<const cf64> plane, int m, int n_symbols);

/// out[n] = sig[n] * exp(j theta[n]).
time_signal apply_phase_noise(const time_signal& sig, const phase_noise_process& pn);
time_signal apply_phase_noise(const time_signal& sig, std::span<const double> theta_rad);

/// Sentinel for "no noise".
inline constexpr double kSnrInfinite = std::numeric_limits<double>::infinity();

/// Circularly-symmetric complex Gaussian noise with variance
/// mean_power(sig) / 10^(snr_db/10). snr_db = +inf returns the input.
time_signal apply_awgn(const time_signal& sig, double snr_db, std::uint64_t seed);

/// Adds noise of a given total variance per complex sample.
time_signal add_noise(const time_signal& sig, double noise_variance, std::uint64_t seed);

double mean_power(std::span<const cf64> samples);

/// Peak / mean instantaneous power of one symbol, in dB.
double papr_db(std::span<const cf64> samples);

/// CP-free time-domain bodies of every symbol of `grid`, synthesized with an
/// `oversample`-times larger IDFT (zero padding outside the allocation).
std::vector<time_signal> symbol_bodies(const resource_grid& grid, const ofdm_params& params,
                                       int oversample = 1);

struct ccdf_point {
    double threshold_db;
    double probability;
};

/// Fraction of symbols whose PAPR exceeds each threshold. Each entry of
/// `symbols` is one OFDM symbol.
std::vector<ccdf_point> papr_ccdf(std::span<const time_signal> symbols,
                                  std::span<const double> thresholds_db);
std::vector<ccdf_point> ccdf_from_values(std::span<const double> papr_values_db,
                                         std::span<const double> thresholds_db);

/// Empirical PAPR level exceeded with probability `probability`
/// (e.g. 1e-3 for the 99.9% point).
double papr_at_ccdf(std::vector<double> papr_values_db, double probability);

/// threshold_db,ccdf
void write_ccdf_csv(std::ostream& os, std::span<const ccdf_point> ccdf);
/// sample,real,imag
void write_signal_csv(std::ostream& os, const time_signal& sig);
/// Interleaved little-endian float32 (I, Q) pairs.
void write_signal_binary(std::ostream& os, const time_signal& sig);

}  // namespace pnsim
