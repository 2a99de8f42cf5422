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
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "pnsim/common.hpp"

namespace pnsim {

/// Multi-pole/zero oscillator phase-noise spectrum
///
///   S(f) = PSD0 * prod_n (1 + (f/fz_n)^2) / (1 + (f/fp_n)^2)
///
/// measured at `base_carrier_hz` and translated to `carrier_hz` by
/// 20*log10(carrier / base). Frequencies are in Hz, PSD0 in dBc/Hz.
struct pole_zero_psd_model {
    double psd0_dbc_hz = 0.0;
    std::vector<double> zeros_hz;
    std::vector<double> poles_hz;
    double base_carrier_hz = 0.0;
    double carrier_hz = 0.0;

    /// Throws config_error when the invariants do not hold.
    void validate() const;

    /// Oscillator measured at 30 GHz.
    static pole_zero_psd_model set_a(double carrier_hz = 30e9);
    /// Oscillator measured at 60 GHz.
    static pole_zero_psd_model set_b(double carrier_hz = 60e9);
    /// "set-a" or "set-b"; anything else is a config_error.
    static pole_zero_psd_model named(std::string_view name, double carrier_hz);
};

/// 20*log10(carrier_hz / base_carrier_hz).
double carrier_shift_db(const pole_zero_psd_model& model);

/// Model PSD in dBc/Hz at offset frequency `f_hz` (>= 0).
double psd_at(const pole_zero_psd_model& model, double f_hz);

/// Per-section dB terms of psd_at: element 0 is PSD0 plus the carrier shift,
/// element n is 10*log10((1+(f/fz_n)^2)/(1+(f/fp_n)^2)). Their sum is psd_at.
std::vector<double> psd_terms_db(const pole_zero_psd_model& model, double f_hz);

/// y[n] = b0*x[n] + b1*x[n-1] - a1*y[n-1]
struct first_order_section {
    double b0 = 1.0;
    double b1 = 0.0;
    double a1 = 0.0;
};

/// Discrete shaping filter: gain followed by a cascade of first-order sections.
struct filter_spec {
    std::vector<first_order_section> sections;
    double gain = 1.0;
    double sample_rate_hz = 0.0;

    /// 20*log10 |H(e^{j 2 pi f / fs})| of the section cascade (gain excluded).
    [[nodiscard]] double magnitude_db(double f_hz) const;

    /// Two-sided output density (dBc/Hz) at `f_hz` when driven by
    /// unit-variance white noise: 10*log10(gain^2 / fs) + magnitude_db(f).
    [[nodiscard]] double output_psd_dbc_hz(double f_hz) const;
};

/// Bilinear transform (no pre-warping) of the analog sections
/// (1 + s/(2 pi fz_n)) / (1 + s/(2 pi fp_n)), each normalized to unit DC gain,
/// with gain sqrt(PSD0_linear * fs) where PSD0 includes the carrier shift.
filter_spec design_shaping_filter(const pole_zero_psd_model& model, double sample_rate_hz);

/// Number of leading samples discarded before the first returned sample:
/// 8 * fs / min(pole), capped at 2^20.
std::size_t warmup_samples(const pole_zero_psd_model& model, double sample_rate_hz);

/// Synthesized discrete-time phase trajectory theta[n] in radians.
struct phase_noise_process {
    std::vector<double> samples_rad;
    double sample_rate_hz = 0.0;
    pole_zero_psd_model model;
    std::uint64_t seed = 0;
};

/// Shapes seeded unit-variance white Gaussian noise through the designed
/// filter. Deterministic in (model, rate, count, seed).
phase_noise_process generate(const pole_zero_psd_model& model, double sample_rate_hz,
                             std::size_t count, std::uint64_t seed);

struct psd_point {
    double frequency_hz;
    double psd_dbc_hz;
};

/// Averaged, Hann-windowed periodogram (Welch). Bins run from fs/segment_len
/// up to fs/2. The density is per Hz per sideband, the same convention as
/// psd_at and the generator gain, so the two are directly comparable.
std::vector<psd_point> estimate_psd(std::span<const double> samples, double sample_rate_hz,
                                    std::size_t segment_len, double overlap_frac);

std::vector<psd_point> estimate_psd(const phase_noise_process& process,
                                    std::size_t segment_len, double overlap_frac);

/// Number of segments estimate_psd averages for the given arguments.
std::size_t welch_segment_count(std::size_t n_samples, std::size_t segment_len,
                                double overlap_frac);

/// Two-column CSV: frequency_hz,psd_dbc_hz.
void write_psd_csv(std::ostream& os, std::span<const psd_point> points);

}  // namespace pnsim
