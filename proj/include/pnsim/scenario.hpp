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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pnsim/phase_noise.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/waveform.hpp"

namespace pnsim {

inline constexpr int kScenarioSchema = 1;

enum class waveform_kind { cp_ofdm, dft_s_ofdm };
enum class experiment_kind { single_run, density_sweep, freq_density_sweep, interference, papr, multi_trp };

const char* to_string(waveform_kind w);
const char* to_string(experiment_kind e);

struct density_sweep_params {
    std::vector<int> time_densities{1, 2, 4};
    std::vector<int> modulations;  ///< empty: the scenario's modulation
};

struct freq_density_sweep_params {
    std::vector<int> freq_densities{1, 4};
    std::vector<int> n_rb_list{8, 32};
};

struct interference_params {
    int victim_offset = 0;
    int interferer_offset = 1;
    /// Interferer power relative to the victim, dB. -inf disables it.
    double interferer_power_db = 0.0;
    double boost_db = 3.0;
};

struct papr_params {
    /// cp-ofdm, cp-ofdm+ptrs, dft-s-ofdm, dft-s-ofdm+ptrs
    std::vector<std::string> variants{"cp-ofdm", "dft-s-ofdm", "dft-s-ofdm+ptrs"};
    std::vector<double> thresholds_db;  ///< empty: 0..14 dB in 0.1 dB steps
    int oversample = 1;
    int min_symbols = 100000;
};

struct multi_trp_params {
    int n_trp = 2;
    std::vector<int> offsets{0, 1};
};

/// Everything a run needs. Defaults: 120 kHz SCS, FFT 1024, CP N/8,
/// 14 symbols, 32 RB, 64QAM, Set-A at 30 GHz, PT-RS L=1 d_f=1.
struct scenario {
    std::string name = "scenario";
    experiment_kind experiment = experiment_kind::single_run;
    waveform_kind waveform = waveform_kind::cp_ofdm;

    int n_rb = 32;
    int n_symbols = 14;
    int modulation = 64;
    int fft_size = 1024;
    int cp_len = -1;  ///< -1: fft_size / 8
    double subcarrier_spacing_hz = 120e3;

    ptrs_config ptrs;
    chunk_config chunks;

    /// "set-a", "set-b", "custom" or "none" (no phase noise).
    std::string phase_noise_name = "set-a";
    pole_zero_psd_model phase_noise = pole_zero_psd_model::set_a(30e9);

    /// Per-RE SNR (Es/N0 on the resource grid), dB; +inf for no noise.
    std::vector<double> snr_db{kSnrInfinite};
    int n_drops = 100;
    std::uint64_t base_seed = 1;

    density_sweep_params density_sweep;
    freq_density_sweep_params freq_density_sweep;
    interference_params interference;
    papr_params papr;
    multi_trp_params multi_trp;

    [[nodiscard]] bool has_phase_noise() const { return phase_noise_name != "none"; }
    [[nodiscard]] ofdm_params ofdm_for(int rb) const;
    [[nodiscard]] ofdm_params ofdm() const { return ofdm_for(n_rb); }

    /// Throws config_error on the first violated invariant.
    void validate() const;
};

scenario parse_scenario(std::string_view text);
scenario load_scenario(const std::filesystem::path& path);

/// "key = value" lines describing the resolved scenario, for CSV headers.
std::vector<std::string> describe(const scenario& sc);

}  // namespace pnsim
