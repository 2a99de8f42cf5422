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

#include "pnsim/waveform.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <ostream>

#include "pnsim/fft.hpp"

namespace pnsim {

ofdm_params ofdm_params::for_allocation(int n_rb, int fft_size, double scs_hz) {
    ofdm_params p{.fft_size = fft_size,
                  .cp_len = fft_size / 8,
                  .n_used = n_rb * kSubcarriersPerRb,
                  .subcarrier_spacing_hz = scs_hz};
    p.validate();
    return p;
}

void ofdm_params::validate() const {
    if (fft_size < 2 || !std::has_single_bit(static_cast<unsigned>(fft_size))) {
        throw config_error(fmt::format("ofdm: FFT size {} is not a power of two", fft_size));
    }
    if (cp_len < 0 || cp_len > fft_size) {
        throw config_error(fmt::format("ofdm: CP length {} outside [0, {}]", cp_len, fft_size));
    }
    // the DC bin stays empty, so at most N-1 subcarriers fit
    if (n_used < 1 || n_used > fft_size - 1) {
        throw config_error(fmt::format("ofdm: {} occupied subcarriers do not fit an FFT of {} with DC unused",
                                       n_used, fft_size));
    }
    if (!(subcarrier_spacing_hz > 0.0) || !std::isfinite(subcarrier_spacing_hz)) {
        throw config_error("ofdm: subcarrier spacing must be positive");
    }
}

int subcarrier_bin(int index, int n_used, int fft_size) {
    const int n_low = n_used / 2;
    const int k = index < n_low ? index - n_low : index - n_low + 1;
    return (k + fft_size) % fft_size;
}

namespace {

void check_grid(const resource_grid& grid, const ofdm_params& params) {
    params.validate();
    if (grid.n_subcarriers() != params.n_used) {
        throw config_error(fmt::format("ofdm: grid has {} subcarriers but parameters say {}",
                                       grid.n_subcarriers(), params.n_used));
    }
}

std::vector<int> bin_map(int n_used, int fft_size) {
    std::vector<int> bins(n_used);
    for (int i = 0; i < n_used; ++i) {
        bins[i] = subcarrier_bin(i, n_used, fft_size);
    }
    return bins;
}

}  // namespace

time_signal ofdm_modulate(const resource_grid& grid, const ofdm_params& params) {
    check_grid(grid, params);
    const int n = params.fft_size;
    const int cp = params.cp_len;
    const auto bins = bin_map(params.n_used, n);

    time_signal out{.samples = cvec(static_cast<std::size_t>(grid.n_symbols()) * params.symbol_len()),
                    .sample_rate_hz = params.sample_rate_hz()};
    cvec freq(n);
    cvec body(n);
    for (int l = 0; l < grid.n_symbols(); ++l) {
        std::fill(freq.begin(), freq.end(), cf64{});
        const auto col = grid.symbol(l);
        for (int i = 0; i < params.n_used; ++i) {
            freq[bins[i]] = col[i];
        }
        unitary_dft(freq, body, fft_direction::inverse);
        auto dst = out.samples.begin() + static_cast<std::ptrdiff_t>(l) * params.symbol_len();
        dst = std::copy(body.end() - cp, body.end(), dst);
        std::copy(body.begin(), body.end(), dst);
    }
    return out;
}

cvec ofdm_demodulate(const time_signal& sig, const ofdm_params& params, int n_symbols) {
    params.validate();
    const auto expected = static_cast<std::size_t>(n_symbols) * params.symbol_len();
    if (n_symbols < 1 || sig.samples.size() != expected) {
        throw domain_error(fmt::format("ofdm_demodulate: {} samples, expected {} for {} symbols",
                                       sig.samples.size(), expected, n_symbols));
    }
    const int n = params.fft_size;
    const auto bins = bin_map(params.n_used, n);
    cvec out(static_cast<std::size_t>(params.n_used) * n_symbols);
    cvec freq(n);
    for (int l = 0; l < n_symbols; ++l) {
        const auto body = std::span<const cf64>(sig.samples)
                              .subspan(static_cast<std::size_t>(l) * params.symbol_len() + params.cp_len, n);
        unitary_dft(body, freq, fft_direction::forward);
        for (int i = 0; i < params.n_used; ++i) {
            out[static_cast<std::size_t>(l) * params.n_used + i] = freq[bins[i]];
        }
    }
    return out;
}

cvec transform_precode(std::span<const cf64> samples, int m) {
    if (m < 1 || samples.size() != static_cast<std::size_t>(m)) {
        throw domain_error(fmt::format("transform_precode: {} samples for DFT size {}", samples.size(), m));
    }
    cvec out(samples.size());
    unitary_dft(samples, out, fft_direction::forward);
    return out;
}

cvec transform_decode(std::span<const cf64> bins, int m) {
    if (m < 1 || bins.size() != static_cast<std::size_t>(m)) {
        throw domain_error(fmt::format("transform_decode: {} bins for DFT size {}", bins.size(), m));
    }
    cvec out(bins.size());
    unitary_dft(bins, out, fft_direction::inverse);
    return out;
}

resource_grid precode_grid(const resource_grid& pre_dft) {
    resource_grid out = pre_dft;
    const int m = pre_dft.n_subcarriers();
    for (int l = 0; l < pre_dft.n_symbols(); ++l) {
        const cvec freq = transform_precode(pre_dft.symbol(l), m);
        std::copy(freq.begin(), freq.end(), out.symbol(l).begin());
    }
    return out;
}

cvec decode_plane(std::span<const cf64> plane, int m, int n_symbols) {
    if (plane.size() != static_cast<std::size_t>(m) * n_symbols) {
        throw domain_error("decode_plane: plane size does not match m x n_symbols");
    }
    cvec out(plane.size());
    for (int l = 0; l < n_symbols; ++l) {
        const auto col = plane.subspan(static_cast<std::size_t>(l) * m, m);
        const cvec samples = transform_decode(col, m);
        std::copy(samples.begin(), samples.end(), out.begin() + static_cast<std::ptrdiff_t>(l) * m);
    }
    return out;
}

time_signal apply_phase_noise(const time_signal& sig, std::span<const double> theta_rad) {
    if (theta_rad.size() < sig.samples.size()) {
        throw domain_error(fmt::format("apply_phase_noise: {} phase samples for {} signal samples",
                                       theta_rad.size(), sig.samples.size()));
    }
    time_signal out{.samples = cvec(sig.samples.size()), .sample_rate_hz = sig.sample_rate_hz};
    for (std::size_t n = 0; n < sig.samples.size(); ++n) {
        out.samples[n] = sig.samples[n] * std::polar(1.0, theta_rad[n]);
    }
    return out;
}

time_signal apply_phase_noise(const time_signal& sig, const phase_noise_process& pn) {
    if (pn.sample_rate_hz != sig.sample_rate_hz) {
        throw domain_error(fmt::format("apply_phase_noise: phase noise at {} Hz, signal at {} Hz",
                                       pn.sample_rate_hz, sig.sample_rate_hz));
    }
    return apply_phase_noise(sig, pn.samples_rad);
}

double mean_power(std::span<const cf64> samples) {
    if (samples.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (const auto& v : samples) {
        acc += std::norm(v);
    }
    return acc / static_cast<double>(samples.size());
}

time_signal add_noise(const time_signal& sig, double noise_variance, std::uint64_t seed) {
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
        throw domain_error("add_noise: variance must be finite and non-negative");
    }
    time_signal out = sig;
    if (noise_variance == 0.0) {
        return out;
    }
    rng_engine rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_variance / 2.0));
    for (auto& v : out.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v += cf64(re, im);
    }
    return out;
}

time_signal apply_awgn(const time_signal& sig, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) {
        return sig;
    }
    if (!std::isfinite(snr_db)) {
        throw domain_error("apply_awgn: SNR must be finite or +inf");
    }
    return add_noise(sig, mean_power(sig.samples) / std::pow(10.0, snr_db / 10.0), seed);
}

double papr_db(std::span<const cf64> samples) {
    if (samples.empty()) {
        throw domain_error("papr: empty symbol");
    }
    double peak = 0.0;
    double acc = 0.0;
    for (const auto& v : samples) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        acc += p;
    }
    const double mean = acc / static_cast<double>(samples.size());
    if (mean == 0.0) {
        throw domain_error("papr: all-zero symbol");
    }
    return 10.0 * std::log10(peak / mean);
}

std::vector<time_signal> symbol_bodies(const resource_grid& grid, const ofdm_params& params,
                                       int oversample) {
    check_grid(grid, params);
    if (oversample < 1) {
        throw config_error("symbol_bodies: oversampling factor must be >= 1");
    }
    const int n = params.fft_size * oversample;
    const auto bins = bin_map(params.n_used, n);
    const double scale = std::sqrt(static_cast<double>(n) / params.fft_size);
    std::vector<time_signal> out;
    out.reserve(grid.n_symbols());
    cvec freq(n);
    for (int l = 0; l < grid.n_symbols(); ++l) {
        std::fill(freq.begin(), freq.end(), cf64{});
        const auto col = grid.symbol(l);
        for (int i = 0; i < params.n_used; ++i) {
            freq[bins[i]] = col[i];
        }
        time_signal body{.samples = cvec(n), .sample_rate_hz = params.sample_rate_hz() * oversample};
        unitary_dft(freq, body.samples, fft_direction::inverse);
        for (auto& v : body.samples) {
            v *= scale;
        }
        out.push_back(std::move(body));
    }
    return out;
}

std::vector<ccdf_point> ccdf_from_values(std::span<const double> papr_values_db,
                                         std::span<const double> thresholds_db) {
    if (papr_values_db.empty()) {
        throw domain_error("papr_ccdf: no symbols");
    }
    std::vector<double> sorted(papr_values_db.begin(), papr_values_db.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<ccdf_point> out;
    out.reserve(thresholds_db.size());
    for (double t : thresholds_db) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        out.push_back({t, static_cast<double>(above) / static_cast<double>(sorted.size())});
    }
    return out;
}

std::vector<ccdf_point> papr_ccdf(std::span<const time_signal> symbols,
                                  std::span<const double> thresholds_db) {
    if (symbols.empty()) {
        throw domain_error("papr_ccdf: no symbols");
    }
    std::vector<double> values;
    values.reserve(symbols.size());
    for (const auto& s : symbols) {
        values.push_back(papr_db(s.samples));
    }
    return ccdf_from_values(values, thresholds_db);
}

double papr_at_ccdf(std::vector<double> papr_values_db, double probability) {
    if (papr_values_db.empty() || !(probability > 0.0 && probability < 1.0)) {
        throw domain_error("papr_at_ccdf: need values and a probability in (0, 1)");
    }
    std::sort(papr_values_db.begin(), papr_values_db.end(), std::greater<>());
    const auto idx = static_cast<std::size_t>(std::floor(probability * papr_values_db.size()));
    return papr_values_db[std::min(idx, papr_values_db.size() - 1)];
}

void write_ccdf_csv(std::ostream& os, std::span<const ccdf_point> ccdf) {
    os << "threshold_db,ccdf\n";
    for (const auto& p : ccdf) {
        fmt::print(os, "{},{}\n", p.threshold_db, p.probability);
    }
}

void write_signal_csv(std::ostream& os, const time_signal& sig) {
    os << "sample,real,imag\n";
    for (std::size_t n = 0; n < sig.samples.size(); ++n) {
        fmt::print(os, "{},{},{}\n", n, sig.samples[n].real(), sig.samples[n].imag());
    }
}

void write_signal_binary(std::ostream& os, const time_signal& sig) {
    static_assert(std::endian::native == std::endian::little, "binary export assumes little endian");
    for (const auto& v : sig.samples) {
        const float iq[2] = {static_cast<float>(v.real()), static_cast<float>(v.imag())};
        os.write(reinterpret_cast<const char*>(iq), sizeof(iq));
    }
}

}  // namespace pnsim
