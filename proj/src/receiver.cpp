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

#include "pnsim/receiver.hpp"

#include <fmt/format.h>

#include <cmath>

namespace pnsim {

namespace {

double wrap_pi(double x) { return std::remainder(x, kTwoPi); }

}  // namespace

cpe_estimate estimate_cpe(std::span<const cf64> plane, int n_symbols, const re_set& ptrs_positions,
                          cf64 pilot_value, double boost_db) {
    if (n_symbols < 1 || plane.size() % static_cast<std::size_t>(n_symbols) != 0) {
        throw domain_error("estimate_cpe: plane size is not a multiple of the symbol count");
    }
    const auto n_sc = static_cast<int>(plane.size() / static_cast<std::size_t>(n_symbols));
    const cf64 expected_conj = std::conj(pilot_value * std::pow(10.0, boost_db / 20.0));

    std::vector<cf64> acc(n_symbols);
    cpe_estimate est{.per_symbol_phase_rad = std::vector<double>(n_symbols, 0.0),
                     .source = std::vector<cpe_source>(n_symbols, cpe_source::interpolated),
                     .n_pilots_used = std::vector<int>(n_symbols, 0)};
    for (const auto& re : ptrs_positions) {
        if (re.symbol < 0 || re.symbol >= n_symbols || re.subcarrier < 0 || re.subcarrier >= n_sc) {
            throw domain_error(fmt::format("estimate_cpe: PT-RS RE ({}, {}) outside the {}x{} plane",
                                           re.subcarrier, re.symbol, n_sc, n_symbols));
        }
        acc[re.symbol] += plane[static_cast<std::size_t>(re.symbol) * n_sc + re.subcarrier] * expected_conj;
        ++est.n_pilots_used[re.symbol];
    }
    for (int l = 0; l < n_symbols; ++l) {
        if (est.n_pilots_used[l] == 0) {
            continue;
        }
        if (acc[l] == cf64{}) {
            throw estimation_error(fmt::format("estimate_cpe: no pilot energy in symbol {}", l));
        }
        est.per_symbol_phase_rad[l] = std::arg(acc[l]);
        est.source[l] = cpe_source::measured;
    }
    return interpolate_cpe(std::move(est));
}

cpe_estimate interpolate_cpe(cpe_estimate est) {
    const auto n = static_cast<int>(est.n_symbols());
    if (est.source.size() != est.per_symbol_phase_rad.size() ||
        est.n_pilots_used.size() != est.per_symbol_phase_rad.size()) {
        throw domain_error("interpolate_cpe: inconsistent estimate");
    }
    std::vector<int> measured;
    for (int l = 0; l < n; ++l) {
        if (est.source[l] == cpe_source::measured) {
            measured.push_back(l);
        }
    }
    if (measured.empty()) {
        throw estimation_error("interpolate_cpe: no measured symbol to interpolate from");
    }

    auto& phase = est.per_symbol_phase_rad;
    // unwrap along the measured sequence
    for (std::size_t i = 1; i < measured.size(); ++i) {
        const double prev = phase[measured[i - 1]];
        phase[measured[i]] = prev + wrap_pi(phase[measured[i]] - prev);
    }
    for (int l = 0; l < measured.front(); ++l) {
        phase[l] = phase[measured.front()];
    }
    for (int l = measured.back() + 1; l < n; ++l) {
        phase[l] = phase[measured.back()];
    }
    for (std::size_t i = 1; i < measured.size(); ++i) {
        const int a = measured[i - 1];
        const int b = measured[i];
        for (int l = a + 1; l < b; ++l) {
            const double t = static_cast<double>(l - a) / (b - a);
            phase[l] = phase[a] + t * (phase[b] - phase[a]);
        }
    }
    for (int l = 0; l < n; ++l) {
        if (est.source[l] != cpe_source::measured) {
            est.n_pilots_used[l] = 0;
        }
    }
    return est;
}

cvec compensate(std::span<const cf64> plane, const cpe_estimate& est) {
    const std::size_t n_symbols = est.n_symbols();
    if (n_symbols == 0 || plane.size() % n_symbols != 0) {
        throw domain_error("compensate: plane does not match the estimate's symbol count");
    }
    const std::size_t n_sc = plane.size() / n_symbols;
    cvec out(plane.size());
    for (std::size_t l = 0; l < n_symbols; ++l) {
        const cf64 derotate = std::polar(1.0, -est.per_symbol_phase_rad[l]);
        for (std::size_t k = 0; k < n_sc; ++k) {
            out[l * n_sc + k] = plane[l * n_sc + k] * derotate;
        }
    }
    return out;
}

cvec reference_cpe(std::span<const double> theta_rad, const ofdm_params& params, int n_symbols) {
    const auto needed = static_cast<std::size_t>(n_symbols) * params.symbol_len();
    if (theta_rad.size() < needed) {
        throw domain_error("reference_cpe: phase trajectory shorter than the slot");
    }
    cvec out(n_symbols);
    for (int l = 0; l < n_symbols; ++l) {
        const std::size_t start = static_cast<std::size_t>(l) * params.symbol_len() + params.cp_len;
        cf64 acc{};
        for (int n = 0; n < params.fft_size; ++n) {
            acc += std::polar(1.0, theta_rad[start + n]);
        }
        out[l] = acc / static_cast<double>(params.fft_size);
    }
    return out;
}

double cpe_rmse(const cpe_estimate& est, std::span<const cf64> reference) {
    if (reference.size() != est.n_symbols() || reference.empty()) {
        throw domain_error("cpe_rmse: reference length does not match the estimate");
    }
    double acc = 0.0;
    for (std::size_t l = 0; l < reference.size(); ++l) {
        const double e = wrap_pi(est.per_symbol_phase_rad[l] - std::arg(reference[l]));
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(reference.size()));
}

// ---------------------------------------------------------------------------

double evm_requirement_percent(int order) {
    switch (order) {
        case 4: return 17.5;
        case 16: return 12.5;
        case 64: return 8.0;
        case 256: return 3.5;
    }
    throw config_error(fmt::format("evm: no requirement for modulation order {}", order));
}

evm_report evm_from_powers(double p_error, double p_reference, int modulation) {
    if (!(p_reference > 0.0) || !(p_error >= 0.0)) {
        throw domain_error("evm: reference power must be positive and error power non-negative");
    }
    const double ratio = p_error / p_reference;
    evm_report r;
    r.p_error = p_error;
    r.p_reference = p_reference;
    r.modulation = modulation;
    r.evm_percent = 100.0 * std::sqrt(ratio);
    r.evm_db = ratio > 0.0 ? 10.0 * std::log10(ratio) : kEvmDbFloor;
    // compare in the power domain so the boundary value itself passes
    const double req = evm_requirement_percent(modulation) / 100.0;
    r.passes_requirement = ratio <= req * req * (1.0 + 1e-12);
    return r;
}

evm_report evm(std::span<const cf64> rx, std::span<const cf64> ref, int modulation) {
    if (rx.empty() || rx.size() != ref.size()) {
        throw domain_error(fmt::format("evm: need equal non-empty inputs (got {} and {})", rx.size(),
                                       ref.size()));
    }
    double err = 0.0;
    double pref = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        err += std::norm(rx[i] - ref[i]);
        pref += std::norm(ref[i]);
    }
    const auto n = static_cast<double>(rx.size());
    return evm_from_powers(err / n, pref / n, modulation);
}

double symbol_error_rate(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits,
                         int bits_per_symbol) {
    if (rx_bits.size() != tx_bits.size()) {
        throw domain_error(fmt::format("symbol_error_rate: {} vs {} bits", rx_bits.size(), tx_bits.size()));
    }
    if (bits_per_symbol < 1 || rx_bits.size() % static_cast<std::size_t>(bits_per_symbol) != 0) {
        throw domain_error("symbol_error_rate: bit count is not a whole number of symbols");
    }
    const std::size_t n_sym = rx_bits.size() / static_cast<std::size_t>(bits_per_symbol);
    if (n_sym == 0) {
        return 0.0;
    }
    std::size_t errors = 0;
    for (std::size_t s = 0; s < n_sym; ++s) {
        for (int b = 0; b < bits_per_symbol; ++b) {
            const std::size_t i = s * bits_per_symbol + b;
            if ((rx_bits[i] & 1u) != (tx_bits[i] & 1u)) {
                ++errors;
                break;
            }
        }
    }
    return static_cast<double>(errors) / static_cast<double>(n_sym);
}

}  // namespace pnsim
