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

#include "pnsim/phase_noise.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pnsim/fft.hpp"

namespace pnsim {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

void pole_zero_psd_model::validate() const {
    if (!std::isfinite(psd0_dbc_hz)) {
        throw config_error("phase noise: psd0_dbc_hz must be finite");
    }
    if (zeros_hz.empty() || zeros_hz.size() != poles_hz.size()) {
        throw config_error(fmt::format(
            "phase noise: need the same nonzero number of poles and zeros (got {} poles, {} zeros)",
            poles_hz.size(), zeros_hz.size()));
    }
    for (double z : zeros_hz) {
        if (!positive_finite(z)) {
            throw config_error(fmt::format("phase noise: zero frequency {} Hz is not positive", z));
        }
    }
    for (double p : poles_hz) {
        if (!positive_finite(p)) {
            throw config_error(fmt::format("phase noise: pole frequency {} Hz is not positive", p));
        }
    }
    if (!positive_finite(base_carrier_hz) || !positive_finite(carrier_hz)) {
        throw config_error("phase noise: carrier frequencies must be positive");
    }
}

pole_zero_psd_model pole_zero_psd_model::set_a(double carrier_hz) {
    return {
        .psd0_dbc_hz = -79.4,
        .zeros_hz = {1.8e6, 2.2e6, 40e6},
        .poles_hz = {0.1e6, 0.2e6, 8e6},
        .base_carrier_hz = 30e9,
        .carrier_hz = carrier_hz,
    };
}

pole_zero_psd_model pole_zero_psd_model::set_b(double carrier_hz) {
    return {
        .psd0_dbc_hz = -70.0,
        .zeros_hz = {0.02e6, 6e6, 10e6},
        .poles_hz = {0.005e6, 0.4e6, 0.6e6},
        .base_carrier_hz = 60e9,
        .carrier_hz = carrier_hz,
    };
}

pole_zero_psd_model pole_zero_psd_model::named(std::string_view name, double carrier_hz) {
    if (name == "set-a") {
        return set_a(carrier_hz);
    }
    if (name == "set-b") {
        return set_b(carrier_hz);
    }
    throw config_error(fmt::format("phase noise: unknown model '{}' (expected set-a or set-b)", name));
}

double carrier_shift_db(const pole_zero_psd_model& model) {
    return 20.0 * std::log10(model.carrier_hz / model.base_carrier_hz);
}

std::vector<double> psd_terms_db(const pole_zero_psd_model& model, double f_hz) {
    if (!std::isfinite(f_hz) || f_hz < 0.0) {
        throw domain_error(fmt::format("psd_at: frequency {} Hz is outside [0, inf)", f_hz));
    }
    model.validate();
    std::vector<double> terms;
    terms.reserve(model.poles_hz.size() + 1);
    terms.push_back(model.psd0_dbc_hz + carrier_shift_db(model));
    for (std::size_t n = 0; n < model.poles_hz.size(); ++n) {
        const double rz = f_hz / model.zeros_hz[n];
        const double rp = f_hz / model.poles_hz[n];
        terms.push_back(10.0 * std::log10((1.0 + rz * rz) / (1.0 + rp * rp)));
    }
    return terms;
}

double psd_at(const pole_zero_psd_model& model, double f_hz) {
    if (!std::isfinite(f_hz) || f_hz < 0.0) {
        throw domain_error(fmt::format("psd_at: frequency {} Hz is outside [0, inf)", f_hz));
    }
    model.validate();
    double ratio = db_to_linear(model.psd0_dbc_hz);
    for (std::size_t n = 0; n < model.poles_hz.size(); ++n) {
        const double rz = f_hz / model.zeros_hz[n];
        const double rp = f_hz / model.poles_hz[n];
        ratio *= (1.0 + rz * rz) / (1.0 + rp * rp);
    }
    return 10.0 * std::log10(ratio) + carrier_shift_db(model);
}

double filter_spec::magnitude_db(double f_hz) const {
    const cf64 z_inv = std::polar(1.0, -kTwoPi * f_hz / sample_rate_hz);
    double mag_sq = 1.0;
    for (const auto& s : sections) {
        const cf64 h = (s.b0 + s.b1 * z_inv) / (1.0 + s.a1 * z_inv);
        mag_sq *= std::norm(h);
    }
    return 10.0 * std::log10(mag_sq);
}

double filter_spec::output_psd_dbc_hz(double f_hz) const {
    return 10.0 * std::log10(gain * gain / sample_rate_hz) + magnitude_db(f_hz);
}

filter_spec design_shaping_filter(const pole_zero_psd_model& model, double sample_rate_hz) {
    model.validate();
    if (!positive_finite(sample_rate_hz)) {
        throw config_error("shaping filter: sample rate must be positive");
    }
    const auto check = [&](double f, const char* kind) {
        if (!(sample_rate_hz > 2.0 * f)) {
            throw config_error(fmt::format(
                "shaping filter: {} at {} Hz is not below Nyquist for sample rate {} Hz", kind, f,
                sample_rate_hz));
        }
    };
    for (double z : model.zeros_hz) check(z, "zero");
    for (double p : model.poles_hz) check(p, "pole");

    filter_spec spec;
    spec.sample_rate_hz = sample_rate_hz;
    const double c = 2.0 * sample_rate_hz;
    for (std::size_t n = 0; n < model.poles_hz.size(); ++n) {
        const double kz = c / (kTwoPi * model.zeros_hz[n]);
        const double kp = c / (kTwoPi * model.poles_hz[n]);
        const double a0 = 1.0 + kp;
        spec.sections.push_back({
            .b0 = (1.0 + kz) / a0,
            .b1 = (1.0 - kz) / a0,
            .a1 = (1.0 - kp) / a0,
        });
    }
    const double psd0_linear = db_to_linear(model.psd0_dbc_hz + carrier_shift_db(model));
    spec.gain = std::sqrt(psd0_linear * sample_rate_hz);
    return spec;
}

std::size_t warmup_samples(const pole_zero_psd_model& model, double sample_rate_hz) {
    constexpr double cap = 1 << 20;
    const double slowest = *std::min_element(model.poles_hz.begin(), model.poles_hz.end());
    return static_cast<std::size_t>(std::min(cap, std::floor(8.0 * sample_rate_hz / slowest)));
}

phase_noise_process generate(const pole_zero_psd_model& model, double sample_rate_hz,
                             std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw domain_error("phase noise: sample count must be at least 1");
    }
    const filter_spec filt = design_shaping_filter(model, sample_rate_hz);
    const std::size_t skip = warmup_samples(model, sample_rate_hz);

    rng_engine rng(seed);
    std::normal_distribution<double> white(0.0, 1.0);

    struct state {
        double x1 = 0.0;
        double y1 = 0.0;
    };
    std::vector<state> states(filt.sections.size());

    phase_noise_process out{.samples_rad = {},
                            .sample_rate_hz = sample_rate_hz,
                            .model = model,
                            .seed = seed};
    out.samples_rad.resize(count);
    for (std::size_t n = 0; n < skip + count; ++n) {
        double v = filt.gain * white(rng);
        for (std::size_t s = 0; s < filt.sections.size(); ++s) {
            const auto& c = filt.sections[s];
            auto& st = states[s];
            const double y = c.b0 * v + c.b1 * st.x1 - c.a1 * st.y1;
            st.x1 = v;
            st.y1 = y;
            v = y;
        }
        if (n >= skip) {
            out.samples_rad[n - skip] = v;
        }
    }
    return out;
}

std::size_t welch_segment_count(std::size_t n_samples, std::size_t segment_len,
                                double overlap_frac) {
    if (segment_len == 0 || segment_len > n_samples) {
        return 0;
    }
    const auto step = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(segment_len * (1.0 - overlap_frac))));
    return (n_samples - segment_len) / step + 1;
}

std::vector<psd_point> estimate_psd(std::span<const double> samples, double sample_rate_hz,
                                    std::size_t segment_len, double overlap_frac) {
    if (segment_len < 2) {
        throw domain_error("estimate_psd: segment length must be at least 2");
    }
    if (segment_len > samples.size()) {
        throw domain_error(fmt::format("estimate_psd: segment length {} exceeds {} samples",
                                       segment_len, samples.size()));
    }
    if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) {
        throw domain_error("estimate_psd: overlap fraction must be in [0, 1)");
    }
    if (!positive_finite(sample_rate_hz)) {
        throw domain_error("estimate_psd: sample rate must be positive");
    }

    const std::size_t len = segment_len;
    std::vector<double> window(len);
    double window_power = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        window[n] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(n) / len);
        window_power += window[n] * window[n];
    }

    const auto step =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(len * (1.0 - overlap_frac))));
    const std::size_t n_bins = len / 2;
    std::vector<double> acc(n_bins + 1, 0.0);
    cvec buf(len);
    cvec spec(len);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + len <= samples.size(); start += step) {
        for (std::size_t n = 0; n < len; ++n) {
            buf[n] = window[n] * samples[start + n];
        }
        raw_dft(buf, spec, fft_direction::forward);
        for (std::size_t k = 1; k <= n_bins; ++k) {
            acc[k] += std::norm(spec[k]);
        }
        ++segments;
    }

    const double scale = 1.0 / (static_cast<double>(segments) * sample_rate_hz * window_power);
    std::vector<psd_point> out;
    out.reserve(n_bins);
    for (std::size_t k = 1; k <= n_bins; ++k) {
        out.push_back({
            .frequency_hz = static_cast<double>(k) * sample_rate_hz / len,
            .psd_dbc_hz = 10.0 * std::log10(acc[k] * scale),
        });
    }
    return out;
}

std::vector<psd_point> estimate_psd(const phase_noise_process& process, std::size_t segment_len,
                                    double overlap_frac) {
    return estimate_psd(process.samples_rad, process.sample_rate_hz, segment_len, overlap_frac);
}

void write_psd_csv(std::ostream& os, std::span<const psd_point> points) {
    os << "frequency_hz,psd_dbc_hz\n";
    for (const auto& p : points) {
        fmt::print(os, "{},{}\n", p.frequency_hz, p.psd_dbc_hz);
    }
}

}  // namespace pnsim
