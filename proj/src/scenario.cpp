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

#include "pnsim/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pnsim/config_file.hpp"

namespace pnsim {

const char* to_string(waveform_kind w) {
    return w == waveform_kind::cp_ofdm ? "cp-ofdm" : "dft-s-ofdm";
}

const char* to_string(experiment_kind e) {
    switch (e) {
        case experiment_kind::single_run: return "single-run";
        case experiment_kind::density_sweep: return "density-sweep";
        case experiment_kind::freq_density_sweep: return "freq-density-sweep";
        case experiment_kind::interference: return "interference";
        case experiment_kind::papr: return "papr";
        case experiment_kind::multi_trp: return "multi-trp";
    }
    return "?";
}

namespace {

experiment_kind parse_experiment(const std::string& s) {
    for (auto e : {experiment_kind::single_run, experiment_kind::density_sweep,
                   experiment_kind::freq_density_sweep, experiment_kind::interference,
                   experiment_kind::papr, experiment_kind::multi_trp}) {
        if (s == to_string(e)) return e;
    }
    throw config_error(fmt::format("scenario: unknown experiment '{}'", s));
}

waveform_kind parse_waveform(const std::string& s) {
    if (s == "cp-ofdm") return waveform_kind::cp_ofdm;
    if (s == "dft-s-ofdm") return waveform_kind::dft_s_ofdm;
    throw config_error(fmt::format("scenario: unknown waveform '{}'", s));
}

int narrow(std::int64_t v, const char* key) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw config_error(fmt::format("scenario: '{}' out of range", key));
    }
    return static_cast<int>(v);
}

std::vector<int> narrow_list(const std::vector<std::int64_t>& v, const char* key) {
    std::vector<int> out;
    out.reserve(v.size());
    for (auto x : v) out.push_back(narrow(x, key));
    return out;
}

std::vector<std::int64_t> widen(const std::vector<int>& v) { return {v.begin(), v.end()}; }

bool valid_variant(const std::string& v) {
    return v == "cp-ofdm" || v == "cp-ofdm+ptrs" || v == "dft-s-ofdm" || v == "dft-s-ofdm+ptrs";
}

}  // namespace

ofdm_params scenario::ofdm_for(int rb) const {
    ofdm_params p{.fft_size = fft_size,
                  .cp_len = cp_len < 0 ? fft_size / 8 : cp_len,
                  .n_used = rb * kSubcarriersPerRb,
                  .subcarrier_spacing_hz = subcarrier_spacing_hz};
    p.validate();
    return p;
}

void scenario::validate() const {
    if (name.empty()) throw config_error("scenario: name must not be empty");
    if (n_rb < 1) throw config_error("scenario: n_rb must be at least 1");
    if (n_symbols < 1) throw config_error("scenario: n_symbols must be at least 1");
    if (n_drops < 1) throw config_error("scenario: n_drops must be at least 1");
    if (snr_db.empty()) throw config_error("scenario: snr_db list must not be empty");
    for (double s : snr_db) {
        if (std::isnan(s) || s == -std::numeric_limits<double>::infinity()) {
            throw config_error("scenario: snr_db entries must be finite or +inf");
        }
    }
    qam_constellation check_order(modulation);
    (void)ofdm();
    ptrs.validate();
    chunks.validate();
    if (has_phase_noise()) {
        phase_noise.validate();
        (void)design_shaping_filter(phase_noise, ofdm().sample_rate_hz());
    }

    for (int l : density_sweep.time_densities) {
        ptrs_config c = ptrs;
        c.time_density = l;
        c.validate();
    }
    for (int m : density_sweep.modulations) qam_constellation check(m);
    for (int d : freq_density_sweep.freq_densities) {
        ptrs_config c = ptrs;
        c.freq_density_rb = d;
        c.rb_offset = 0;
        c.validate();
    }
    for (int rb : freq_density_sweep.n_rb_list) (void)ofdm_for(rb);

    const auto& in = interference;
    if (experiment == experiment_kind::interference &&
        (in.victim_offset < 0 || in.victim_offset >= ptrs.freq_density_rb || in.interferer_offset < 0 ||
        in.interferer_offset >= ptrs.freq_density_rb)) {
        throw config_error("scenario: interference offsets must be in [0, freq_density_rb)");
    }
    if (std::isnan(in.interferer_power_db) || in.interferer_power_db == kSnrInfinite) {
        throw config_error("scenario: interferer power must be finite or -inf");
    }
    if (!(in.boost_db >= 0.0) || !std::isfinite(in.boost_db)) {
        throw config_error("scenario: interference boost must be >= 0 dB");
    }

    for (const auto& v : papr.variants) {
        if (!valid_variant(v)) throw config_error(fmt::format("scenario: unknown PAPR variant '{}'", v));
    }
    if (papr.variants.empty()) throw config_error("scenario: PAPR needs at least one variant");
    if (papr.oversample < 1) throw config_error("scenario: PAPR oversampling must be >= 1");
    if (papr.min_symbols < 1) throw config_error("scenario: PAPR min_symbols must be >= 1");

    if (multi_trp.n_trp < 1 || static_cast<int>(multi_trp.offsets.size()) != multi_trp.n_trp) {
        throw config_error("scenario: multi_trp.offsets needs exactly n_trp entries");
    }
    for (int o : multi_trp.offsets) {
        if (experiment == experiment_kind::multi_trp && (o < 0 || o >= ptrs.freq_density_rb)) {
            throw config_error("scenario: multi-TRP offsets must be in [0, freq_density_rb)");
        }
    }
}

scenario parse_scenario(std::string_view text) {
    auto t = config_table::parse(text);
    const auto schema = t.get_int("schema", -1);
    if (schema != kScenarioSchema) {
        throw config_error(fmt::format("scenario: schema = {} required (got {})", kScenarioSchema, schema));
    }

    scenario sc;
    sc.name = t.get_string("name", sc.name);
    sc.experiment = parse_experiment(t.get_string("experiment", to_string(sc.experiment)));
    sc.waveform = parse_waveform(t.get_string("waveform", to_string(sc.waveform)));
    sc.n_rb = narrow(t.get_int("n_rb", sc.n_rb), "n_rb");
    sc.modulation = narrow(t.get_int("modulation", sc.modulation), "modulation");
    sc.snr_db = t.get_double_list("snr_db", sc.snr_db);
    sc.n_drops = narrow(t.get_int("n_drops", sc.n_drops), "n_drops");
    const auto seed = t.get_int("base_seed", static_cast<std::int64_t>(sc.base_seed));
    if (seed < 0) throw config_error("scenario: base_seed must be non-negative");
    sc.base_seed = static_cast<std::uint64_t>(seed);

    sc.fft_size = narrow(t.get_int("ofdm.fft_size", sc.fft_size), "ofdm.fft_size");
    sc.cp_len = narrow(t.get_int("ofdm.cp_len", sc.cp_len), "ofdm.cp_len");
    sc.subcarrier_spacing_hz = t.get_double("ofdm.subcarrier_spacing_hz", sc.subcarrier_spacing_hz);
    sc.n_symbols = narrow(t.get_int("ofdm.n_symbols", sc.n_symbols), "ofdm.n_symbols");

    sc.phase_noise_name = t.get_string("phase_noise.model", sc.phase_noise_name);
    const std::string& pn = sc.phase_noise_name;
    if (pn == "set-a" || pn == "set-b") {
        const double default_carrier = pn == "set-a" ? 30e9 : 60e9;
        sc.phase_noise = pole_zero_psd_model::named(pn, t.get_double("phase_noise.carrier_hz", default_carrier));
    } else if (pn == "custom") {
        sc.phase_noise.psd0_dbc_hz = t.get_double("phase_noise.psd0_dbc_hz", 0.0);
        sc.phase_noise.poles_hz = t.get_double_list("phase_noise.poles_hz", {});
        sc.phase_noise.zeros_hz = t.get_double_list("phase_noise.zeros_hz", {});
        sc.phase_noise.base_carrier_hz = t.get_double("phase_noise.base_carrier_hz", 0.0);
        sc.phase_noise.carrier_hz =
            t.get_double("phase_noise.carrier_hz", sc.phase_noise.base_carrier_hz);
    } else if (pn != "none") {
        throw config_error(fmt::format("scenario: unknown phase noise model '{}'", pn));
    }

    sc.ptrs.time_density = narrow(t.get_int("ptrs.time_density", sc.ptrs.time_density), "ptrs.time_density");
    sc.ptrs.freq_density_rb =
        narrow(t.get_int("ptrs.freq_density_rb", sc.ptrs.freq_density_rb), "ptrs.freq_density_rb");
    sc.ptrs.rb_offset = narrow(t.get_int("ptrs.rb_offset", sc.ptrs.rb_offset), "ptrs.rb_offset");
    sc.ptrs.sc_in_rb = narrow(t.get_int("ptrs.sc_in_rb", sc.ptrs.sc_in_rb), "ptrs.sc_in_rb");
    sc.ptrs.power_boost_db = t.get_double("ptrs.power_boost_db", sc.ptrs.power_boost_db);

    const auto thr = t.get_int_list("chunks.rb_thresholds", widen({sc.chunks.rb_thresholds.begin(),
                                                                   sc.chunks.rb_thresholds.end()}));
    if (thr.size() != sc.chunks.rb_thresholds.size()) {
        throw config_error("scenario: chunks.rb_thresholds needs exactly five values");
    }
    for (std::size_t i = 0; i < thr.size(); ++i) sc.chunks.rb_thresholds[i] = narrow(thr[i], "chunks.rb_thresholds");
    sc.chunks.time_density = narrow(t.get_int("chunks.time_density", sc.chunks.time_density), "chunks.time_density");
    sc.chunks.power_boost_db = t.get_double("chunks.power_boost_db", sc.chunks.power_boost_db);

    sc.density_sweep.time_densities = narrow_list(
        t.get_int_list("density_sweep.time_densities", widen(sc.density_sweep.time_densities)),
        "density_sweep.time_densities");
    sc.density_sweep.modulations = narrow_list(
        t.get_int_list("density_sweep.modulations", widen(sc.density_sweep.modulations)),
        "density_sweep.modulations");

    sc.freq_density_sweep.freq_densities = narrow_list(
        t.get_int_list("freq_density_sweep.freq_densities", widen(sc.freq_density_sweep.freq_densities)),
        "freq_density_sweep.freq_densities");
    sc.freq_density_sweep.n_rb_list = narrow_list(
        t.get_int_list("freq_density_sweep.n_rb_list", widen(sc.freq_density_sweep.n_rb_list)),
        "freq_density_sweep.n_rb_list");

    auto& in = sc.interference;
    in.victim_offset = narrow(t.get_int("interference.victim_offset", in.victim_offset), "interference.victim_offset");
    in.interferer_offset =
        narrow(t.get_int("interference.interferer_offset", in.interferer_offset), "interference.interferer_offset");
    in.interferer_power_db = t.get_double("interference.interferer_power_db", in.interferer_power_db);
    in.boost_db = t.get_double("interference.boost_db", in.boost_db);

    sc.papr.variants = t.get_string_list("papr.variants", sc.papr.variants);
    sc.papr.thresholds_db = t.get_double_list("papr.thresholds_db", sc.papr.thresholds_db);
    sc.papr.oversample = narrow(t.get_int("papr.oversample", sc.papr.oversample), "papr.oversample");
    sc.papr.min_symbols = narrow(t.get_int("papr.min_symbols", sc.papr.min_symbols), "papr.min_symbols");

    sc.multi_trp.n_trp = narrow(t.get_int("multi_trp.n_trp", sc.multi_trp.n_trp), "multi_trp.n_trp");
    sc.multi_trp.offsets =
        narrow_list(t.get_int_list("multi_trp.offsets", widen(sc.multi_trp.offsets)), "multi_trp.offsets");

    t.reject_unused();
    sc.validate();
    return sc;
}

scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error(fmt::format("cannot open scenario file '{}'", path.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<std::string> describe(const scenario& sc) {
    const auto ofdm = sc.ofdm();
    std::vector<std::string> out{
        fmt::format("schema = {}", kScenarioSchema),
        fmt::format("name = {}", sc.name),
        fmt::format("experiment = {}", to_string(sc.experiment)),
        fmt::format("waveform = {}", to_string(sc.waveform)),
        fmt::format("n_rb = {}", sc.n_rb),
        fmt::format("n_symbols = {}", sc.n_symbols),
        fmt::format("modulation = {}", sc.modulation),
        fmt::format("fft_size = {}", ofdm.fft_size),
        fmt::format("cp_len = {}", ofdm.cp_len),
        fmt::format("subcarrier_spacing_hz = {}", ofdm.subcarrier_spacing_hz),
        fmt::format("sample_rate_hz = {}", ofdm.sample_rate_hz()),
        fmt::format("snr_db = [{}]", fmt::join(sc.snr_db, ", ")),
        fmt::format("snr_definition = per-RE Es/N0"),
        fmt::format("n_drops = {}", sc.n_drops),
        fmt::format("base_seed = {}", sc.base_seed),
        fmt::format("phase_noise.model = {}", sc.phase_noise_name),
    };
    if (sc.has_phase_noise()) {
        const auto& m = sc.phase_noise;
        out.push_back(fmt::format("phase_noise.psd0_dbc_hz = {}", m.psd0_dbc_hz));
        out.push_back(fmt::format("phase_noise.poles_hz = [{}]", fmt::join(m.poles_hz, ", ")));
        out.push_back(fmt::format("phase_noise.zeros_hz = [{}]", fmt::join(m.zeros_hz, ", ")));
        out.push_back(fmt::format("phase_noise.base_carrier_hz = {}", m.base_carrier_hz));
        out.push_back(fmt::format("phase_noise.carrier_hz = {}", m.carrier_hz));
    }
    out.push_back(fmt::format("ptrs.time_density = {}", sc.ptrs.time_density));
    out.push_back(fmt::format("ptrs.freq_density_rb = {}", sc.ptrs.freq_density_rb));
    out.push_back(fmt::format("ptrs.rb_offset = {}", sc.ptrs.rb_offset));
    out.push_back(fmt::format("ptrs.sc_in_rb = {}", sc.ptrs.sc_in_rb));
    out.push_back(fmt::format("ptrs.power_boost_db = {}", sc.ptrs.power_boost_db));
    out.push_back(fmt::format("chunks.rb_thresholds = [{}]", fmt::join(sc.chunks.rb_thresholds, ", ")));
    out.push_back(fmt::format("chunks.time_density = {}", sc.chunks.time_density));
    out.push_back(fmt::format("chunks.power_boost_db = {}", sc.chunks.power_boost_db));

    switch (sc.experiment) {
        case experiment_kind::density_sweep:
            out.push_back(fmt::format("density_sweep.time_densities = [{}]",
                                      fmt::join(sc.density_sweep.time_densities, ", ")));
            out.push_back(fmt::format("density_sweep.modulations = [{}]",
                                      fmt::join(sc.density_sweep.modulations, ", ")));
            break;
        case experiment_kind::freq_density_sweep:
            out.push_back(fmt::format("freq_density_sweep.freq_densities = [{}]",
                                      fmt::join(sc.freq_density_sweep.freq_densities, ", ")));
            out.push_back(fmt::format("freq_density_sweep.n_rb_list = [{}]",
                                      fmt::join(sc.freq_density_sweep.n_rb_list, ", ")));
            break;
        case experiment_kind::interference:
            out.push_back(fmt::format("interference.victim_offset = {}", sc.interference.victim_offset));
            out.push_back(fmt::format("interference.interferer_offset = {}", sc.interference.interferer_offset));
            out.push_back(fmt::format("interference.interferer_power_db = {}", sc.interference.interferer_power_db));
            out.push_back(fmt::format("interference.boost_db = {}", sc.interference.boost_db));
            break;
        case experiment_kind::papr:
            out.push_back(fmt::format("papr.variants = [{}]", fmt::join(sc.papr.variants, ", ")));
            out.push_back(fmt::format("papr.oversample = {}", sc.papr.oversample));
            out.push_back(fmt::format("papr.min_symbols = {}", sc.papr.min_symbols));
            break;
        case experiment_kind::multi_trp:
            out.push_back(fmt::format("multi_trp.n_trp = {}", sc.multi_trp.n_trp));
            out.push_back(fmt::format("multi_trp.offsets = [{}]", fmt::join(sc.multi_trp.offsets, ", ")));
            break;
        case experiment_kind::single_run:
            break;
    }
    return out;
}

}  // namespace pnsim
