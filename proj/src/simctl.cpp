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

#include "pnsim/simctl.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "pnsim/grid.hpp"
#include "pnsim/phase_noise.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/receiver.hpp"
#include "pnsim/waveform.hpp"

namespace pnsim {

// ---------------------------------------------------------------------------
// Aggregation

summary summarize(std::span<const double> values) {
    summary s;
    s.n = values.size();
    if (values.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double v : values) {
        if (v == kEvmDbFloor) {
            s.mean = kEvmDbFloor;
            s.se = 0.0;
            return s;
        }
        sum += v;
    }
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.se = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
    }
    return s;
}

metric_summary summarize_drops(std::span<const drop_report> drops) {
    std::vector<double> pre, post, ser, cpe;
    double ratio = 0.0;
    for (const auto& d : drops) {
        pre.push_back(d.evm_db_pre);
        post.push_back(d.evm_db_post);
        ser.push_back(d.ser);
        cpe.push_back(d.cpe_rmse_rad);
        ratio += d.evm_ratio_post;
    }
    metric_summary m;
    m.evm_db_pre = summarize(pre);
    m.evm_db_post = summarize(post);
    m.ser = summarize(ser);
    m.cpe_rmse_rad = summarize(cpe);
    ratio /= std::max<std::size_t>(1, drops.size());
    m.evm_db_post_pooled = ratio > 0.0 ? 10.0 * std::log10(ratio) : kEvmDbFloor;
    return m;
}

namespace {

template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(n);
    const auto workers = static_cast<std::size_t>(std::clamp<long>(jobs, 1, static_cast<long>(std::max<std::size_t>(n, 1))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) slots[i] = fn(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        slots[i] = fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = n;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace

std::vector<drop_report> run_parallel(std::size_t n, int jobs,
                                      const std::function<drop_report(std::size_t)>& fn) {
    return parallel_map<drop_report>(n, jobs, fn);
}

// ---------------------------------------------------------------------------
// Link building blocks

namespace {

struct tx_frame {
    resource_grid grid;
    cvec data;
    bit_vector bits;
};

tx_frame fill_random(resource_grid layout, const qam_constellation& qam, std::uint64_t seed) {
    tx_frame f;
    f.bits = random_bits(layout.count(re_kind::data) * qam.bits_per_symbol(), seed);
    f.data = qam_modulate(f.bits, qam);
    f.grid = fill_data(std::move(layout), f.data);
    return f;
}

std::vector<double> phase_trajectory(const scenario& sc, double fs, std::size_t count, std::uint64_t seed) {
    if (!sc.has_phase_noise()) {
        return std::vector<double>(count, 0.0);
    }
    return generate(sc.phase_noise, fs, count, seed).samples_rad;
}

/// Per-RE SNR with unit RE power: noise variance per time sample 10^(-snr/10)
/// maps to the same variance per bin through the unitary transform.
time_signal add_link_noise(const time_signal& sig, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) {
        return sig;
    }
    return add_noise(sig, std::pow(10.0, -snr_db / 10.0), seed);
}

cpe_estimate zero_estimate(int n_symbols) {
    return {.per_symbol_phase_rad = std::vector<double>(n_symbols, 0.0),
            .source = std::vector<cpe_source>(n_symbols, cpe_source::interpolated),
            .n_pilots_used = std::vector<int>(n_symbols, 0)};
}

cpe_estimate estimate_or_zero(std::span<const cf64> plane, int n_symbols, const re_set& positions,
                              double boost_db) {
    if (positions.empty()) {
        return zero_estimate(n_symbols);
    }
    return estimate_cpe(plane, n_symbols, positions, ptrs_config::pilot_value, boost_db);
}

int pilots_in_first_symbol(const re_set& positions) {
    return static_cast<int>(std::count_if(positions.begin(), positions.end(),
                                          [](const re_index& re) { return re.symbol == 0; }));
}

void fill_metrics(drop_report& r, std::span<const cf64> ref, std::span<const cf64> pre,
                  std::span<const cf64> post, std::span<const std::uint8_t> tx_bits,
                  const qam_constellation& qam) {
    const auto e_pre = evm(pre, ref, qam.order());
    const auto e_post = evm(post, ref, qam.order());
    r.evm_db_pre = e_pre.evm_db;
    r.evm_db_post = e_post.evm_db;
    r.evm_ratio_post = e_post.p_error / e_post.p_reference;
    const auto rx_bits = qam_demodulate(post, qam);
    r.ser = symbol_error_rate(rx_bits, tx_bits, qam.bits_per_symbol());
}

std::uint64_t trp_stream(std::size_t trp, bool phase) {
    return static_cast<std::uint64_t>(stream::trp_base) + 2 * trp + (phase ? 1 : 0);
}

/// CP-OFDM link with one or more transmitters. Transmitter 0 uses the same
/// random streams as a single-TRP link, so one config reproduces run_single.
drop_report simulate_trps(const scenario& sc, std::span<const ptrs_config> cfgs, double snr_db,
                          std::uint64_t seed) {
    const auto n_trp = cfgs.size();
    const int n_rb = sc.n_rb;
    const int n_sym = sc.n_symbols;
    const ofdm_params params = sc.ofdm();
    const qam_constellation qam(sc.modulation);

    std::vector<re_set> sets;
    if (n_trp == 1) {
        sets.push_back(ptrs_re_positions(cfgs[0], n_rb, n_sym));
    } else {
        sets = multi_trp_layout(cfgs, n_rb, n_sym);
    }
    const auto serving = [&](int subcarrier) {
        return static_cast<std::size_t>(subcarrier / kSubcarriersPerRb) % n_trp;
    };

    std::vector<tx_frame> frames;
    std::vector<std::vector<double>> thetas;
    time_signal rx;
    for (std::size_t t = 0; t < n_trp; ++t) {
        resource_grid layout(n_rb, n_sym);
        map_ptrs(layout, sets[t], cfgs[t]);
        for (std::size_t u = 0; u < n_trp; ++u) {
            if (u != t) mark_vacant(layout, sets[u]);
        }
        if (n_trp > 1) {
            for (int l = 0; l < n_sym; ++l) {
                for (int k = 0; k < layout.n_subcarriers(); ++k) {
                    if (layout.label(k, l) == re_kind::data && serving(k) != t) {
                        layout.set_vacant({k, l});
                    }
                }
            }
        }
        const auto bit_seed = t == 0 ? substream_seed(seed, stream::data_bits)
                                     : substream_seed(seed, trp_stream(t, false));
        const auto pn_seed = t == 0 ? substream_seed(seed, stream::phase_noise)
                                    : substream_seed(seed, trp_stream(t, true));
        frames.push_back(fill_random(std::move(layout), qam, bit_seed));
        const time_signal tx = ofdm_modulate(frames.back().grid, params);
        thetas.push_back(phase_trajectory(sc, params.sample_rate_hz(), tx.samples.size(), pn_seed));
        const time_signal impaired = apply_phase_noise(tx, thetas.back());
        if (t == 0) {
            rx = impaired;
        } else {
            for (std::size_t n = 0; n < rx.samples.size(); ++n) rx.samples[n] += impaired.samples[n];
        }
    }
    rx = add_link_noise(rx, snr_db, substream_seed(seed, stream::awgn));
    const cvec plane = ofdm_demodulate(rx, params, n_sym);

    std::vector<cpe_estimate> est;
    for (std::size_t t = 0; t < n_trp; ++t) {
        est.push_back(estimate_or_zero(plane, n_sym, sets[t], cfgs[t].power_boost_db));
    }
    cvec post(plane.size());
    const auto n_sc = static_cast<std::size_t>(params.n_used);
    for (int l = 0; l < n_sym; ++l) {
        for (std::size_t k = 0; k < n_sc; ++k) {
            const auto& e = est[serving(static_cast<int>(k))];
            const std::size_t i = static_cast<std::size_t>(l) * n_sc + k;
            post[i] = plane[i] * std::polar(1.0, -e.per_symbol_phase_rad[l]);
        }
    }

    drop_report r;
    r.scenario = sc.name;
    r.seed = seed;
    r.snr_db = snr_db;
    r.pilots_per_symbol = pilots_in_first_symbol(sets[0]);
    cvec ref, pre_data, post_data;
    bit_vector tx_bits;
    double sq = 0.0;
    for (std::size_t t = 0; t < n_trp; ++t) {
        const auto& f = frames[t];
        const cvec p = extract_data(f.grid, plane);
        const cvec q = extract_data(f.grid, post);
        ref.insert(ref.end(), f.data.begin(), f.data.end());
        pre_data.insert(pre_data.end(), p.begin(), p.end());
        post_data.insert(post_data.end(), q.begin(), q.end());
        tx_bits.insert(tx_bits.end(), f.bits.begin(), f.bits.end());
        const double rmse = cpe_rmse(est[t], reference_cpe(thetas[t], params, n_sym));
        r.trp_cpe_rmse_rad.push_back(rmse);
        sq += rmse * rmse;
    }
    r.cpe_rmse_rad = std::sqrt(sq / static_cast<double>(n_trp));
    fill_metrics(r, ref, pre_data, post_data, tx_bits, qam);
    return r;
}

drop_report simulate_dft_s_ofdm(const scenario& sc, double snr_db, std::uint64_t seed) {
    const int n_sym = sc.n_symbols;
    const int m = sc.n_rb * kSubcarriersPerRb;
    const ofdm_params params = sc.ofdm();
    const qam_constellation qam(sc.modulation);

    resource_grid layout = resource_grid::with_subcarriers(m, n_sym);
    re_set positions;
    if (const auto chunk = chunk_params_for_bandwidth(sc.chunks, sc.n_rb)) {
        positions = pre_dft_re_positions(*chunk, m, n_sym, sc.chunks.time_density);
    }
    const cf64 pilot = std::pow(10.0, sc.chunks.power_boost_db / 20.0) * ptrs_config::pilot_value;
    for (const auto& re : positions) layout.put_ptrs(re, pilot);

    const tx_frame frame = fill_random(std::move(layout), qam, substream_seed(seed, stream::data_bits));
    const time_signal tx = ofdm_modulate(precode_grid(frame.grid), params);
    const auto theta = phase_trajectory(sc, params.sample_rate_hz(), tx.samples.size(),
                                        substream_seed(seed, stream::phase_noise));
    const time_signal rx =
        add_link_noise(apply_phase_noise(tx, theta), snr_db, substream_seed(seed, stream::awgn));
    const cvec samples = decode_plane(ofdm_demodulate(rx, params, n_sym), m, n_sym);
    const cpe_estimate est = estimate_or_zero(samples, n_sym, positions, sc.chunks.power_boost_db);
    const cvec post = compensate(samples, est);

    drop_report r;
    r.scenario = sc.name;
    r.seed = seed;
    r.snr_db = snr_db;
    r.pilots_per_symbol = pilots_in_first_symbol(positions);
    r.cpe_rmse_rad = cpe_rmse(est, reference_cpe(theta, params, n_sym));
    r.trp_cpe_rmse_rad = {r.cpe_rmse_rad};
    fill_metrics(r, frame.data, extract_data(frame.grid, samples), extract_data(frame.grid, post),
                 frame.bits, qam);
    return r;
}

}  // namespace

drop_report run_single(const scenario& sc, double snr_db, std::uint64_t seed) {
    try {
        if (sc.waveform == waveform_kind::dft_s_ofdm) {
            return simulate_dft_s_ofdm(sc, snr_db, seed);
        }
        const ptrs_config cfgs[] = {sc.ptrs};
        return simulate_trps(sc, cfgs, snr_db, seed);
    } catch (const error& e) {
        throw error(fmt::format("scenario '{}': {}", sc.name, e.what()));
    }
}

drop_report run_multi_trp_drop(const scenario& sc, std::span<const int> offsets, double snr_db,
                               std::uint64_t seed) {
    if (sc.waveform != waveform_kind::cp_ofdm) {
        throw config_error("multi-TRP runs need the cp-ofdm waveform");
    }
    std::vector<ptrs_config> cfgs;
    for (int o : offsets) {
        ptrs_config c = sc.ptrs;
        c.rb_offset = o;
        cfgs.push_back(c);
    }
    if (cfgs.empty()) {
        throw config_error("multi-TRP run needs at least one TRP");
    }
    return simulate_trps(sc, cfgs, snr_db, seed);
}

drop_report run_interference_drop(const scenario& sc, int victim_offset, int interferer_offset,
                                  double interferer_power_db, double boost_db, double snr_db,
                                  std::uint64_t seed) {
    if (sc.waveform != waveform_kind::cp_ofdm) {
        throw config_error("interference runs need the cp-ofdm waveform");
    }
    const int n_rb = sc.n_rb;
    const int n_sym = sc.n_symbols;
    const ofdm_params params = sc.ofdm();
    const qam_constellation qam(sc.modulation);

    ptrs_config victim_cfg = sc.ptrs;
    victim_cfg.rb_offset = victim_offset;
    victim_cfg.power_boost_db = boost_db;
    ptrs_config interferer_cfg = victim_cfg;
    interferer_cfg.rb_offset = interferer_offset;

    const re_set victim_set = ptrs_re_positions(victim_cfg, n_rb, n_sym);
    resource_grid victim_layout(n_rb, n_sym);
    map_ptrs(victim_layout, victim_set, victim_cfg);
    const tx_frame victim = fill_random(std::move(victim_layout), qam, substream_seed(seed, stream::data_bits));
    const time_signal victim_tx = ofdm_modulate(victim.grid, params);
    const auto theta = phase_trajectory(sc, params.sample_rate_hz(), victim_tx.samples.size(),
                                        substream_seed(seed, stream::phase_noise));
    time_signal rx = apply_phase_noise(victim_tx, theta);

    if (interferer_power_db != kEvmDbFloor) {
        resource_grid layout(n_rb, n_sym);
        map_ptrs(layout, ptrs_re_positions(interferer_cfg, n_rb, n_sym), interferer_cfg);
        const tx_frame intf = fill_random(std::move(layout), qam, substream_seed(seed, stream::interferer_bits));
        const time_signal intf_tx = ofdm_modulate(intf.grid, params);
        const auto intf_theta = phase_trajectory(sc, params.sample_rate_hz(), intf_tx.samples.size(),
                                                 substream_seed(seed, stream::interferer_phase_noise));
        rng_engine rng(substream_seed(seed, stream::interferer_channel));
        const double phase = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
        const cf64 gain = std::polar(std::pow(10.0, interferer_power_db / 20.0), phase);
        const time_signal arriving = apply_phase_noise(intf_tx, intf_theta);
        for (std::size_t n = 0; n < rx.samples.size(); ++n) rx.samples[n] += gain * arriving.samples[n];
    }
    rx = add_link_noise(rx, snr_db, substream_seed(seed, stream::awgn));

    const cvec plane = ofdm_demodulate(rx, params, n_sym);
    const cpe_estimate est = estimate_or_zero(plane, n_sym, victim_set, boost_db);
    const cvec post = compensate(plane, est);

    drop_report r;
    r.scenario = sc.name;
    r.seed = seed;
    r.snr_db = snr_db;
    r.pilots_per_symbol = pilots_in_first_symbol(victim_set);
    r.cpe_rmse_rad = cpe_rmse(est, reference_cpe(theta, params, n_sym));
    r.trp_cpe_rmse_rad = {r.cpe_rmse_rad};
    fill_metrics(r, victim.data, extract_data(victim.grid, plane), extract_data(victim.grid, post),
                 victim.bits, qam);
    return r;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

template <class Fn>
std::vector<drop_report> drops_for(const scenario& sc, int jobs, Fn&& per_seed) {
    return run_parallel(static_cast<std::size_t>(sc.n_drops), jobs, [&](std::size_t i) {
        drop_report r = per_seed(drop_seed(sc.base_seed, i));
        r.drop_index = i;
        return r;
    });
}

}  // namespace

std::vector<drop_report> run_drops(const scenario& sc, double snr_db, int jobs) {
    return drops_for(sc, jobs, [&](std::uint64_t seed) { return run_single(sc, snr_db, seed); });
}

std::vector<sweep_row> run_density_sweep(const scenario& sc, std::span<const int> time_densities,
                                         std::span<const int> modulations, std::span<const double> snrs,
                                         int jobs) {
    std::vector<int> mods(modulations.begin(), modulations.end());
    if (mods.empty()) mods.push_back(sc.modulation);
    std::vector<sweep_row> rows;
    for (int mod : mods) {
        for (int l : time_densities) {
            for (double snr : snrs) {
                scenario point = sc;
                point.modulation = mod;
                point.ptrs.time_density = l;
                point.chunks.time_density = std::min(l, 2);
                point.validate();
                sweep_row row;
                row.modulation = mod;
                row.time_density = l;
                row.freq_density_rb = point.ptrs.freq_density_rb;
                row.n_rb = point.n_rb;
                row.snr_db = snr;
                row.drops = run_drops(point, snr, jobs);
                row.pilots_per_symbol = row.drops.front().pilots_per_symbol;
                row.metrics = summarize_drops(row.drops);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<sweep_row> run_freq_density_sweep(const scenario& sc, std::span<const int> freq_densities,
                                              std::span<const int> n_rb_list, std::span<const double> snrs,
                                              int jobs) {
    std::vector<sweep_row> rows;
    for (int rb : n_rb_list) {
        for (int df : freq_densities) {
            for (double snr : snrs) {
                scenario point = sc;
                point.n_rb = rb;
                point.ptrs.freq_density_rb = df;
                point.ptrs.rb_offset = std::min(point.ptrs.rb_offset, df - 1);
                point.validate();
                sweep_row row;
                row.modulation = point.modulation;
                row.time_density = point.ptrs.time_density;
                row.freq_density_rb = df;
                row.n_rb = rb;
                row.snr_db = snr;
                row.drops = run_drops(point, snr, jobs);
                row.pilots_per_symbol = row.drops.front().pilots_per_symbol;
                row.metrics = summarize_drops(row.drops);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<interference_row> run_interference(const scenario& sc, int victim_offset, int interferer_offset,
                                               double interferer_power_db, double boost_db,
                                               std::span<const double> snrs, int jobs) {
    const int df = sc.ptrs.freq_density_rb;
    if (victim_offset < 0 || victim_offset >= df || interferer_offset < 0 || interferer_offset >= df) {
        throw config_error(fmt::format("interference: offsets must be in [0, {})", df));
    }
    if (victim_offset == interferer_offset) {
        throw config_error("interference: the separated case needs distinct offsets");
    }
    std::vector<interference_row> rows;
    for (double snr : snrs) {
        for (const auto& [name, other] : {std::pair{"colliding", victim_offset},
                                          std::pair{"separated", interferer_offset}}) {
            interference_row row;
            row.case_name = name;
            row.victim_offset = victim_offset;
            row.interferer_offset = other;
            row.interferer_power_db = interferer_power_db;
            row.boost_db = boost_db;
            row.snr_db = snr;
            ptrs_config a = sc.ptrs;
            a.rb_offset = victim_offset;
            ptrs_config b = sc.ptrs;
            b.rb_offset = other;
            row.collision_fraction = collision_fraction(ptrs_re_positions(a, sc.n_rb, sc.n_symbols),
                                                        ptrs_re_positions(b, sc.n_rb, sc.n_symbols));
            row.drops = drops_for(sc, jobs, [&, other = other](std::uint64_t seed) {
                return run_interference_drop(sc, victim_offset, other, interferer_power_db, boost_db, snr, seed);
            });
            row.metrics = summarize_drops(row.drops);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<double> default_papr_thresholds() {
    std::vector<double> t;
    for (int i = 0; i <= 140; ++i) t.push_back(i / 10.0);
    return t;
}

std::vector<papr_variant_result> run_papr(const scenario& sc, std::span<const std::string> variants,
                                          int jobs) {
    const ofdm_params params = sc.ofdm();
    const qam_constellation qam(sc.modulation);
    const int n_sym = sc.n_symbols;
    const int m = sc.n_rb * kSubcarriersPerRb;
    const auto n_slots = static_cast<std::size_t>((sc.papr.min_symbols + n_sym - 1) / n_sym);
    const auto thresholds = sc.papr.thresholds_db.empty() ? default_papr_thresholds() : sc.papr.thresholds_db;

    std::vector<papr_variant_result> out;
    for (const auto& variant : variants) {
        const bool dft_s = variant.starts_with("dft-s-ofdm");
        const bool with_ptrs = variant.ends_with("+ptrs");
        if (!dft_s && variant != "cp-ofdm" && variant != "cp-ofdm+ptrs") {
            throw config_error(fmt::format("papr: unknown variant '{}'", variant));
        }
        const auto per_slot = parallel_map<std::vector<double>>(n_slots, jobs, [&](std::size_t i) {
            const std::uint64_t seed = substream_seed(drop_seed(sc.base_seed, i), stream::data_bits);
            resource_grid freq;
            if (dft_s) {
                resource_grid layout = resource_grid::with_subcarriers(m, n_sym);
                if (with_ptrs) {
                    if (const auto chunk = chunk_params_for_bandwidth(sc.chunks, sc.n_rb)) {
                        const cf64 pilot = std::pow(10.0, sc.chunks.power_boost_db / 20.0) * ptrs_config::pilot_value;
                        for (const auto& re : pre_dft_re_positions(*chunk, m, n_sym, sc.chunks.time_density)) {
                            layout.put_ptrs(re, pilot);
                        }
                    }
                }
                freq = precode_grid(fill_random(std::move(layout), qam, seed).grid);
            } else {
                resource_grid layout(sc.n_rb, n_sym);
                if (with_ptrs) map_ptrs(layout, ptrs_re_positions(sc.ptrs, sc.n_rb, n_sym), sc.ptrs);
                freq = fill_random(std::move(layout), qam, seed).grid;
            }
            std::vector<double> values;
            for (const auto& body : symbol_bodies(freq, params, sc.papr.oversample)) {
                values.push_back(papr_db(body.samples));
            }
            return values;
        });
        papr_variant_result r;
        r.variant = variant;
        for (const auto& v : per_slot) r.papr_db.insert(r.papr_db.end(), v.begin(), v.end());
        r.ccdf = ccdf_from_values(r.papr_db, thresholds);
        r.papr_999_db = papr_at_ccdf(r.papr_db, 1e-3);
        out.push_back(std::move(r));
    }
    return out;
}

double ptrs_overhead_fraction(const scenario& sc, std::span<const int> offsets) {
    std::size_t n = 0;
    for (int o : offsets) {
        ptrs_config c = sc.ptrs;
        c.rb_offset = o;
        n += ptrs_re_positions(c, sc.n_rb, sc.n_symbols).size();
    }
    const double total = static_cast<double>(sc.n_rb) * kSubcarriersPerRb * sc.n_symbols;
    return static_cast<double>(n) / total;
}

std::vector<multi_trp_row> run_multi_trp(const scenario& sc, int n_trp, std::span<const int> offsets,
                                         std::span<const double> snrs, int jobs) {
    if (n_trp < 1 || static_cast<int>(offsets.size()) != n_trp) {
        throw config_error("multi-TRP: need one offset per TRP");
    }
    std::vector<multi_trp_row> rows;
    for (int n = 1; n <= n_trp; ++n) {
        const auto subset = offsets.first(static_cast<std::size_t>(n));
        const double overhead = ptrs_overhead_fraction(sc, subset);
        for (double snr : snrs) {
            const auto drops = drops_for(sc, jobs, [&](std::uint64_t seed) {
                return run_multi_trp_drop(sc, subset, snr, seed);
            });
            std::vector<double> evm_post;
            for (const auto& d : drops) evm_post.push_back(d.evm_db_post);
            const summary evm_summary = summarize(evm_post);
            for (int t = 0; t < n; ++t) {
                std::vector<double> rmse;
                for (const auto& d : drops) rmse.push_back(d.trp_cpe_rmse_rad[t]);
                rows.push_back({.n_trp = n,
                                .trp_id = t,
                                .snr_db = snr,
                                .cpe_rmse_rad = summarize(rmse),
                                .evm_db_post = evm_summary,
                                .overhead_fraction = overhead});
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Output

namespace {

void write_header(std::ostream& os, const scenario& sc) {
    for (const auto& line : describe(sc)) {
        os << "# " << line << '\n';
    }
}

}  // namespace

void write_drops_csv(std::ostream& os, const scenario& sc, std::span<const drop_report> drops) {
    write_header(os, sc);
    os << "scenario,drop,seed,snr_db,evm_pre_db,evm_post_db,ser,cpe_rmse_rad,pilots_per_symbol\n";
    for (const auto& d : drops) {
        fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", d.scenario, d.drop_index, d.seed, d.snr_db, d.evm_db_pre,
                   d.evm_db_post, d.ser, d.cpe_rmse_rad, d.pilots_per_symbol);
    }
}

void write_sweep_csv(std::ostream& os, const scenario& sc, std::span<const sweep_row> rows) {
    write_header(os, sc);
    os << "modulation,time_density,freq_density_rb,n_rb,snr_db,pilots_per_symbol,n_drops,"
          "evm_pre_db_mean,evm_pre_db_se,evm_post_db_mean,evm_post_db_se,evm_post_db_pooled,"
          "ser_mean,ser_se,cpe_rmse_rad_mean,cpe_rmse_rad_se\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.modulation, r.time_density,
                   r.freq_density_rb, r.n_rb, r.snr_db, r.pilots_per_symbol, r.drops.size(), m.evm_db_pre.mean,
                   m.evm_db_pre.se, m.evm_db_post.mean, m.evm_db_post.se, m.evm_db_post_pooled, m.ser.mean,
                   m.ser.se, m.cpe_rmse_rad.mean, m.cpe_rmse_rad.se);
    }
}

void write_interference_csv(std::ostream& os, const scenario& sc, std::span<const interference_row> rows) {
    write_header(os, sc);
    os << "case,victim_offset,interferer_offset,interferer_power_db,boost_db,snr_db,collision_fraction,"
          "n_drops,cpe_rmse_rad_mean,cpe_rmse_rad_se,evm_post_db_mean,evm_post_db_se,ser_mean,ser_se\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.case_name, r.victim_offset,
                   r.interferer_offset, r.interferer_power_db, r.boost_db, r.snr_db, r.collision_fraction,
                   r.drops.size(), m.cpe_rmse_rad.mean, m.cpe_rmse_rad.se, m.evm_db_post.mean, m.evm_db_post.se,
                   m.ser.mean, m.ser.se);
    }
}

void write_papr_csv(std::ostream& os, const scenario& sc, std::span<const papr_variant_result> rows) {
    write_header(os, sc);
    for (const auto& r : rows) {
        fmt::print(os, "# papr_999_db[{}] = {} ({} symbols)\n", r.variant, r.papr_999_db, r.papr_db.size());
    }
    os << "variant,threshold_db,ccdf\n";
    for (const auto& r : rows) {
        for (const auto& p : r.ccdf) {
            fmt::print(os, "{},{},{}\n", r.variant, p.threshold_db, p.probability);
        }
    }
}

void write_multi_trp_csv(std::ostream& os, const scenario& sc, std::span<const multi_trp_row> rows) {
    write_header(os, sc);
    os << "n_trp,trp_id,snr_db,overhead_fraction,cpe_rmse_rad_mean,cpe_rmse_rad_se,evm_post_db_mean,"
          "evm_post_db_se\n";
    for (const auto& r : rows) {
        fmt::print(os, "{},{},{},{},{},{},{},{}\n", r.n_trp, r.trp_id, r.snr_db, r.overhead_fraction,
                   r.cpe_rmse_rad.mean, r.cpe_rmse_rad.se, r.evm_db_post.mean, r.evm_db_post.se);
    }
}

std::vector<std::filesystem::path> run_experiment(const scenario& sc, const std::filesystem::path& out_dir,
                                                  int jobs) {
    sc.validate();
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    const auto open = [&](const std::string& suffix) {
        auto path = out_dir / fmt::format("{}_{}.csv", sc.name, suffix);
        std::ofstream os(path, std::ios::binary);
        if (!os) throw error(fmt::format("cannot write '{}'", path.string()));
        written.push_back(path);
        return os;
    };

    switch (sc.experiment) {
        case experiment_kind::single_run: {
            std::vector<drop_report> all;
            std::vector<sweep_row> rows;
            for (double snr : sc.snr_db) {
                sweep_row row;
                row.modulation = sc.modulation;
                row.time_density = sc.ptrs.time_density;
                row.freq_density_rb = sc.ptrs.freq_density_rb;
                row.n_rb = sc.n_rb;
                row.snr_db = snr;
                row.drops = run_drops(sc, snr, jobs);
                row.pilots_per_symbol = row.drops.front().pilots_per_symbol;
                row.metrics = summarize_drops(row.drops);
                all.insert(all.end(), row.drops.begin(), row.drops.end());
                rows.push_back(std::move(row));
            }
            auto drops_os = open("drops");
            write_drops_csv(drops_os, sc, all);
            auto summary_os = open("summary");
            write_sweep_csv(summary_os, sc, rows);
            break;
        }
        case experiment_kind::density_sweep: {
            const auto rows = run_density_sweep(sc, sc.density_sweep.time_densities, sc.density_sweep.modulations,
                                                sc.snr_db, jobs);
            auto os = open("density-sweep");
            write_sweep_csv(os, sc, rows);
            break;
        }
        case experiment_kind::freq_density_sweep: {
            const auto rows = run_freq_density_sweep(sc, sc.freq_density_sweep.freq_densities,
                                                     sc.freq_density_sweep.n_rb_list, sc.snr_db, jobs);
            auto os = open("freq-density-sweep");
            write_sweep_csv(os, sc, rows);
            break;
        }
        case experiment_kind::interference: {
            const auto& p = sc.interference;
            const auto rows = run_interference(sc, p.victim_offset, p.interferer_offset, p.interferer_power_db,
                                               p.boost_db, sc.snr_db, jobs);
            auto os = open("interference");
            write_interference_csv(os, sc, rows);
            break;
        }
        case experiment_kind::papr: {
            const auto rows = run_papr(sc, sc.papr.variants, jobs);
            auto os = open("papr");
            write_papr_csv(os, sc, rows);
            break;
        }
        case experiment_kind::multi_trp: {
            const auto rows = run_multi_trp(sc, sc.multi_trp.n_trp, sc.multi_trp.offsets, sc.snr_db, jobs);
            auto os = open("multi-trp");
            write_multi_trp_csv(os, sc, rows);
            break;
        }
    }
    return written;
}

}  // namespace pnsim
