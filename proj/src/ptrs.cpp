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

#include "pnsim/ptrs.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <ostream>

namespace pnsim {

void ptrs_config::validate() const {
    if (time_density != 1 && time_density != 2 && time_density != 4) {
        throw config_error(fmt::format("ptrs: time density {} not in {{1, 2, 4}}", time_density));
    }
    if (freq_density_rb != 1 && freq_density_rb != 2 && freq_density_rb != 4) {
        throw config_error(fmt::format("ptrs: frequency density {} not in {{1, 2, 4}}", freq_density_rb));
    }
    if (rb_offset < 0 || rb_offset >= freq_density_rb) {
        throw config_error(fmt::format("ptrs: rb offset {} must be in [0, {})", rb_offset, freq_density_rb));
    }
    if (sc_in_rb < 0 || sc_in_rb >= kSubcarriersPerRb) {
        throw config_error(fmt::format("ptrs: subcarrier-in-RB {} must be in [0, 11]", sc_in_rb));
    }
    if (!std::isfinite(power_boost_db) || power_boost_db < 0.0) {
        throw config_error("ptrs: power boost must be a finite value >= 0 dB");
    }
}

double ptrs_config::amplitude() const { return std::pow(10.0, power_boost_db / 20.0); }

re_set ptrs_re_positions(const ptrs_config& cfg, int n_rb, int n_symbols) {
    cfg.validate();
    if (n_rb < 1) {
        throw config_error("ptrs: n_rb must be at least 1");
    }
    re_set out;
    for (int rb = cfg.rb_offset; rb < n_rb; rb += cfg.freq_density_rb) {
        const int sc = rb * kSubcarriersPerRb + cfg.sc_in_rb;
        for (int l = 0; l < n_symbols; l += cfg.time_density) {
            out.push_back({sc, l});
        }
    }
    return out;
}

void map_ptrs(resource_grid& grid, const re_set& positions, const ptrs_config& cfg) {
    const cf64 pilot = cfg.transmitted_pilot();
    for (const auto& re : positions) {
        grid.put_ptrs(re, pilot);
    }
}

void mark_vacant(resource_grid& grid, const re_set& positions) {
    for (const auto& re : positions) {
        grid.set_vacant(re);
    }
}

void chunk_config::validate() const {
    for (std::size_t i = 0; i < rb_thresholds.size(); ++i) {
        if (rb_thresholds[i] < 1 || (i > 0 && rb_thresholds[i] <= rb_thresholds[i - 1])) {
            throw config_error("chunks: rb thresholds must be positive and strictly ascending");
        }
    }
    if (time_density != 1 && time_density != 2) {
        throw config_error(fmt::format("chunks: time density {} not in {{1, 2}}", time_density));
    }
    if (!std::isfinite(power_boost_db) || power_boost_db < 0.0) {
        throw config_error("chunks: power boost must be a finite value >= 0 dB");
    }
}

std::optional<chunk_params> chunk_params_for_bandwidth(const chunk_config& cfg, int n_rb) {
    cfg.validate();
    if (n_rb < 1) {
        throw config_error("chunks: n_rb must be at least 1");
    }
    const auto& t = cfg.rb_thresholds;
    // number of thresholds <= n_rb selects the row
    const auto passed = std::upper_bound(t.begin(), t.end(), n_rb) - t.begin();
    if (passed == 0) {
        return std::nullopt;
    }
    return kChunkTable[static_cast<std::size_t>(passed - 1)];
}

std::vector<int> pre_dft_positions(int x, int k, int m) {
    if (x < 1 || k < 1 || m < 1) {
        throw domain_error("pre_dft_positions: X, K and m must be positive");
    }
    if (static_cast<long>(x) * k > m) {
        throw domain_error(fmt::format("pre_dft_positions: X*K = {} exceeds DFT size {}", x * k, m));
    }
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(x) * k);
    for (int i = 0; i < x; ++i) {
        const int end = static_cast<int>((static_cast<long>(i) + 1) * m / x);
        for (int j = end - k; j < end; ++j) {
            out.push_back(j);
        }
    }
    return out;
}

re_set pre_dft_re_positions(const chunk_params& params, int m, int n_symbols, int time_density) {
    if (time_density < 1) {
        throw domain_error("pre_dft_re_positions: time density must be positive");
    }
    const auto samples = pre_dft_positions(params.x, params.k, m);
    re_set out;
    out.reserve(samples.size() * static_cast<std::size_t>((n_symbols + time_density - 1) / time_density));
    for (int s : samples) {
        for (int l = 0; l < n_symbols; l += time_density) {
            out.push_back({s, l});
        }
    }
    return out;
}

std::vector<re_set> multi_trp_layout(std::span<const ptrs_config> per_trp, int n_rb, int n_symbols) {
    if (per_trp.size() < 2) {
        throw config_error("multi-TRP layout needs at least two TRP configurations");
    }
    std::vector<re_set> sets;
    sets.reserve(per_trp.size());
    for (const auto& cfg : per_trp) {
        sets.push_back(ptrs_re_positions(cfg, n_rb, n_symbols));
    }
    for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = a + 1; b < sets.size(); ++b) {
            re_set overlap;
            std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                                  std::back_inserter(overlap));
            if (!overlap.empty()) {
                std::string msg = fmt::format("PT-RS collision between TRP {} and TRP {} on {} REs:", a,
                                              b, overlap.size());
                for (const auto& re : overlap) {
                    msg += fmt::format(" ({},{})", re.subcarrier, re.symbol);
                }
                throw collision_error(std::move(msg), static_cast<int>(a), static_cast<int>(b),
                                      std::move(overlap));
            }
        }
    }
    return sets;
}

double collision_fraction(const re_set& a, const re_set& b) {
    if (a.empty()) {
        return 0.0;
    }
    std::size_t shared = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++shared;
            ++ia;
            ++ib;
        }
    }
    return static_cast<double>(shared) / static_cast<double>(a.size());
}

void write_re_sets_csv(std::ostream& os, std::span<const re_set> sets) {
    os << "trp_id,subcarrier,symbol\n";
    for (std::size_t t = 0; t < sets.size(); ++t) {
        for (const auto& re : sets[t]) {
            fmt::print(os, "{},{},{}\n", t, re.subcarrier, re.symbol);
        }
    }
}

}  // namespace pnsim
