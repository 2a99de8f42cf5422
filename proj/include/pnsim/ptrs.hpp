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

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pnsim/grid.hpp"

namespace pnsim {

/// CP-OFDM PT-RS pattern.
struct ptrs_config {
    int time_density = 1;     ///< L: every L-th symbol carries PT-RS
    int freq_density_rb = 1;  ///< d_f: one PT-RS subcarrier per d_f RBs
    int rb_offset = 0;        ///< RBs r with r mod d_f == rb_offset carry PT-RS
    int sc_in_rb = 0;         ///< subcarrier within the RB, 0..11
    double power_boost_db = 0.0;

    /// Unit-magnitude pilot, identical on every PT-RS RE.
    static constexpr cf64 pilot_value{1.0, 0.0};

    void validate() const;
    /// 10^(boost/20)
    [[nodiscard]] double amplitude() const;
    [[nodiscard]] cf64 transmitted_pilot() const { return amplitude() * pilot_value; }
};

/// PT-RS REs: subcarrier 12*r + sc_in_rb for every RB r with
/// r mod d_f == rb_offset, in symbols 0, L, 2L, ...
re_set ptrs_re_positions(const ptrs_config& cfg, int n_rb, int n_symbols);

/// Writes the (boosted) pilot into every RE of `positions`.
void map_ptrs(resource_grid& grid, const re_set& positions, const ptrs_config& cfg);

/// Labels every RE of `positions` Vacant.
void mark_vacant(resource_grid& grid, const re_set& positions);

// ---------------------------------------------------------------------------
// Pre-DFT (DFT-s-OFDM) chunks

struct chunk_params {
    int x = 0;  ///< number of chunks
    int k = 0;  ///< samples per chunk

    friend bool operator==(const chunk_params&, const chunk_params&) = default;
};

/// Rows of the bandwidth -> (X, K) table, indexed by threshold interval.
inline constexpr std::array<chunk_params, 5> kChunkTable{{
    {2, 2},
    {2, 4},
    {4, 2},
    {4, 4},
    {8, 4},
}};

struct chunk_config {
    /// N_RB0..N_RB4, strictly ascending. Set by higher layers; the default is
    /// a scenario choice, not a standardized value.
    std::array<int, 5> rb_thresholds{2, 8, 16, 32, 48};
    /// 1: every symbol, 2: every other symbol.
    int time_density = 1;
    double power_boost_db = 0.0;

    void validate() const;
};

/// Table row for `n_rb`, or nullopt below the first threshold (no PT-RS).
std::optional<chunk_params> chunk_params_for_bandwidth(const chunk_config& cfg, int n_rb);

/// X chunks of K contiguous samples in [0, m). [0, m) is split into X equal
/// intervals and chunk i sits at the tail of interval i:
/// [floor((i+1)m/X) - K, floor((i+1)m/X)).
std::vector<int> pre_dft_positions(int x, int k, int m);

/// pre_dft_positions replicated over symbols 0, td, 2td, ... as REs of the
/// pre-DFT sample plane (subcarrier field = sample index).
re_set pre_dft_re_positions(const chunk_params& params, int m, int n_symbols, int time_density);

// ---------------------------------------------------------------------------
// Multi-TRP

/// Raised when PT-RS allocations of two TRPs share REs.
struct collision_error : error {
    collision_error(std::string what, int trp_a, int trp_b, re_set overlap)
        : error(std::move(what)), trp_a(trp_a), trp_b(trp_b), overlap(std::move(overlap)) {}

    int trp_a;
    int trp_b;
    re_set overlap;
};

/// One RE set per TRP. Throws collision_error naming the first intersecting
/// pair and listing every shared RE.
std::vector<re_set> multi_trp_layout(std::span<const ptrs_config> per_trp, int n_rb, int n_symbols);

/// |a intersect b| / |a|; 0 for empty a. Both sets must be sorted.
double collision_fraction(const re_set& a, const re_set& b);

/// trp_id,subcarrier,symbol
void write_re_sets_csv(std::ostream& os, std::span<const re_set> sets);

}  // namespace pnsim
