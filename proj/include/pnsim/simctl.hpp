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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pnsim/scenario.hpp"

namespace pnsim {

/// Metrics of one Monte-Carlo realization.
struct drop_report {
    std::string scenario;
    std::size_t drop_index = 0;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    double evm_db_pre = 0.0;   ///< before CPE compensation
    double evm_db_post = 0.0;  ///< after CPE compensation
    double evm_ratio_post = 0.0;  ///< P_error / P_reference after compensation
    double ser = 0.0;
    double cpe_rmse_rad = 0.0;
    int pilots_per_symbol = 0;  ///< PT-RS REs in a PT-RS-bearing symbol
    std::vector<double> trp_cpe_rmse_rad;  ///< multi-TRP only, one per TRP
};

/// Mean and standard error of the mean.
struct summary {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

/// If any value is -inf the mean is -inf with zero spread.
summary summarize(std::span<const double> values);

struct metric_summary {
    summary evm_db_pre;
    summary evm_db_post;
    double evm_db_post_pooled = 0.0;  ///< 10 log10(mean P_error/P_reference)
    summary ser;
    summary cpe_rmse_rad;
};

metric_summary summarize_drops(std::span<const drop_report> drops);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads and returns the
/// results in index order.
std::vector<drop_report> run_parallel(std::size_t n, int jobs,
                                      const std::function<drop_report(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Single drops

/// bits -> QAM -> grid (+PT-RS) -> modulate -> phase noise -> AWGN ->
/// demodulate -> CPE estimate -> compensate -> metrics. Handles both
/// waveforms (pre-DFT chunks for DFT-s-OFDM).
drop_report run_single(const scenario& sc, double snr_db, std::uint64_t seed);

/// Victim link plus a second user on the same RBs. The interferer uses the
/// same fixed pilot and boost, its own oscillator, and a random static phase.
drop_report run_interference_drop(const scenario& sc, int victim_offset, int interferer_offset,
                                  double interferer_power_db, double boost_db, double snr_db,
                                  std::uint64_t seed);

/// One drop with one oscillator per TRP and orthogonal PT-RS. RB r carries
/// data from TRP (r mod n_trp); REs of other TRPs' PT-RS and of RBs a TRP
/// does not serve are left vacant in that TRP's grid.
drop_report run_multi_trp_drop(const scenario& sc, std::span<const int> offsets, double snr_db,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

struct sweep_row {
    int modulation = 0;
    int time_density = 0;
    int freq_density_rb = 0;
    int n_rb = 0;
    double snr_db = 0.0;
    int pilots_per_symbol = 0;
    metric_summary metrics;
    std::vector<drop_report> drops;
};

/// Drops 0..n_drops-1 at every sweep point use the same seeds.
std::vector<drop_report> run_drops(const scenario& sc, double snr_db, int jobs);

std::vector<sweep_row> run_density_sweep(const scenario& sc, std::span<const int> time_densities,
                                         std::span<const int> modulations, std::span<const double> snrs,
                                         int jobs = 1);

std::vector<sweep_row> run_freq_density_sweep(const scenario& sc, std::span<const int> freq_densities,
                                              std::span<const int> n_rb_list, std::span<const double> snrs,
                                              int jobs = 1);

struct interference_row {
    std::string case_name;  ///< "colliding" or "separated"
    int victim_offset = 0;
    int interferer_offset = 0;
    double interferer_power_db = 0.0;
    double boost_db = 0.0;
    double snr_db = 0.0;
    double collision_fraction = 0.0;
    metric_summary metrics;
    std::vector<drop_report> drops;
};

/// Colliding case: interferer offset = victim offset. Separated case: the
/// configured interferer offset (must differ from the victim's).
std::vector<interference_row> run_interference(const scenario& sc, int victim_offset, int interferer_offset,
                                               double interferer_power_db, double boost_db,
                                               std::span<const double> snrs, int jobs = 1);

struct papr_variant_result {
    std::string variant;
    std::vector<double> papr_db;  ///< one per OFDM symbol
    std::vector<ccdf_point> ccdf;
    double papr_999_db = 0.0;  ///< level exceeded by 0.1% of symbols
};

std::vector<double> default_papr_thresholds();

std::vector<papr_variant_result> run_papr(const scenario& sc, std::span<const std::string> variants,
                                          int jobs = 1);

struct multi_trp_row {
    int n_trp = 0;
    int trp_id = 0;
    double snr_db = 0.0;
    summary cpe_rmse_rad;
    summary evm_db_post;
    double overhead_fraction = 0.0;
};

/// Rows for every n in 1..n_trp (using the first n offsets), one per TRP.
std::vector<multi_trp_row> run_multi_trp(const scenario& sc, int n_trp, std::span<const int> offsets,
                                         std::span<const double> snrs, int jobs = 1);

/// n_trp * |per-TRP PT-RS REs| / total REs.
double ptrs_overhead_fraction(const scenario& sc, std::span<const int> offsets);

// ---------------------------------------------------------------------------
// Output

/// Runs the scenario's experiment and writes its CSV file(s) under
/// `out_dir`. Returns the written paths.
std::vector<std::filesystem::path> run_experiment(const scenario& sc, const std::filesystem::path& out_dir,
                                                  int jobs = 1);

/// Header block ("# key = value") followed by the table.
void write_drops_csv(std::ostream& os, const scenario& sc, std::span<const drop_report> drops);
void write_sweep_csv(std::ostream& os, const scenario& sc, std::span<const sweep_row> rows);
void write_interference_csv(std::ostream& os, const scenario& sc, std::span<const interference_row> rows);
void write_papr_csv(std::ostream& os, const scenario& sc, std::span<const papr_variant_result> rows);
void write_multi_trp_csv(std::ostream& os, const scenario& sc, std::span<const multi_trp_row> rows);

}  // namespace pnsim
