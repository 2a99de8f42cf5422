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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pnsim/config_file.hpp"
#include "pnsim/receiver.hpp"
#include "pnsim/simctl.hpp"

using namespace pnsim;

namespace {

scenario small_scenario() {
    scenario sc;
    sc.name = "t";
    sc.n_rb = 8;
    sc.n_drops = 6;
    sc.modulation = 16;
    return sc;
}

std::string sweep_csv(const scenario& sc, std::span<const sweep_row> rows) {
    std::ostringstream os;
    write_sweep_csv(os, sc, rows);
    return os.str();
}

}  // namespace

TEST_CASE("config reader") {
    auto t = config_table::parse(
        "a = 1\nb = -2.5e3 # note\n[s]\nc = \"x # y\"\nd = [1, 2, 3]\ne = true\nf = -inf\ng = 1_000\n");
    CHECK(t.get_int("a", 0) == 1);
    CHECK(t.get_double("b", 0) == -2500.0);
    CHECK(t.get_string("s.c", "") == "x # y");
    CHECK(t.get_int_list("s.d", {}) == std::vector<std::int64_t>{1, 2, 3});
    CHECK(t.get_bool("s.e", false));
    CHECK(t.get_double("s.f", 0) == -std::numeric_limits<double>::infinity());
    CHECK(t.get_int("s.g", 0) == 1000);
    CHECK(t.get_double("missing", 4.5) == 4.5);
    CHECK_NOTHROW(t.reject_unused());

    CHECK_THROWS_AS(config_table::parse("a = 1\na = 2\n"), config_error);
    CHECK_THROWS_AS(config_table::parse("a = [1, 2\n"), config_error);
    CHECK_THROWS_AS(config_table::parse("just words\n"), config_error);
    auto typed = config_table::parse("a = \"x\"\n");
    CHECK_THROWS_AS(typed.get_int("a", 0), config_error);
    auto extra = config_table::parse("a = 1\nb = 2\n");
    (void)extra.get_int("a", 0);
    CHECK_THROWS_AS(extra.reject_unused(), config_error);
}

TEST_CASE("scenario parsing") {
    const auto sc = parse_scenario(R"(
schema = 1
name = "demo"
experiment = "density-sweep"
n_rb = 16
snr_db = [10, 20]
[phase_noise]
model = "set-b"
carrier_hz = 60e9
[ptrs]
freq_density_rb = 2
[density_sweep]
time_densities = [1, 2]
)");
    CHECK(sc.name == "demo");
    CHECK(sc.experiment == experiment_kind::density_sweep);
    CHECK(sc.n_rb == 16);
    CHECK(sc.snr_db == std::vector<double>{10.0, 20.0});
    CHECK(sc.phase_noise.psd0_dbc_hz == -70.0);
    CHECK(sc.ptrs.freq_density_rb == 2);
    CHECK(sc.density_sweep.time_densities == std::vector<int>{1, 2});
    CHECK(sc.ofdm().cp_len == 128);

    CHECK_THROWS_AS(parse_scenario("name = \"x\"\n"), config_error);               // no schema
    CHECK_THROWS_AS(parse_scenario("schema = 2\n"), config_error);                 // wrong schema
    CHECK_THROWS_AS(parse_scenario("schema = 1\nn_rbs = 3\n"), config_error);      // unknown key
    CHECK_THROWS_AS(parse_scenario("schema = 1\nn_drops = 0\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("schema = 1\nsnr_db = []\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("schema = 1\nmodulation = 32\n"), config_error);
    CHECK_THROWS_AS(parse_scenario("schema = 1\nexperiment = \"fast\"\n"), config_error);
}

TEST_CASE("summaries") {
    const double v[] = {1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(v);
    CHECK(s.mean == 2.5);
    CHECK(s.se == doctest::Approx(std::sqrt(1.6666666666666667 / 4)));
    const double w[] = {1.0, kEvmDbFloor};
    CHECK(summarize(w).mean == kEvmDbFloor);
    CHECK(summarize(w).se == 0.0);
}

TEST_CASE("impairment-free link reaches the numerical floor") {
    for (auto wf : {waveform_kind::cp_ofdm, waveform_kind::dft_s_ofdm}) {
        auto sc = small_scenario();
        sc.waveform = wf;
        sc.phase_noise_name = "none";
        const auto r = run_single(sc, kSnrInfinite, 1);
        CHECK(r.evm_db_post < -100.0);
        CHECK(r.ser == 0.0);
        CHECK(r.cpe_rmse_rad < 1e-9);
    }
}

TEST_CASE("drops are deterministic and independent of the job count") {
    auto sc = small_scenario();
    sc.snr_db = {20.0};
    const auto a = run_drops(sc, 20.0, 1);
    const auto b = run_drops(sc, 20.0, 4);
    REQUIRE(a.size() == b.size());
    std::ostringstream oa, ob;
    write_drops_csv(oa, sc, a);
    write_drops_csv(ob, sc, b);
    CHECK(oa.str() == ob.str());
    CHECK(a[0].seed != a[1].seed);
    CHECK(run_single(sc, 20.0, a[3].seed).evm_db_post == a[3].evm_db_post);
}

TEST_CASE("one-point sweeps equal run_drops") {
    auto sc = small_scenario();
    const double snr[] = {25.0};
    const auto drops = run_drops(sc, 25.0, 2);
    const auto agg = summarize_drops(drops);

    const int l[] = {1};
    const auto rows = run_density_sweep(sc, l, {}, snr, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].metrics.evm_db_post.mean == agg.evm_db_post.mean);
    CHECK(rows[0].metrics.cpe_rmse_rad.mean == agg.cpe_rmse_rad.mean);

    const int df[] = {1};
    const int nrb[] = {8};
    const auto frows = run_freq_density_sweep(sc, df, nrb, snr, 3);
    REQUIRE(frows.size() == 1);
    CHECK(sweep_csv(sc, frows) == sweep_csv(sc, rows));
}

TEST_CASE("interference at -inf power leaves both cases identical") {
    auto sc = small_scenario();
    sc.ptrs.freq_density_rb = 2;
    const double snr[] = {20.0};
    const auto rows = run_interference(sc, 0, 1, kEvmDbFloor, 3.0, snr, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].case_name == "colliding");
    CHECK(rows[0].collision_fraction == 1.0);
    CHECK(rows[1].collision_fraction == 0.0);
    CHECK(rows[0].metrics.cpe_rmse_rad.mean == rows[1].metrics.cpe_rmse_rad.mean);
    CHECK(rows[0].metrics.evm_db_post.mean == rows[1].metrics.evm_db_post.mean);
    CHECK_THROWS_AS(run_interference(sc, 0, 0, 0.0, 3.0, snr, 1), config_error);
    CHECK_THROWS_AS(run_interference(sc, 0, 2, 0.0, 3.0, snr, 1), config_error);
}

TEST_CASE("a single TRP equals run_single") {
    auto sc = small_scenario();
    sc.ptrs.freq_density_rb = 2;
    const int off[] = {0};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto a = run_single(sc, 20.0, seed);
        const auto b = run_multi_trp_drop(sc, off, 20.0, seed);
        CHECK(a.evm_db_post == b.evm_db_post);
        CHECK(a.evm_db_pre == b.evm_db_pre);
        CHECK(a.cpe_rmse_rad == b.cpe_rmse_rad);
        CHECK(a.ser == b.ser);
    }
}

TEST_CASE("multi-TRP overhead and collisions") {
    auto sc = small_scenario();
    sc.ptrs.freq_density_rb = 2;
    const int one[] = {0};
    const int two[] = {0, 1};
    const double f1 = ptrs_overhead_fraction(sc, one);
    CHECK(f1 == doctest::Approx(4.0 * 14 / (96.0 * 14)));
    CHECK(ptrs_overhead_fraction(sc, two) == doctest::Approx(2 * f1));
    const int clash[] = {1, 1};
    CHECK_THROWS_AS(run_multi_trp_drop(sc, clash, 20.0, 1), collision_error);

    const double snr[] = {kSnrInfinite};
    const auto rows = run_multi_trp(sc, 2, two, snr, 2);
    CHECK(rows.size() == 3);
    CHECK(rows[0].n_trp == 1);
    CHECK(rows[2].trp_id == 1);
    CHECK(rows[2].overhead_fraction > rows[0].overhead_fraction);
}

TEST_CASE("papr runner") {
    auto sc = small_scenario();
    sc.modulation = 4;
    sc.papr.min_symbols = 280;
    const std::string variants[] = {"cp-ofdm", "dft-s-ofdm+ptrs"};
    const auto r = run_papr(sc, variants, 2);
    REQUIRE(r.size() == 2);
    CHECK(r[0].papr_db.size() == 280);
    CHECK(r[0].ccdf.front().probability == 1.0);
    for (std::size_t i = 1; i < r[0].ccdf.size(); ++i) CHECK(r[0].ccdf[i].probability <= r[0].ccdf[i - 1].probability);
    const std::string bogus[] = {"ofdm"};
    CHECK_THROWS_AS(run_papr(sc, bogus, 1), config_error);
}

TEST_CASE("csv header echoes the resolved parameters") {
    const auto sc = small_scenario();
    std::ostringstream os;
    write_drops_csv(os, sc, {});
    const auto s = os.str();
    CHECK(s.find("# subcarrier_spacing_hz = 120000\n") != std::string::npos);
    CHECK(s.find("# n_symbols = 14\n") != std::string::npos);
    CHECK(s.find("# cp_len = 128\n") != std::string::npos);
    CHECK(s.find("\nscenario,drop,seed,snr_db,") != std::string::npos);
}
