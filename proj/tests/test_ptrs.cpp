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

#include <algorithm>
#include <set>
#include <sstream>

#include "pnsim/ptrs.hpp"

using namespace pnsim;

namespace {

std::set<std::pair<int, int>> brute_positions(const ptrs_config& c, int n_rb, int n_sym) {
    std::set<std::pair<int, int>> out;
    for (int l = 0; l < n_sym; ++l) {
        if (l % c.time_density != 0) continue;
        for (int r = 0; r < n_rb; ++r) {
            if (r % c.freq_density_rb == c.rb_offset) out.emplace(12 * r + c.sc_in_rb, l);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("positions match a direct enumeration") {
    for (int l : {1, 2, 4}) {
        for (int df : {1, 2, 4}) {
            for (int off = 0; off < df; ++off) {
                for (int n_rb : {1, 3, 8, 32}) {
                    const ptrs_config c{.time_density = l, .freq_density_rb = df, .rb_offset = off, .sc_in_rb = 5};
                    const auto got = ptrs_re_positions(c, n_rb, 14);
                    CHECK(std::is_sorted(got.begin(), got.end()));
                    std::set<std::pair<int, int>> as_set;
                    for (const auto& re : got) as_set.emplace(re.subcarrier, re.symbol);
                    CHECK(as_set.size() == got.size());
                    CHECK(as_set == brute_positions(c, n_rb, 14));
                }
            }
        }
    }
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS((ptrs_config{.time_density = 3}.validate()), config_error);
    CHECK_THROWS_AS((ptrs_config{.freq_density_rb = 2, .rb_offset = 2}.validate()), config_error);
    CHECK_THROWS_AS((ptrs_config{.sc_in_rb = 12}.validate()), config_error);
    CHECK_NOTHROW((ptrs_config{.time_density = 4, .freq_density_rb = 4, .rb_offset = 3}.validate()));
    CHECK(ptrs_config{.power_boost_db = 6.0}.amplitude() == doctest::Approx(std::pow(10.0, 0.3)));
}

TEST_CASE("map_ptrs writes the boosted pilot and mark_vacant clears") {
    const ptrs_config c{.freq_density_rb = 2, .power_boost_db = 3.0};
    resource_grid g(4, 14);
    const auto pos = ptrs_re_positions(c, 4, 14);
    map_ptrs(g, pos, c);
    CHECK(g.count(re_kind::ptrs) == pos.size());
    for (const auto& re : pos) CHECK(g.at(re.subcarrier, re.symbol) == c.transmitted_pilot());
    mark_vacant(g, pos);
    CHECK(g.count(re_kind::ptrs) == 0);
    CHECK(g.count(re_kind::vacant) == pos.size());
}

TEST_CASE("chunk table lookup") {
    const chunk_config cfg;
    CHECK_FALSE(chunk_params_for_bandwidth(cfg, 1).has_value());
    CHECK(chunk_params_for_bandwidth(cfg, 2) == chunk_params{2, 2});
    CHECK(chunk_params_for_bandwidth(cfg, 7) == chunk_params{2, 2});
    CHECK(chunk_params_for_bandwidth(cfg, 8) == chunk_params{2, 4});
    CHECK(chunk_params_for_bandwidth(cfg, 16) == chunk_params{4, 2});
    CHECK(chunk_params_for_bandwidth(cfg, 32) == chunk_params{4, 4});
    CHECK(chunk_params_for_bandwidth(cfg, 47) == chunk_params{4, 4});
    CHECK(chunk_params_for_bandwidth(cfg, 48) == chunk_params{8, 4});
    CHECK(chunk_params_for_bandwidth(cfg, 275) == chunk_params{8, 4});
    chunk_config bad;
    bad.rb_thresholds = {2, 8, 8, 32, 48};
    CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("pre-DFT chunks sit at interval tails") {
    CHECK(pre_dft_positions(2, 2, 24) == std::vector<int>{10, 11, 22, 23});
    CHECK(pre_dft_positions(4, 2, 10) == std::vector<int>{0, 1, 3, 4, 5, 6, 8, 9});
    for (int m : {24, 96, 384, 3300}) {
        for (const auto& p : kChunkTable) {
            if (p.x * p.k > m) continue;
            const auto pos = pre_dft_positions(p.x, p.k, m);
            CHECK(pos.size() == static_cast<std::size_t>(p.x * p.k));
            CHECK(std::adjacent_find(pos.begin(), pos.end(), std::greater_equal<>()) == pos.end());
            CHECK(pos.front() >= 0);
            CHECK(pos.back() == m - 1);
        }
    }
    CHECK_THROWS(pre_dft_positions(4, 4, 12));
}

TEST_CASE("pre-DFT RE positions follow the time density") {
    const auto res = pre_dft_re_positions({2, 2}, 24, 5, 2);
    CHECK(res.size() == 12);
    for (const auto& re : res) CHECK(re.symbol % 2 == 0);
}

TEST_CASE("multi-TRP layout") {
    const ptrs_config a{.freq_density_rb = 2, .rb_offset = 0};
    const ptrs_config b{.freq_density_rb = 2, .rb_offset = 1};
    const ptrs_config ok[] = {a, b};
    const auto sets = multi_trp_layout(ok, 8, 14);
    REQUIRE(sets.size() == 2);
    CHECK(collision_fraction(sets[0], sets[1]) == 0.0);

    const ptrs_config clash[] = {a, b, a};
    try {
        (void)multi_trp_layout(clash, 8, 14);
        FAIL("expected collision_error");
    } catch (const collision_error& e) {
        CHECK(e.trp_a == 0);
        CHECK(e.trp_b == 2);
        CHECK(e.overlap == ptrs_re_positions(a, 8, 14));
    }
}

TEST_CASE("collision fraction against a set intersection") {
    const ptrs_config a{.time_density = 1, .freq_density_rb = 1};
    const ptrs_config b{.time_density = 2, .freq_density_rb = 2};
    const auto sa = ptrs_re_positions(a, 10, 14);
    const auto sb = ptrs_re_positions(b, 10, 14);
    std::set<std::pair<int, int>> hb;
    for (const auto& re : sb) hb.emplace(re.subcarrier, re.symbol);
    std::size_t shared = 0;
    for (const auto& re : sa) shared += hb.count({re.subcarrier, re.symbol});
    CHECK(collision_fraction(sa, sb) == doctest::Approx(static_cast<double>(shared) / sa.size()));
    CHECK(collision_fraction({}, sb) == 0.0);
}

TEST_CASE("re set csv") {
    std::ostringstream os;
    const re_set sets[] = {{{0, 0}, {12, 0}}, {{1, 2}}};
    write_re_sets_csv(os, sets);
    CHECK(os.str() == "trp_id,subcarrier,symbol\n0,0,0\n0,12,0\n1,1,2\n");
}
