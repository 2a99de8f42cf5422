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
#include <bit>
#include <cmath>

#include "pnsim/grid.hpp"

using namespace pnsim;

TEST_CASE("new grid is all data and zero") {
    resource_grid g(4, 14);
    CHECK(g.n_subcarriers() == 48);
    CHECK(g.n_symbols() == 14);
    CHECK(g.count(re_kind::data) == 48 * 14);
    CHECK(std::all_of(g.cells().begin(), g.cells().end(), [](cf64 c) { return c == cf64{}; }));
    CHECK_THROWS_AS(resource_grid(0, 14), config_error);
    CHECK_THROWS_AS(resource_grid(4, 0), config_error);
}

TEST_CASE("put_ptrs and set_vacant") {
    resource_grid g(2, 3);
    g.put_ptrs({5, 1}, {2.0, 0.0});
    CHECK(g.label(5, 1) == re_kind::ptrs);
    CHECK(g.at(5, 1) == cf64{2.0, 0.0});
    g.set_vacant({5, 1});
    CHECK(g.label(5, 1) == re_kind::vacant);
    CHECK(g.at(5, 1) == cf64{});
    CHECK_THROWS(g.put_ptrs({24, 0}, {1, 0}));
    CHECK_THROWS(g.set_vacant({0, 3}));
}

TEST_CASE("storage is symbol-major") {
    resource_grid g(1, 2);
    g.put_ptrs({3, 1}, {7, 0});
    CHECK(g.cells()[12 + 3] == cf64{7, 0});
    CHECK(g.symbol(1)[3] == cf64{7, 0});
}

TEST_CASE("fill_data is frequency-first and skips non-data cells") {
    resource_grid g(1, 2);
    g.put_ptrs({0, 0}, {9, 0});
    g.set_vacant({1, 1});
    cvec syms(g.count(re_kind::data));
    for (std::size_t i = 0; i < syms.size(); ++i) syms[i] = {static_cast<double>(i), 0.0};
    const auto f = fill_data(g, syms);
    CHECK(f.at(0, 0) == cf64{9, 0});
    CHECK(f.at(1, 0) == cf64{0, 0});
    CHECK(f.at(11, 0) == cf64{10, 0});
    CHECK(f.at(0, 1) == cf64{11, 0});
    CHECK(f.at(1, 1) == cf64{});
    CHECK(f.at(2, 1) == cf64{12, 0});
    CHECK(extract_data(f) == syms);
    CHECK_THROWS(fill_data(g, cvec(3)));
}

TEST_CASE("constellations have unit mean power") {
    for (int m : {4, 16, 64, 256}) {
        qam_constellation q(m);
        CHECK(q.bits_per_symbol() == std::countr_zero(static_cast<unsigned>(m)));
        double p = 0.0;
        for (auto c : q.points()) p += std::norm(c);
        CHECK(p / m == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(qam_constellation(8), config_error);
    CHECK_THROWS_AS(qam_constellation(32), config_error);
}

TEST_CASE("qpsk labels") {
    qam_constellation q(4);
    const double a = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(q.points()[0b00] - cf64{a, a}) < 1e-15);
    CHECK(std::abs(q.points()[0b01] - cf64{a, -a}) < 1e-15);
    CHECK(std::abs(q.points()[0b11] - cf64{-a, -a}) < 1e-15);
    CHECK(std::abs(q.points()[0b10] - cf64{-a, a}) < 1e-15);
}

TEST_CASE("gray labelling: nearest neighbours differ in one bit") {
    for (int m : {4, 16, 64, 256}) {
        qam_constellation q(m);
        const auto pts = q.points();
        double dmin = 1e9;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
        int pairs = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                if (std::abs(pts[i] - pts[j]) < dmin * (1 + 1e-9)) {
                    ++pairs;
                    CHECK(std::popcount(static_cast<unsigned>(i ^ j)) == 1);
                }
            }
        }
        const int l = static_cast<int>(std::lround(std::sqrt(m)));
        CHECK(pairs == 2 * l * (l - 1));
    }
}

TEST_CASE("decide agrees with brute-force nearest point") {
    rng_engine rng(3);
    std::normal_distribution<double> g(0.0, 0.7);
    for (int m : {4, 16, 64, 256}) {
        qam_constellation q(m);
        for (int trial = 0; trial < 2000; ++trial) {
            const cf64 y{g(rng), g(rng)};
            unsigned best = 0;
            for (unsigned i = 1; i < q.points().size(); ++i) {
                if (std::norm(y - q.points()[i]) < std::norm(y - q.points()[best])) best = i;
            }
            CHECK(q.decide(y) == best);
        }
    }
}

TEST_CASE("modulate/demodulate round trip") {
    for (int m : {4, 16, 64, 256}) {
        qam_constellation q(m);
        const auto bits = random_bits(q.bits_per_symbol() * 500, 17);
        const auto syms = qam_modulate(bits, q);
        CHECK(syms.size() == 500);
        CHECK(qam_demodulate(syms, q) == bits);
    }
    CHECK_THROWS(qam_modulate(bit_vector(5), qam_constellation(16)));
}

TEST_CASE("random bits are deterministic and balanced") {
    const auto a = random_bits(100000, 9);
    CHECK(a == random_bits(100000, 9));
    CHECK(a != random_bits(100000, 10));
    const auto ones = std::count(a.begin(), a.end(), 1);
    CHECK(ones + std::count(a.begin(), a.end(), 0) == 100000);
    // 5 sigma of a fair binomial
    CHECK(std::abs(static_cast<double>(ones) - 50000.0) < 5 * std::sqrt(25000.0));
}
