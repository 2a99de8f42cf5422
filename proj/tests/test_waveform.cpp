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
#include <cmath>
#include <set>

#include "pnsim/fft.hpp"
#include "pnsim/waveform.hpp"

using namespace pnsim;

namespace {

cvec naive_dft(std::span<const cf64> x, double sign) {
    const auto n = x.size();
    cvec y(n);
    for (std::size_t k = 0; k < n; ++k) {
        cf64 acc{};
        for (std::size_t i = 0; i < n; ++i) {
            acc += x[i] * std::polar(1.0, sign * kTwoPi * static_cast<double>(k * i % n) / static_cast<double>(n));
        }
        y[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return y;
}

cvec random_vector(std::size_t n, std::uint64_t seed) {
    rng_engine rng(seed);
    std::normal_distribution<double> g;
    cvec v(n);
    for (auto& c : v) c = {g(rng), g(rng)};
    return v;
}

resource_grid random_grid(int n_rb, int n_sym, std::uint64_t seed) {
    const qam_constellation q(16);
    resource_grid g(n_rb, n_sym);
    const auto bits = random_bits(g.count(re_kind::data) * 4, seed);
    return fill_data(g, qam_modulate(bits, q));
}

double max_err(std::span<const cf64> a, std::span<const cf64> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST_CASE("unitary dft agrees with a direct sum") {
    for (std::size_t n : {1u, 2u, 12u, 64u, 96u, 100u, 384u}) {
        const auto x = random_vector(n, n);
        cvec y(n);
        unitary_dft(x, y, fft_direction::forward);
        CHECK(max_err(y, naive_dft(x, -1.0)) < 1e-10);
        unitary_dft(x, y, fft_direction::inverse);
        CHECK(max_err(y, naive_dft(x, +1.0)) < 1e-10);
    }
}

TEST_CASE("dft in place") {
    auto x = random_vector(48, 1);
    const auto ref = naive_dft(x, -1.0);
    unitary_dft(x, x, fft_direction::forward);
    CHECK(max_err(x, ref) < 1e-10);
}

TEST_CASE("subcarrier bins are DC-centred and skip DC") {
    std::set<int> bins;
    for (int i = 0; i < 384; ++i) bins.insert(subcarrier_bin(i, 384, 1024));
    CHECK(bins.size() == 384);
    CHECK_FALSE(bins.contains(0));
    CHECK(subcarrier_bin(0, 384, 1024) == 1024 - 192);
    CHECK(subcarrier_bin(191, 384, 1024) == 1023);
    CHECK(subcarrier_bin(192, 384, 1024) == 1);
    CHECK(subcarrier_bin(383, 384, 1024) == 192);
}

TEST_CASE("ofdm parameters") {
    const auto p = ofdm_params::for_allocation(32);
    CHECK(p.n_used == 384);
    CHECK(p.cp_len == 128);
    CHECK(p.sample_rate_hz() == doctest::Approx(122.88e6));
    CHECK(p.symbol_len() == 1152);
    auto bad = p;
    bad.n_used = 1024;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = p;
    bad.fft_size = 1000;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = p;
    bad.cp_len = -1;
    CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("ofdm round trip without impairments") {
    const auto p = ofdm_params::for_allocation(32);
    const auto g = random_grid(32, 14, 4);
    const auto sig = ofdm_modulate(g, p);
    CHECK(sig.samples.size() == 14u * 1152u);
    CHECK(sig.sample_rate_hz == doctest::Approx(122.88e6));
    // cyclic prefix copies the tail of the body
    for (int n = 0; n < 128; ++n) CHECK(sig.samples[n] == sig.samples[1024 + n]);
    // unit RE power spread over N bins
    CHECK(mean_power(sig.samples) == doctest::Approx(384.0 / 1024.0).epsilon(0.05));
    const auto plane = ofdm_demodulate(sig, p, 14);
    CHECK(max_err(plane, g.cells()) < 1e-12);
    CHECK_THROWS(ofdm_modulate(random_grid(8, 14, 1), p));
}

TEST_CASE("constant phase rotates every RE with no leakage") {
    const auto p = ofdm_params::for_allocation(32);
    const auto g = random_grid(32, 4, 8);
    const auto sig = ofdm_modulate(g, p);
    const double theta0 = 0.7;
    const auto rx = ofdm_demodulate(apply_phase_noise(sig, std::vector<double>(sig.samples.size(), theta0)), p, 4);
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        err += std::norm(rx[i] - g.cells()[i] * std::polar(1.0, theta0));
        ref += std::norm(g.cells()[i]);
    }
    CHECK(10 * std::log10(err / ref + 1e-300) < -120.0);
}

TEST_CASE("transform precoding") {
    const auto x = random_vector(96, 3);
    const auto y = transform_precode(x, 96);
    CHECK(max_err(y, naive_dft(x, -1.0)) < 1e-10);
    CHECK(max_err(transform_decode(y, 96), x) < 1e-12);

    const auto pre = random_grid(8, 3, 5);
    const auto freq = precode_grid(pre);
    CHECK(freq.n_subcarriers() == 96);
    CHECK(max_err(decode_plane(freq.cells(), 96, 3), pre.cells()) < 1e-12);
}

TEST_CASE("awgn") {
    time_signal s{.samples = cvec(200000, cf64{1.0, 0.0}), .sample_rate_hz = 1.0};
    CHECK(apply_awgn(s, kSnrInfinite, 1).samples == s.samples);
    const auto n = apply_awgn(s, 10.0, 2);
    double p = 0.0;
    for (std::size_t i = 0; i < s.samples.size(); ++i) p += std::norm(n.samples[i] - s.samples[i]);
    p /= static_cast<double>(s.samples.size());
    // chi-square with 2n degrees of freedom: relative sd 1/sqrt(n)
    CHECK(std::abs(p / 0.1 - 1.0) < 5.0 / std::sqrt(200000.0));
    CHECK(apply_awgn(s, 10.0, 2).samples == n.samples);
    CHECK_THROWS_AS(apply_awgn(s, -kSnrInfinite, 1), domain_error);
    CHECK_THROWS_AS(add_noise(s, -1.0, 1), domain_error);
}

TEST_CASE("papr helpers") {
    const cvec flat(64, std::polar(1.0, 0.3));
    CHECK(papr_db(flat) == doctest::Approx(0.0).epsilon(1e-12));
    cvec spike(4, cf64{});
    spike[0] = 2.0;
    CHECK(papr_db(spike) == doctest::Approx(10 * std::log10(4.0)));

    std::vector<double> v(1000);
    for (int i = 0; i < 1000; ++i) v[i] = i;
    CHECK(papr_at_ccdf(v, 1e-3) == 998.0);
    CHECK(papr_at_ccdf(v, 0.5) == 499.0);
    const double th[] = {-1.0, 499.5, 2000.0};
    const auto c = ccdf_from_values(v, th);
    CHECK(c[0].probability == 1.0);
    CHECK(c[1].probability == doctest::Approx(0.5));
    CHECK(c[2].probability == 0.0);
}

TEST_CASE("oversampled symbol bodies keep the sample power") {
    const auto p = ofdm_params::for_allocation(32);
    const auto g = random_grid(32, 2, 6);
    const auto plain = symbol_bodies(g, p, 1);
    const auto over = symbol_bodies(g, p, 4);
    REQUIRE(plain.size() == 2);
    CHECK(over[0].samples.size() == 4096);
    CHECK(mean_power(over[0].samples) == doctest::Approx(mean_power(plain[0].samples)).epsilon(1e-12));
    // every 4th oversampled sample is the critically sampled body
    for (int n = 0; n < 1024; ++n) CHECK(std::abs(over[1].samples[4 * n] - plain[1].samples[n]) < 1e-12);
}
