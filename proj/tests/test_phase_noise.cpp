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
#include <numeric>
#include <sstream>

#include "pnsim/phase_noise.hpp"

using namespace pnsim;

// Reference values computed independently in double precision with a
// direct evaluation of the pole/zero product.
TEST_CASE("psd_at matches frozen reference values") {
    const auto a = pole_zero_psd_model::set_a(30e9);
    CHECK(psd_at(a, 1e5) == doctest::Approx(-83.357704198218).epsilon(1e-12));
    CHECK(psd_at(a, 1e6) == doctest::Approx(-111.673684232949).epsilon(1e-12));
    CHECK(psd_at(a, 1e7) == doctest::Approx(-128.815074180535).epsilon(1e-12));
    const auto b = pole_zero_psd_model::set_b(60e9);
    CHECK(psd_at(b, 1e5) == doctest::Approx(-82.262351387906).epsilon(1e-12));
    CHECK(psd_at(b, 1e6) == doctest::Approx(-96.253109739154).epsilon(1e-12));
}

TEST_CASE("psd at zero offset is PSD0 plus carrier shift") {
    CHECK(psd_at(pole_zero_psd_model::set_a(30e9), 0.0) == doctest::Approx(-79.4));
    CHECK(psd_at(pole_zero_psd_model::set_b(60e9), 0.0) == doctest::Approx(-70.0));
    CHECK(psd_at(pole_zero_psd_model::set_a(60e9), 0.0) == doctest::Approx(-79.4 + 6.020599913279624));
}

TEST_CASE("carrier shift") {
    CHECK(carrier_shift_db(pole_zero_psd_model::set_a(60e9)) == doctest::Approx(6.020599913279624).epsilon(1e-14));
    CHECK(carrier_shift_db(pole_zero_psd_model::set_a(30e9)) == doctest::Approx(0.0));
    for (double f : {1e4, 3e5, 2e6, 9e6}) {
        const double d = psd_at(pole_zero_psd_model::set_a(60e9), f) - psd_at(pole_zero_psd_model::set_a(30e9), f);
        CHECK(d == doctest::Approx(6.020599913279624).epsilon(1e-12));
    }
}

TEST_CASE("psd terms sum to the model value") {
    const auto a = pole_zero_psd_model::set_a(28e9);
    for (double f : {0.0, 1e3, 5e5, 4e7}) {
        const auto terms = psd_terms_db(a, f);
        CHECK(std::accumulate(terms.begin(), terms.end(), 0.0) == doctest::Approx(psd_at(a, f)).epsilon(1e-12));
    }
}

TEST_CASE("model validation") {
    auto m = pole_zero_psd_model::set_a();
    m.zeros_hz.pop_back();
    CHECK_THROWS_AS(m.validate(), config_error);
    m = pole_zero_psd_model::set_a();
    m.poles_hz[0] = -1.0;
    CHECK_THROWS_AS(m.validate(), config_error);
    m = pole_zero_psd_model::set_a();
    m.carrier_hz = 0.0;
    CHECK_THROWS_AS(m.validate(), config_error);
    CHECK_THROWS_AS(pole_zero_psd_model::named("set-c", 30e9), config_error);
}

TEST_CASE("shaping filter tracks the analog model in band") {
    const double fs = 122.88e6;
    for (const auto& m : {pole_zero_psd_model::set_a(30e9), pole_zero_psd_model::set_b(60e9)}) {
        const auto spec = design_shaping_filter(m, fs);
        CHECK(spec.sections.size() == m.poles_hz.size());
        CHECK(spec.magnitude_db(0.0) == doctest::Approx(0.0).epsilon(1e-9));
        for (double f = 1e4; f <= 1e7; f *= 1.25) {
            CHECK(std::abs(spec.output_psd_dbc_hz(f) - psd_at(m, f)) < 0.25);
        }
    }
}

TEST_CASE("bilinear coefficients") {
    pole_zero_psd_model m;
    m.psd0_dbc_hz = -80.0;
    m.poles_hz = {1e6};
    m.zeros_hz = {4e6};
    m.carrier_hz = m.base_carrier_hz = 1e9;
    const double fs = 100e6;
    const double c = 2 * fs;
    const double kz = c / (2 * kPi * 4e6);
    const double kp = c / (2 * kPi * 1e6);
    const auto spec = design_shaping_filter(m, fs);
    REQUIRE(spec.sections.size() == 1);
    CHECK(spec.sections[0].b0 == doctest::Approx((1 + kz) / (1 + kp)));
    CHECK(spec.sections[0].b1 == doctest::Approx((1 - kz) / (1 + kp)));
    CHECK(spec.sections[0].a1 == doctest::Approx((1 - kp) / (1 + kp)));
    CHECK(spec.gain == doctest::Approx(std::sqrt(1e-8 * fs)));
}

TEST_CASE("design rejects a sample rate below twice a corner frequency") {
    const auto a = pole_zero_psd_model::set_a();
    CHECK_THROWS_AS(design_shaping_filter(a, 60e6), config_error);
    try {
        (void)design_shaping_filter(a, 60e6);
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("40000000") != std::string::npos);
    }
}

TEST_CASE("warm-up length") {
    CHECK(warmup_samples(pole_zero_psd_model::set_a(), 122.88e6) == 9830);
    CHECK(warmup_samples(pole_zero_psd_model::set_b(), 122.88e6) == 196608);
    CHECK(warmup_samples(pole_zero_psd_model::set_b(), 1e9) == (std::size_t{1} << 20));
}

TEST_CASE("generation is deterministic and seed-dependent") {
    const auto a = pole_zero_psd_model::set_a();
    const auto p1 = generate(a, 122.88e6, 4096, 42);
    const auto p2 = generate(a, 122.88e6, 4096, 42);
    const auto p3 = generate(a, 122.88e6, 4096, 43);
    CHECK(p1.samples_rad == p2.samples_rad);
    CHECK(p1.samples_rad != p3.samples_rad);
    CHECK(p1.samples_rad.size() == 4096);
    CHECK_THROWS_AS(generate(a, 122.88e6, 0, 1), domain_error);
}

TEST_CASE("welch segment count") {
    CHECK(welch_segment_count(1 << 20, 8192, 0.5) == ((1 << 20) - 8192) / 4096 + 1);
    CHECK(welch_segment_count(8192, 8192, 0.5) == 1);
    CHECK(welch_segment_count(1000, 8192, 0.5) == 0);
}

TEST_CASE("welch estimate of white noise is flat at variance over fs") {
    // Unit-variance white noise has a flat density 1/fs per sideband.
    rng_engine rng(5);
    std::normal_distribution<double> g;
    std::vector<double> x(1 << 18);
    for (auto& v : x) v = g(rng);
    const double fs = 1e6;
    const auto est = estimate_psd(x, fs, 1024, 0.5);
    CHECK(est.size() == 512);
    CHECK(est.front().frequency_hz == doctest::Approx(fs / 1024));
    CHECK(est.back().frequency_hz == doctest::Approx(fs / 2));
    double mean_lin = 0.0;
    for (const auto& p : est) mean_lin += std::pow(10.0, p.psd_dbc_hz / 10.0);
    mean_lin /= static_cast<double>(est.size());
    CHECK(10 * std::log10(mean_lin * fs) == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("psd csv layout") {
    std::ostringstream os;
    const psd_point pts[] = {{1e3, -80.5}, {2e3, -90.25}};
    write_psd_csv(os, pts);
    CHECK(os.str() == "frequency_hz,psd_dbc_hz\n1000,-80.5\n2000,-90.25\n");
}
