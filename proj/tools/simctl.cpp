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

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "pnsim/phase_noise.hpp"
#include "pnsim/scenario.hpp"
#include "pnsim/simctl.hpp"

namespace {

int cmd_run(const std::string& file, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::optional<int> drops, int jobs) {
    pnsim::scenario sc = pnsim::load_scenario(file);
    if (seed) sc.base_seed = *seed;
    if (drops) sc.n_drops = *drops;
    sc.validate();
    for (const auto& path : pnsim::run_experiment(sc, out_dir, jobs)) {
        std::cout << path.string() << '\n';
    }
    return 0;
}

int cmd_psd(const std::string& model_name, const std::string& out, std::optional<double> carrier,
            bool estimate, std::size_t samples, std::size_t segment, std::uint64_t seed) {
    const bool is_b = model_name == "set-b";
    const double fc = carrier.value_or(is_b ? 60e9 : 30e9);
    const auto model = pnsim::pole_zero_psd_model::named(model_name, fc);
    std::ofstream os(out, std::ios::binary);
    if (!os) throw pnsim::error(fmt::format("cannot write '{}'", out));

    if (estimate) {
        const double fs = 122.88e6;
        const auto process = pnsim::generate(model, fs, samples, seed);
        pnsim::write_psd_csv(os, pnsim::estimate_psd(process, segment, 0.5));
        return 0;
    }
    // Model curve on a log grid, 1 kHz to 100 MHz, 20 points per decade.
    std::vector<pnsim::psd_point> points;
    for (int i = 0; i <= 100; ++i) {
        const double f = std::pow(10.0, 3.0 + i / 20.0);
        points.push_back({f, pnsim::psd_at(model, f)});
    }
    pnsim::write_psd_csv(os, points);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-noise / PT-RS link-level simulator"};
    app.require_subcommand(1);

    std::string file, out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "Run the experiment described by a scenario file");
    run->add_option("scenario", file, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override base_seed");
    run->add_option("--drops", drops, "Override n_drops");
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    std::string model, psd_out;
    std::optional<double> carrier;
    bool estimate = false;
    std::size_t samples = std::size_t{1} << 20;
    std::size_t segment = 8192;
    std::uint64_t psd_seed = 1;
    auto* psd = app.add_subcommand("psd", "Write a phase-noise PSD curve");
    psd->add_option("model", model, "set-a or set-b")->required()->check(CLI::IsMember({"set-a", "set-b"}));
    psd->add_option("--out", psd_out, "Output CSV")->required();
    psd->add_option("--carrier", carrier, "Carrier frequency, Hz");
    psd->add_flag("--estimate", estimate, "Welch estimate of generated noise instead of the model curve");
    psd->add_option("--samples", samples, "Generated samples (with --estimate)");
    psd->add_option("--segment", segment, "Welch segment length (with --estimate)");
    psd->add_option("--seed", psd_seed, "Generator seed (with --estimate)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(file, out_dir, seed, drops, jobs);
        return cmd_psd(model, psd_out, carrier, estimate, samples, segment, psd_seed);
    } catch (const std::exception& e) {
        std::cerr << "simctl: " << e.what() << '\n';
        return 2;
    }
}
