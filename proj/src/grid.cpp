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

#include "pnsim/grid.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pnsim {

const char* to_string(re_kind kind) {
    switch (kind) {
        case re_kind::data: return "data";
        case re_kind::ptrs: return "ptrs";
        case re_kind::vacant: return "vacant";
    }
    return "?";
}

resource_grid::resource_grid(int n_rb, int n_symbols) {
    if (n_rb < 1 || n_symbols < 1) {
        throw config_error(fmt::format("resource grid: need n_rb >= 1 and n_symbols >= 1 (got {}, {})",
                                       n_rb, n_symbols));
    }
    n_subcarriers_ = n_rb * kSubcarriersPerRb;
    n_symbols_ = n_symbols;
    const auto n = static_cast<std::size_t>(n_subcarriers_) * n_symbols_;
    cells_.assign(n, cf64{});
    labels_.assign(n, re_kind::data);
}

resource_grid resource_grid::with_subcarriers(int n_subcarriers, int n_symbols) {
    if (n_subcarriers < 1 || n_symbols < 1) {
        throw config_error("resource grid: dimensions must be positive");
    }
    resource_grid g;
    g.n_subcarriers_ = n_subcarriers;
    g.n_symbols_ = n_symbols;
    const auto n = static_cast<std::size_t>(n_subcarriers) * n_symbols;
    g.cells_.assign(n, cf64{});
    g.labels_.assign(n, re_kind::data);
    return g;
}

std::size_t resource_grid::offset(int subcarrier, int symbol) const {
    if (subcarrier < 0 || subcarrier >= n_subcarriers_ || symbol < 0 || symbol >= n_symbols_) {
        throw domain_error(fmt::format("resource grid: RE ({}, {}) outside {}x{} grid", subcarrier,
                                       symbol, n_subcarriers_, n_symbols_));
    }
    return static_cast<std::size_t>(symbol) * n_subcarriers_ + subcarrier;
}

void resource_grid::put_ptrs(re_index re, cf64 value) {
    const auto i = offset(re);
    cells_[i] = value;
    labels_[i] = re_kind::ptrs;
}

void resource_grid::set_vacant(re_index re) {
    const auto i = offset(re);
    cells_[i] = cf64{};
    labels_[i] = re_kind::vacant;
}

std::span<const cf64> resource_grid::symbol(int symbol) const {
    return std::span<const cf64>(cells_).subspan(offset(0, symbol), n_subcarriers_);
}

std::span<cf64> resource_grid::symbol(int symbol) {
    return std::span<cf64>(cells_).subspan(offset(0, symbol), n_subcarriers_);
}

void resource_grid::assign_cells(std::span<const cf64> cells) {
    if (cells.size() != cells_.size()) {
        throw domain_error(fmt::format("resource grid: {} values for {} cells", cells.size(),
                                       cells_.size()));
    }
    std::copy(cells.begin(), cells.end(), cells_.begin());
}

std::size_t resource_grid::count(re_kind kind) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kind));
}

// ---------------------------------------------------------------------------

qam_constellation::qam_constellation(int order) : order_(order) {
    switch (order) {
        case 4: bits_ = 2; break;
        case 16: bits_ = 4; break;
        case 64: bits_ = 6; break;
        case 256: bits_ = 8; break;
        default:
            throw config_error(fmt::format("qam: unsupported order {} (expected 4, 16, 64 or 256)", order));
    }
    levels_ = 1 << (bits_ / 2);
    // mean |point|^2 of unnormalized square QAM is 2(M-1)/3
    scale_ = 1.0 / std::sqrt(2.0 * (order_ - 1) / 3.0);

    const int half = bits_ / 2;
    const auto amplitude = [&](unsigned gray) {
        unsigned index = gray;
        for (unsigned shift = 1; shift < 32; shift <<= 1) {
            index ^= index >> shift;
        }
        return static_cast<double>(levels_ - 1 - 2 * static_cast<int>(index));
    };
    points_.resize(order_);
    for (unsigned label = 0; label < static_cast<unsigned>(order_); ++label) {
        const unsigned gi = label >> half;
        const unsigned gq = label & ((1u << half) - 1);
        points_[label] = scale_ * cf64(amplitude(gi), amplitude(gq));
    }
}

unsigned qam_constellation::decide(cf64 symbol) const {
    const int half = bits_ / 2;
    const auto axis = [&](double v) {
        const double raw = std::round(((levels_ - 1) - v / scale_) / 2.0);
        const auto index = static_cast<unsigned>(std::clamp(raw, 0.0, double(levels_ - 1)));
        return index ^ (index >> 1);
    };
    return (axis(symbol.real()) << half) | axis(symbol.imag());
}

bit_vector random_bits(std::size_t count, std::uint64_t seed) {
    rng_engine rng(seed);
    bit_vector bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) {
            word = rng();
        }
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
}

cvec qam_modulate(std::span<const std::uint8_t> bits, const qam_constellation& constellation) {
    const auto b = static_cast<std::size_t>(constellation.bits_per_symbol());
    if (bits.size() % b != 0) {
        throw domain_error(fmt::format("qam_modulate: {} bits is not a multiple of {}", bits.size(), b));
    }
    cvec out(bits.size() / b);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t i = 0; i < b; ++i) {
            label = (label << 1) | (bits[s * b + i] & 1u);
        }
        out[s] = constellation.points()[label];
    }
    return out;
}

bit_vector qam_demodulate(std::span<const cf64> symbols, const qam_constellation& constellation) {
    const auto b = static_cast<std::size_t>(constellation.bits_per_symbol());
    bit_vector bits(symbols.size() * b);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const unsigned label = constellation.decide(symbols[s]);
        for (std::size_t i = 0; i < b; ++i) {
            bits[s * b + i] = static_cast<std::uint8_t>((label >> (b - 1 - i)) & 1u);
        }
    }
    return bits;
}

// ---------------------------------------------------------------------------

resource_grid fill_data(resource_grid grid, std::span<const cf64> symbols) {
    const std::size_t n_data = grid.count(re_kind::data);
    if (symbols.size() != n_data) {
        throw domain_error(fmt::format("fill_data: {} symbols for {} data REs", symbols.size(), n_data));
    }
    cvec cells(grid.cells().begin(), grid.cells().end());
    const auto labels = grid.labels();
    std::size_t next = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (labels[i] == re_kind::data) {
            cells[i] = symbols[next++];
        }
    }
    grid.assign_cells(cells);
    return grid;
}

cvec extract_data(const resource_grid& layout, std::span<const cf64> values) {
    if (values.size() != layout.size()) {
        throw domain_error("extract_data: value plane does not match the grid layout");
    }
    cvec out;
    out.reserve(layout.count(re_kind::data));
    const auto labels = layout.labels();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (labels[i] == re_kind::data) {
            out.push_back(values[i]);
        }
    }
    return out;
}

cvec extract_data(const resource_grid& grid) { return extract_data(grid, grid.cells()); }

void write_grid_csv(std::ostream& os, const resource_grid& grid) {
    os << "subcarrier,symbol,re_kind,real,imag\n";
    for (int l = 0; l < grid.n_symbols(); ++l) {
        for (int k = 0; k < grid.n_subcarriers(); ++k) {
            const cf64 v = grid.at(k, l);
            fmt::print(os, "{},{},{},{},{}\n", k, l, to_string(grid.label(k, l)), v.real(), v.imag());
        }
    }
}

}  // namespace pnsim
