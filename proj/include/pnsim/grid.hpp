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
#include <iosfwd>
#include <span>
#include <vector>

#include "pnsim/common.hpp"

namespace pnsim {

inline constexpr int kSubcarriersPerRb = 12;

enum class re_kind : std::uint8_t { data, ptrs, vacant };

const char* to_string(re_kind kind);

/// One resource element: subcarrier (row) and OFDM symbol (column).
struct re_index {
    int subcarrier = 0;
    int symbol = 0;

    friend auto operator<=>(const re_index&, const re_index&) = default;
};

/// Sorted, duplicate-free list of resource elements, ordered by
/// (subcarrier, symbol).
using re_set = std::vector<re_index>;

/// Subcarrier x symbol matrix of complex values with a parallel label plane.
/// Storage is symbol-major: all subcarriers of symbol 0, then symbol 1, ...
/// New grids are all-Data and zero-valued.
class resource_grid {
public:
    resource_grid() = default;
    resource_grid(int n_rb, int n_symbols);

    /// Grid with an explicit subcarrier count (not necessarily a multiple of
    /// 12). Used for pre-DFT sample planes.
    static resource_grid with_subcarriers(int n_subcarriers, int n_symbols);

    [[nodiscard]] int n_rb() const { return n_subcarriers_ / kSubcarriersPerRb; }
    [[nodiscard]] int n_subcarriers() const { return n_subcarriers_; }
    [[nodiscard]] int n_symbols() const { return n_symbols_; }
    [[nodiscard]] std::size_t size() const { return cells_.size(); }

    [[nodiscard]] cf64 at(int subcarrier, int symbol) const { return cells_[offset(subcarrier, symbol)]; }
    [[nodiscard]] re_kind label(int subcarrier, int symbol) const {
        return labels_[offset(subcarrier, symbol)];
    }

    /// Writes a PT-RS value and labels the RE Ptrs. This is the only way a
    /// cell becomes Ptrs-labeled.
    void put_ptrs(re_index re, cf64 value);
    /// Marks the RE Vacant and zeroes it.
    void set_vacant(re_index re);

    /// Column view of one OFDM symbol.
    [[nodiscard]] std::span<const cf64> symbol(int symbol) const;
    [[nodiscard]] std::span<cf64> symbol(int symbol);

    /// Replaces the cell values, keeping labels. Size must match.
    void assign_cells(std::span<const cf64> cells);
    [[nodiscard]] std::span<const cf64> cells() const { return cells_; }
    [[nodiscard]] std::span<const re_kind> labels() const { return labels_; }

    [[nodiscard]] std::size_t count(re_kind kind) const;

    friend bool operator==(const resource_grid&, const resource_grid&) = default;

private:
    [[nodiscard]] std::size_t offset(int subcarrier, int symbol) const;
    [[nodiscard]] std::size_t offset(re_index re) const { return offset(re.subcarrier, re.symbol); }

    int n_subcarriers_ = 0;
    int n_symbols_ = 0;
    cvec cells_;
    std::vector<re_kind> labels_;
};

/// Gray-labeled square QAM with unit average power. The first half of each
/// symbol's bits selects the in-phase level, the second half the quadrature
/// level; per axis a bit value of 0 in the leading position is the positive
/// half-plane (QPSK: 00 -> (1+j)/sqrt2, 01 -> (1-j)/sqrt2, 11 -> (-1-j)/sqrt2,
/// 10 -> (-1+j)/sqrt2).
class qam_constellation {
public:
    /// order in {4, 16, 64, 256}; anything else is a config_error.
    explicit qam_constellation(int order);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int bits_per_symbol() const { return bits_; }
    /// points()[label] for label in [0, order).
    [[nodiscard]] std::span<const cf64> points() const { return points_; }

    /// Hard decision for one symbol, returns the label.
    [[nodiscard]] unsigned decide(cf64 symbol) const;

private:
    int order_;
    int bits_;
    int levels_;  // per axis
    double scale_;
    cvec points_;
};

using bit_vector = std::vector<std::uint8_t>;

/// Uniform random bits (values 0/1).
bit_vector random_bits(std::size_t count, std::uint64_t seed);

cvec qam_modulate(std::span<const std::uint8_t> bits, const qam_constellation& constellation);
/// Minimum-distance hard decisions.
bit_vector qam_demodulate(std::span<const cf64> symbols, const qam_constellation& constellation);

/// Writes `symbols` into the Data REs, subcarrier-first within a symbol and
/// symbols left to right. Ptrs and Vacant cells are untouched.
resource_grid fill_data(resource_grid grid, std::span<const cf64> symbols);

/// Values of the Data REs of `values` in fill order, using `layout`'s labels.
/// `values` may be any same-shape plane (e.g. an equalized receive grid).
cvec extract_data(const resource_grid& layout, std::span<const cf64> values);
cvec extract_data(const resource_grid& grid);

/// subcarrier,symbol,re_kind,real,imag
void write_grid_csv(std::ostream& os, const resource_grid& grid);

}  // namespace pnsim
