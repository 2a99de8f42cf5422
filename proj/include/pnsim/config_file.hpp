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

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pnsim/common.hpp"

namespace pnsim {

// Reader for the TOML subset used by scenario files:
//
//   # comment
//   key = 1            integers, floats (including inf / -inf), "strings",
//   [section]          true / false, and single-line [arrays] of scalars
//   key = [1, 2.5, "x"]
//
// Keys are addressed as "section.key" ("key" before the first section).
// Every key must be read by the consumer; leftovers are reported by
// reject_unused() so that typos fail loudly.

using config_scalar = std::variant<std::int64_t, double, bool, std::string>;

struct config_value {
    std::variant<config_scalar, std::vector<config_scalar>> value;
    int line = 0;
};

class config_table {
public:
    static config_table parse(std::string_view text);

    [[nodiscard]] bool has(const std::string& key) const { return entries_.contains(key); }

    std::int64_t get_int(const std::string& key, std::int64_t fallback);
    double get_double(const std::string& key, double fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::string get_string(const std::string& key, const std::string& fallback);
    std::vector<std::int64_t> get_int_list(const std::string& key, std::vector<std::int64_t> fallback);
    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback);
    std::vector<std::string> get_string_list(const std::string& key, std::vector<std::string> fallback);

    /// Throws config_error listing every key that was never read.
    void reject_unused() const;

private:
    const config_value* find(const std::string& key);

    std::map<std::string, config_value> entries_;
    std::set<std::string> used_;
};

}  // namespace pnsim
