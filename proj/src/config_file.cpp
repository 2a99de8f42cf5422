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

#include "pnsim/config_file.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace pnsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

[[noreturn]] void fail(int line, std::string_view msg) {
    throw config_error(fmt::format("scenario line {}: {}", line, msg));
}

config_scalar parse_scalar(std::string_view tok, int line) {
    tok = trim(tok);
    if (tok.empty()) fail(line, "missing value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') fail(line, "unterminated string");
        return std::string(tok.substr(1, tok.size() - 2));
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();

    std::string digits;
    for (char c : tok) {
        if (c != '_') digits.push_back(c);
    }
    const bool looks_float = digits.find_first_of(".eE") != std::string::npos;
    const char* first = digits.data() + (digits.front() == '+' ? 1 : 0);
    const char* last = digits.data() + digits.size();
    if (!looks_float) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec == std::errc() && ptr == last) return v;
    }
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec != std::errc() || ptr != last || !std::isfinite(d)) {
        fail(line, fmt::format("cannot parse value '{}'", tok));
    }
    return d;
}

std::vector<config_scalar> parse_array(std::string_view tok, int line) {
    tok = trim(tok);
    if (tok.size() < 2 || tok.back() != ']') fail(line, "arrays must close on the same line");
    tok = trim(tok.substr(1, tok.size() - 2));
    std::vector<config_scalar> out;
    if (tok.empty()) return out;
    std::size_t start = 0;
    bool in_string = false;
    for (std::size_t i = 0; i <= tok.size(); ++i) {
        if (i < tok.size() && tok[i] == '"') in_string = !in_string;
        if (i == tok.size() || (tok[i] == ',' && !in_string)) {
            const auto item = trim(tok.substr(start, i - start));
            if (!item.empty()) out.push_back(parse_scalar(item, line));
            else if (i != tok.size()) fail(line, "empty array element");
            start = i + 1;
        }
    }
    return out;
}

const char* type_name(const config_scalar& s) {
    switch (s.index()) {
        case 0: return "integer";
        case 1: return "float";
        case 2: return "boolean";
        default: return "string";
    }
}

}  // namespace

config_table config_table::parse(std::string_view text) {
    config_table table;
    std::string section;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(name)) fail(line_no, fmt::format("invalid section name '{}'", name));
            section = std::string(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (!valid_key(key)) fail(line_no, fmt::format("invalid key '{}'", key));
        const auto rhs = trim(line.substr(eq + 1));

        config_value v;
        v.line = line_no;
        if (!rhs.empty() && rhs.front() == '[') {
            v.value = parse_array(rhs, line_no);
        } else {
            v.value = parse_scalar(rhs, line_no);
        }
        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (!table.entries_.emplace(full, std::move(v)).second) {
            fail(line_no, fmt::format("duplicate key '{}'", full));
        }
    }
    return table;
}

const config_value* config_table::find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
}

namespace {

template <class T>
T scalar_as(const config_scalar& s, const std::string& key, int line);

template <>
std::int64_t scalar_as<std::int64_t>(const config_scalar& s, const std::string& key, int line) {
    if (const auto* v = std::get_if<std::int64_t>(&s)) return *v;
    fail(line, fmt::format("'{}' must be an integer, got {}", key, type_name(s)));
}

template <>
double scalar_as<double>(const config_scalar& s, const std::string& key, int line) {
    if (const auto* v = std::get_if<double>(&s)) return *v;
    if (const auto* v = std::get_if<std::int64_t>(&s)) return static_cast<double>(*v);
    fail(line, fmt::format("'{}' must be a number, got {}", key, type_name(s)));
}

template <>
bool scalar_as<bool>(const config_scalar& s, const std::string& key, int line) {
    if (const auto* v = std::get_if<bool>(&s)) return *v;
    fail(line, fmt::format("'{}' must be true or false, got {}", key, type_name(s)));
}

template <>
std::string scalar_as<std::string>(const config_scalar& s, const std::string& key, int line) {
    if (const auto* v = std::get_if<std::string>(&s)) return *v;
    fail(line, fmt::format("'{}' must be a string, got {}", key, type_name(s)));
}

template <class T>
T get_scalar(const config_value* v, const std::string& key, T fallback) {
    if (v == nullptr) return fallback;
    const auto* s = std::get_if<config_scalar>(&v->value);
    if (s == nullptr) fail(v->line, fmt::format("'{}' must be a single value, not an array", key));
    return scalar_as<T>(*s, key, v->line);
}

template <class T>
std::vector<T> get_list(const config_value* v, const std::string& key, std::vector<T> fallback) {
    if (v == nullptr) return fallback;
    std::vector<T> out;
    if (const auto* s = std::get_if<config_scalar>(&v->value)) {
        out.push_back(scalar_as<T>(*s, key, v->line));
        return out;
    }
    for (const auto& item : std::get<std::vector<config_scalar>>(v->value)) {
        out.push_back(scalar_as<T>(item, key, v->line));
    }
    return out;
}

}  // namespace

std::int64_t config_table::get_int(const std::string& key, std::int64_t fallback) {
    return get_scalar(find(key), key, fallback);
}

double config_table::get_double(const std::string& key, double fallback) {
    return get_scalar(find(key), key, fallback);
}

bool config_table::get_bool(const std::string& key, bool fallback) {
    return get_scalar(find(key), key, fallback);
}

std::string config_table::get_string(const std::string& key, const std::string& fallback) {
    return get_scalar(find(key), key, fallback);
}

std::vector<std::int64_t> config_table::get_int_list(const std::string& key,
                                                     std::vector<std::int64_t> fallback) {
    return get_list(find(key), key, std::move(fallback));
}

std::vector<double> config_table::get_double_list(const std::string& key, std::vector<double> fallback) {
    return get_list(find(key), key, std::move(fallback));
}

std::vector<std::string> config_table::get_string_list(const std::string& key,
                                                       std::vector<std::string> fallback) {
    return get_list(find(key), key, std::move(fallback));
}

void config_table::reject_unused() const {
    std::string unknown;
    for (const auto& [key, v] : entries_) {
        if (!used_.contains(key)) {
            unknown += fmt::format("{}'{}' (line {})", unknown.empty() ? "" : ", ", key, v.line);
        }
    }
    if (!unknown.empty()) {
        throw config_error("scenario: unknown keys " + unknown);
    }
}

}  // namespace pnsim
