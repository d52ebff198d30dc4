// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include <asyncmimo/asyncmimo.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace asyncmimo::cli {

// Flat dotted key/value configuration. Every key has a default; unknown keys
// are rejected when set.
class RunConfig {
public:
    RunConfig();

    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;
    bool has_key(const std::string& key) const { return values_.count(key) != 0; }
    static const std::vector<std::string>& keys();

    // Parses "key = value" lines. '#' starts a comment, except that lines of
    // the form "# cfg key = value" (as written into result files) are read as
    // settings, so any output file can be replayed as a config.
    void load_text(const std::string& text, const std::string& origin = "<text>");
    void load_file(const std::string& path);
    void apply_override(const std::string& assignment); // "key=value"

    // Canonical "key = value" lines, sorted by key.
    std::vector<std::string> canonical_lines() const;
    std::string canonical_text() const;
    std::uint64_t hash() const; // FNV-1a over canonical_text()

    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const; // "a,b,c" or "a..b" or "a..b:step"

    Pulse pulse() const;
    DelayDist delay(int K) const;
    LinkConfig link() const;       // K from link.K
    ReceiverKind receiver() const;
    std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("run.seed")); }

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(const std::string& s);

// Formats with 9 significant digits, locale independent.
std::string fmt_num(double v);

} // namespace asyncmimo::cli
