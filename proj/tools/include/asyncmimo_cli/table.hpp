// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo_cli/run_config.hpp"

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace asyncmimo::cli {

using Cell = std::variant<std::string, long long, double>;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> notes; // extra metadata

    void add(std::vector<Cell> row);
};

enum class Format { csv, json };
Format parse_format(const std::string& s);

void write_table(std::ostream& os, const Table& t, const RunConfig& cfg, Format fmt);

} // namespace asyncmimo::cli
