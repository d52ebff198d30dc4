// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo_cli/table.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace asyncmimo::cli {

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw InternalError("table row width does not match the header");
    rows.push_back(std::move(row));
}

Format parse_format(const std::string& s)
{
    if (s == "csv")
        return Format::csv;
    if (s == "json")
        return Format::json;
    throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

namespace {

std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string cell_text(const Cell& c)
{
    if (const auto* s = std::get_if<std::string>(&c))
        return *s;
    if (const auto* i = std::get_if<long long>(&c))
        return std::to_string(*i);
    return fmt_num(std::get<double>(c));
}

} // namespace

void write_table(std::ostream& os, const Table& t, const RunConfig& cfg, Format fmt)
{
    const std::string hash = hex64(cfg.hash());
    if (fmt == Format::csv) {
        os << "# asyncmimo " << ASYNCMIMO_VERSION << "\n";
        os << "# command = " << t.command << "\n";
        os << "# seed = " << cfg.get("run.seed") << "\n";
        os << "# config_hash = " << hash << "\n";
        for (const auto& [k, v] : t.notes)
            os << "# " << k << " = " << v << "\n";
        for (const auto& l : cfg.canonical_lines())
            os << "# cfg " << l << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << cell_text(r[i]);
            os << "\n";
        }
        return;
    }

    // Numbers go through fmt_num so JSON and CSV carry identical digits.
    using nlohmann::ordered_json;
    ordered_json meta;
    meta["tool"] = "asyncmimo";
    meta["version"] = ASYNCMIMO_VERSION;
    meta["command"] = t.command;
    meta["seed"] = cfg.get("run.seed");
    meta["config_hash"] = hash;
    for (const auto& [k, v] : t.notes)
        meta[k] = v;
    ordered_json conf = ordered_json::object();
    for (const auto& k : RunConfig::keys())
        conf[k] = cfg.get(k);
    meta["config"] = conf;

    std::string out = "{\"metadata\":" + meta.dump() + ",\"columns\":" + ordered_json(t.columns).dump() + ",\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += r ? ",\n{" : "\n{";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out += (i ? "," : "") + ordered_json(t.columns[i]).dump() + ":";
            const Cell& c = t.rows[r][i];
            if (const auto* s = std::get_if<std::string>(&c)) {
                out += ordered_json(*s).dump();
            } else {
                const std::string txt = cell_text(c);
                out += (txt == "nan" || txt == "inf" || txt == "-inf") ? ordered_json(txt).dump() : txt;
            }
        }
        out += "}";
    }
    out += "\n]}\n";
    os << out;
}

} // namespace asyncmimo::cli
