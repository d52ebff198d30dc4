// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo_cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace asyncmimo::cli {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults()
{
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"delay.K", "auto"}, // mixture size; auto: link.K
        {"delay.hi", "1"},
        {"delay.lo", "0"},
        {"delay.model", "mixture"},
        {"delay.point", "0"},
        {"geometry.R", "1000"},
        {"geometry.r_h", "100"},
        {"geometry.sigma_db", "8"},
        {"geometry.v", "1.8"},
        {"link.E_d", "10"},
        {"link.K", "5"},
        {"link.M", "64"},
        {"link.N", "64"},
        {"link.Np", "auto"},
        {"link.beta", "ones"},
        {"link.e", "0.5"},
        {"link.e_s", "auto"},
        {"link.e_t", "auto"},
        {"link.rho_d_db", "20"},
        {"pilot.cyclic_guard", "true"},
        {"pilot.kind", "hadamard"},
        {"pulse.family", "rect"},
        {"pulse.rolloff", "0.5"},
        {"pulse.sidelobes", "3"},
        {"run.grid_step", "0.005"},
        {"run.receiver", "mrc-perfect"},
        {"run.seed", "1"},
        {"run.theorem", "none"},
        {"run.trials", "10000"},
        {"sweep.K", "2..16:2"},
        {"sweep.M", "64,128,256,512,1024,2048,4096"},
        {"sweep.scaling", "over-M"},
    };
    return d;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end)
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v)
{
    long long x = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end)
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

} // namespace

std::uint64_t fnv1a64(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fmt_num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    (void)ec;
    return std::string(buf, p);
}

RunConfig::RunConfig()
{
    for (const auto& [k, v] : defaults())
        values_[k] = v;
}

const std::vector<std::string>& RunConfig::keys()
{
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& kv : defaults())
            out.push_back(kv.first);
        return out;
    }();
    return k;
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("unknown config key '" + key + "'");
    const std::string v = trim(value);
    if (v.empty())
        throw ConfigError(key + ": empty value");
    it->second = v;
}

const std::string& RunConfig::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

void RunConfig::apply_override(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::load_text(const std::string& text, const std::string& origin)
{
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    // A result file written by the tool: only its "# cfg" lines matter.
    const bool result_file = trim(text.substr(0, text.find('\n'))).rfind("# asyncmimo", 0) == 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.rfind("# cfg ", 0) == 0)
            t = trim(t.substr(6));
        else if (result_file)
            continue;
        else if (const auto hash = t.find('#'); hash != std::string::npos)
            t = trim(t.substr(0, hash));
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            set(trim(t.substr(0, eq)), t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void RunConfig::load_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    load_text(ss.str(), path);
}

std::vector<std::string> RunConfig::canonical_lines() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        out.push_back(k + " = " + v);
    return out;
}

std::string RunConfig::canonical_text() const
{
    std::string s;
    for (const auto& l : canonical_lines())
        s += l + "\n";
    return s;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_text()); }

int RunConfig::get_int(const std::string& key) const
{
    const long long v = to_int(key, get(key));
    if (v < -2147483647LL || v > 2147483647LL)
        throw ConfigError(key + ": out of range");
    return static_cast<int>(v);
}

double RunConfig::get_double(const std::string& key) const { return to_double(key, get(key)); }

bool RunConfig::get_bool(const std::string& key) const
{
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& s : split(get(key), ','))
        out.push_back(to_double(key, s));
    return out;
}

std::vector<int> RunConfig::get_int_list(const std::string& key) const
{
    const std::string& v = get(key);
    std::vector<int> out;
    if (const auto dots = v.find(".."); dots != std::string::npos) {
        std::string hi_part = v.substr(dots + 2);
        long long step = 1;
        if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
            step = to_int(key, trim(hi_part.substr(colon + 1)));
            hi_part = hi_part.substr(0, colon);
        }
        const long long lo = to_int(key, trim(v.substr(0, dots)));
        const long long hi = to_int(key, trim(hi_part));
        if (step < 1 || hi < lo || (hi - lo) / step > 100000)
            throw ConfigError(key + ": bad range '" + v + "'");
        for (long long x = lo; x <= hi; x += step)
            out.push_back(static_cast<int>(x));
        return out;
    }
    for (const auto& s : split(v, ','))
        out.push_back(static_cast<int>(to_int(key, s)));
    return out;
}

Pulse RunConfig::pulse() const
{
    switch (parse_pulse_family(get("pulse.family"))) {
    case PulseFamily::rectangular: return Pulse::rectangular();
    case PulseFamily::root_raised_cosine: return Pulse::root_raised_cosine(get_double("pulse.rolloff"), get_int("pulse.sidelobes"));
    }
    throw ConfigError("pulse.family: unsupported");
}

DelayDist RunConfig::delay(int K) const
{
    const auto& model = get("delay.model");
    if (model == "mixture") {
        const int k = get("delay.K") == "auto" ? K : get_int("delay.K");
        return DelayDist::standard_mixture(k);
    }
    if (model == "point")
        return DelayDist::point(get_double("delay.point"));
    if (model == "uniform")
        return DelayDist::uniform(get_double("delay.lo"), get_double("delay.hi"));
    throw ConfigError("delay.model: expected mixture, point or uniform, got '" + model + "'");
}

LinkConfig RunConfig::link() const
{
    LinkConfig c;
    c.K = get_int("link.K");
    c.M = get_int("link.M");
    c.N = get_int("link.N");
    c.N_p = get("link.Np") == "auto" ? 0 : get_int("link.Np");
    if (get("link.Np") != "auto" && c.N_p < 1)
        throw ConfigError("link.Np must be >= 1 or auto");
    c.rho_d = std::pow(10.0, get_double("link.rho_d_db") / 10.0);
    c.E_d = get_double("link.E_d");
    c.e = get_double("link.e");
    c.e_s = get("link.e_s") == "auto" ? -1.0 : get_double("link.e_s");
    if (get("link.e_s") != "auto" && c.e_s < 0.0)
        throw ConfigError("link.e_s must lie in [0, 1]");
    if (get("link.e_t") != "auto")
        c.e_t = get_double_list("link.e_t");
    c.pilot_kind = parse_pilot_kind(get("pilot.kind"));
    c.zc_cyclic_guard = get_bool("pilot.cyclic_guard");
    c.seed = seed();

    const auto& beta = get("link.beta");
    if (beta == "ones") {
        c.beta.assign(std::max(c.K, 0), 1.0);
    } else if (beta == "random") {
        if (c.K < 1)
            throw ConfigError("link.K must be >= 1");
        Geometry g;
        g.v = get_double("geometry.v");
        g.sigma_db = get_double("geometry.sigma_db");
        g.r_h = get_double("geometry.r_h");
        g.R = get_double("geometry.R");
        // Path losses use a stream far away from the per-trial streams.
        RandomStream rng(c.seed, 0xb0000000'00000000ULL);
        c.beta = gen_pathloss(c.K, g, rng);
    } else {
        c.beta = get_double_list("link.beta");
    }
    return c;
}

ReceiverKind RunConfig::receiver() const { return parse_receiver(get("run.receiver")); }

} // namespace asyncmimo::cli
