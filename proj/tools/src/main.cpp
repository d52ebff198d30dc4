// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo_cli/run_config.hpp"
#include "asyncmimo_cli/table.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace asyncmimo;
using namespace asyncmimo::cli;

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string K, M, pulse, receiver, theorem, trials, seed;
    std::string format = "csv";
    std::string output = "-";
};

void add_common(CLI::App* sub, CommonArgs& a)
{
    sub->add_option("-c,--config", a.config, "config file (key = value lines)");
    sub->add_option("--set", a.sets, "override, key=value (repeatable)");
    sub->add_option("--K", a.K, "users; a list or range like 2..16 for optimize-e");
    sub->add_option("--M", a.M, "antennas; a list for power-scaling");
    sub->add_option("--pulse", a.pulse, "rect or rrc");
    sub->add_option("--receiver", a.receiver, "mrc-perfect, mrc-imperfect, mrczf-perfect, mrczf-imperfect");
    sub->add_option("--theorem", a.theorem, "closed form 1..4 (rate only)");
    sub->add_option("--trials", a.trials, "Monte Carlo trials");
    sub->add_option("--seed", a.seed, "RNG seed");
    sub->add_option("--format", a.format, "csv or json");
    sub->add_option("-o,--output", a.output, "output path, - for stdout");
}

RunConfig resolve(const std::string& cmd, const CommonArgs& a)
{
    RunConfig cfg;
    if (!a.config.empty())
        cfg.load_file(a.config);
    const bool sweep_K = cmd == "optimize-e";
    const bool sweep_M = cmd == "power-scaling";
    if (!a.K.empty())
        cfg.set(sweep_K ? "sweep.K" : "link.K", a.K);
    if (!a.M.empty())
        cfg.set(sweep_M ? "sweep.M" : "link.M", a.M);
    if (!a.pulse.empty())
        cfg.set("pulse.family", a.pulse);
    if (!a.receiver.empty())
        cfg.set("run.receiver", a.receiver);
    if (!a.theorem.empty())
        cfg.set("run.theorem", a.theorem);
    if (!a.trials.empty())
        cfg.set("run.trials", a.trials);
    if (!a.seed.empty())
        cfg.set("run.seed", a.seed);
    for (const auto& s : a.sets)
        cfg.apply_override(s);
    return cfg;
}

Scenario make_scenario(const RunConfig& cfg)
{
    auto link = cfg.link();
    auto pulse = cfg.pulse();
    auto dist = cfg.delay(link.K);
    return Scenario::make(std::move(link), std::move(pulse), std::move(dist));
}

Table cmd_moments(const RunConfig& cfg)
{
    const auto sc = make_scenario(cfg);
    const auto kind = cfg.receiver();
    const auto mt = sc.moments(kind);
    Table t;
    t.columns = {"table", "l", "j", "k", "t", "lag", "re", "im"};
    const long long L = mt.L;
    for (long long i = -L; i <= L; ++i) {
        t.add({std::string("Eg"), -1LL, -1LL, -1LL, -1LL, i, mt.Eg(static_cast<int>(i)), 0.0});
        t.add({std::string("Eg2"), -1LL, -1LL, -1LL, -1LL, i, mt.Eg2(static_cast<int>(i)), 0.0});
    }
    if (mt.has_pilots) {
        for (int l = 0; l < mt.K; ++l)
            for (int k = 0; k < mt.K; ++k) {
                for (int i = -mt.L; i <= mt.L; ++i) {
                    const cd g = mt.gamma1(l, k, i);
                    t.add({std::string("gamma1"), (long long)l, (long long)k, (long long)k, -1LL, (long long)i, g.real(), g.imag()});
                }
                t.add({std::string("lambda2"), (long long)l, (long long)k, -1LL, -1LL, 0LL, mt.lambda2(l, k), 0.0});
            }
    }
    if (mt.has_zf_perfect) {
        for (int n = 0; n < mt.N; ++n)
            t.add({std::string("xi2"), -1LL, -1LL, -1LL, -1LL, (long long)(mt.ref - n), mt.xi2(n), 0.0});
        t.add({std::string("eps0"), -1LL, -1LL, -1LL, -1LL, 0LL, mt.eps0, 0.0});
        t.notes.emplace_back("z_condition", fmt_num(mt.z_condition));
    }
    if (mt.has_zf_imperfect) {
        for (int l = 0; l < mt.K; ++l) {
            t.add({std::string("u"), (long long)l, -1LL, -1LL, -1LL, 0LL, mt.u[l], 0.0});
            t.add({std::string("v"), (long long)l, -1LL, -1LL, -1LL, 0LL, mt.v[l], 0.0});
            t.notes.emplace_back("gamma_condition_" + std::to_string(l), fmt_num(mt.gamma_condition[l]));
        }
    }
    return t;
}

Table cmd_rate(const RunConfig& cfg)
{
    const auto& th = cfg.get("run.theorem");
    const int theorem = th == "none" ? 0 : cfg.get_int("run.theorem");
    if (theorem != 0 && (theorem < 1 || theorem > 4))
        throw ConfigError("run.theorem must be 1..4 or none");
    const auto kind = theorem ? theorem_receiver(theorem) : cfg.receiver();
    const auto sc = make_scenario(cfg);
    const auto mt = sc.moments(kind);
    const auto stats = second_order_stats(kind, sc.cfg, mt);
    const auto r = theorem ? theorem_rate(theorem, sc.cfg, mt) : rate_from_stats(stats);
    Table t;
    t.columns = {"user", "receiver", "beta", "rate", "signal", "isi", "iui", "noise", "sinr"};
    for (int l = 0; l < sc.cfg.K; ++l)
        t.add({(long long)l, to_string(kind), sc.cfg.beta[l], r.rate[l], r.signal[l], r.isi[l], r.iui[l], r.noise[l], r.sinr(l)});
    t.notes.emplace_back("sum_rate", fmt_num(r.sum_rate()));
    t.notes.emplace_back("approx_bound", fmt_num(approx_error_bound(stats, sc.cfg.M)));
    return t;
}

Table cmd_montecarlo(const RunConfig& cfg)
{
    const auto kind = cfg.receiver();
    const auto sc = make_scenario(cfg);
    const auto mt = sc.moments(kind);
    const auto theory = rate_from_stats(second_order_stats(kind, sc.cfg, mt));
    McOptions opt;
    opt.trials = cfg.get_int("run.trials");
    const auto mc = run_monte_carlo(sc, mt, kind, opt);
    Table t;
    t.columns = {"user", "empirical", "theory", "stderr", "rel_err", "genie", "genie_stderr"};
    auto rel = [](double a, double b) { return b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a); };
    for (int l = 0; l < sc.cfg.K; ++l)
        t.add({std::to_string(l), mc.rate[l], theory.rate[l], mc.rate_se[l], rel(mc.rate[l], theory.rate[l]),
               mc.genie[l], mc.genie_se[l]});
    t.add({std::string("sum"), mc.sum_rate, theory.sum_rate(), mc.sum_rate_se, rel(mc.sum_rate, theory.sum_rate()),
           mc.genie_sum, mc.genie_sum_se});
    t.notes.emplace_back("receiver", to_string(kind));
    t.notes.emplace_back("trials", std::to_string(opt.trials));
    return t;
}

Table cmd_optimize(const RunConfig& cfg)
{
    const auto kind = cfg.receiver();
    const auto pulse = cfg.pulse();
    const auto pilots = parse_pilot_kind(cfg.get("pilot.kind"));
    const double step = cfg.get_double("run.grid_step");
    Table t;
    t.columns = {"K", "receiver", "e_star", "objective"};
    for (int K : cfg.get_int_list("sweep.K")) {
        const auto r = optimize_sampling_origin(kind, K, pulse, cfg.delay(K), step, pilots);
        t.add({(long long)K, to_string(kind), r.e_star, r.objective_star});
    }
    t.notes.emplace_back("objective", kind == ReceiverKind::mrc_perfect ? "saturation SIR" : "sum_l log2(1 + SIR_l)");
    return t;
}

Table cmd_power_scaling(const RunConfig& cfg)
{
    const auto kind = cfg.receiver();
    const auto sc = make_scenario(cfg);
    const auto mt = sc.moments(kind);
    const auto scaling = parse_power_scaling(cfg.get("sweep.scaling"));
    const auto curve = power_scaling_sweep(sc, mt, kind, sc.cfg.E_d, cfg.get_int_list("sweep.M"), scaling);
    Table t;
    t.columns = {"M", "rho_d", "user", "rate", "limit"};
    for (const auto& p : curve.points)
        for (int l = 0; l < sc.cfg.K; ++l)
            t.add({(long long)p.M, p.rho_d, (long long)l, p.rate[l], curve.limit[l]});
    t.notes.emplace_back("receiver", to_string(kind));
    t.notes.emplace_back("scaling", to_string(scaling));
    return t;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"asyncmimo: achievable rates of asynchronous massive MIMO uplinks"};
    app.set_version_flag("--version", std::string(ASYNCMIMO_VERSION));
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        const char* help;
        Table (*fn)(const RunConfig&);
    };
    const Entry entries[] = {
        {"moments", "dump the moment tables", cmd_moments},
        {"rate", "closed-form rates", cmd_rate},
        {"montecarlo", "Monte Carlo rates against the closed forms", cmd_montecarlo},
        {"optimize-e", "optimal sampling origin per K", cmd_optimize},
        {"power-scaling", "rate against M under power scaling", cmd_power_scaling},
    };
    CommonArgs args;
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, args);
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (const auto& [sub, e] : subs) {
            if (!sub->parsed())
                continue;
            const RunConfig cfg = resolve(e->name, args);
            const Format fmt = parse_format(args.format);
            Table t = e->fn(cfg);
            t.command = e->name;
            if (args.output == "-") {
                write_table(std::cout, t, cfg, fmt);
            } else {
                std::ofstream f(args.output, std::ios::binary);
                if (!f)
                    throw ConfigError("cannot write output file '" + args.output + "'");
                write_table(f, t, cfg, fmt);
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SingularMatrixError& e) {
        std::cerr << "numeric error: " << e.what() << "\n"
                  << "condition estimate: " << fmt_num(e.condition()) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
