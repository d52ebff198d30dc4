// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/experiments.hpp"
#include "asyncmimo/discretize.hpp"
#include "asyncmimo/errors.hpp"
#include "asyncmimo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace asyncmimo {

PilotSet make_link_pilots(const LinkConfig& cfg, int max_lag)
{
    PilotOptions opt;
    if (cfg.pilot_kind == PilotKind::zadoff_chu && cfg.zc_cyclic_guard) {
        opt.cyclic_guard = true;
        opt.guard = max_lag;
    }
    return make_pilots(cfg.pilot_kind, cfg.K, cfg.N_p, opt);
}

Scenario Scenario::make(LinkConfig cfg, Pulse pulse, DelayDist dist)
{
    cfg.resolve_defaults(pulse.max_lag());
    cfg.validate();
    Scenario sc{std::move(cfg), std::move(pulse), std::move(dist), std::nullopt};
    sc.pilots = make_link_pilots(sc.cfg, sc.pulse.max_lag());
    return sc;
}

MomentTable Scenario::moments(const MomentRequest& req) const
{
    return compute_moments(pulse, dist, cfg, pilots ? &*pilots : nullptr, req);
}

namespace {

// Kahan-Babuska-Neumaier accumulator.
struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Per-trial quantities needed for the delta method and the genie rate.
struct TrialRecord {
    std::vector<double> re, im, q, s, genie; // per user
};

// Partial sums over one fixed chunk of trials.
struct ChunkSums {
    std::vector<Eigen::MatrixXcd> mean;
    std::vector<Eigen::MatrixXd> second;
    std::vector<double> noise;
};

constexpr int kChunk = 64;

} // namespace

McReport run_monte_carlo(const Scenario& sc, const MomentTable& mt, ReceiverKind kind, const McOptions& opt)
{
    const auto& cfg = sc.cfg;
    const auto& pulse = sc.pulse;
    const int K = cfg.K, M = cfg.M, N = cfg.N, L = pulse.max_lag(), nt = 2 * L + 1, a = cfg.reference_symbol();
    if (opt.trials < 1)
        throw ConfigError("Monte Carlo needs at least one trial");
    if (!(cfg.rho_d > 0.0))
        throw ConfigError("Monte Carlo needs rho_d > 0");
    if (a < L || N - 1 - a < L)
        throw ConfigError("link.N too small: the reference symbol needs L symbols on each side");
    if (is_imperfect(kind) && !sc.pilots)
        throw ConfigError("imperfect CSI needs pilots");
    if (kind == ReceiverKind::mrczf_perfect && !mt.has_zf_perfect)
        throw ConfigError("moment table lacks Z for MRC-ZF");
    if (kind == ReceiverKind::mrczf_imperfect && !mt.has_zf_imperfect)
        throw ConfigError("moment table lacks W for MRC-ZF");

    const std::vector<double> origins = kind == ReceiverKind::mrczf_imperfect ? cfg.e_t : std::vector<double>{cfg.e};
    const int S = static_cast<int>(origins.size());
    const double kappa = is_imperfect(kind) ? cfg.kappa() : 1.0;
    const double rho = cfg.rho_d;
    std::vector<double> sqrt_beta(K);
    for (int k = 0; k < K; ++k)
        sqrt_beta[k] = std::sqrt(cfg.beta[k]);

    Eigen::VectorXd zrow;
    if (kind == ReceiverKind::mrczf_perfect)
        zrow = mt.Z.row(a).transpose();

    std::vector<double> noise_factor(K, 1.0);
    for (int l = 0; l < K; ++l) {
        if (kind == ReceiverKind::mrczf_perfect)
            noise_factor[l] = mt.eps0;
        else if (kind == ReceiverKind::mrczf_imperfect)
            noise_factor[l] = mt.v[l];
    }

    const int trials = opt.trials;
    const int chunks = (trials + kChunk - 1) / kChunk;
    std::vector<ChunkSums> partial(chunks);
    TrialRecord rec;
    for (auto* v : {&rec.re, &rec.im, &rec.q, &rec.s, &rec.genie})
        v->assign(static_cast<std::size_t>(trials) * K, 0.0);

    auto run_chunk = [&](std::size_t c) {
        ChunkSums& cs = partial[c];
        cs.mean.assign(K, Eigen::MatrixXcd::Zero(K, N));
        cs.second.assign(K, Eigen::MatrixXd::Zero(K, N));
        cs.noise.assign(K, 0.0);

        Eigen::MatrixXd tau(M, K);
        Eigen::MatrixXcd C(M, K), Ct, E;
        std::vector<double> taps(static_cast<std::size_t>(S) * M * K * nt);
        std::vector<cd> eff(static_cast<std::size_t>(S) * K * K * nt);  // [o][l][k][i]
        std::vector<cd> effn(static_cast<std::size_t>(S) * K * K * nt); // same, estimation noise only
        Eigen::MatrixXcd row(K, N), rown(K, N);

        // Effective taps t^o_lk(i) = (1/M) sum_m conj(w_lm) c_km a_i(e_o, tau_km).
        auto effective_taps = [&](const Eigen::MatrixXcd& Wt, std::vector<cd>& out) {
            std::fill(out.begin(), out.end(), cd{});
            for (int m = 0; m < M; ++m)
                for (int l = 0; l < K; ++l) {
                    const cd wl = std::conj(Wt(m, l)) / static_cast<double>(M);
                    for (int k = 0; k < K; ++k) {
                        const cd w = wl * C(m, k);
                        for (int o = 0; o < S; ++o) {
                            const double* ap = &taps[((static_cast<std::size_t>(o) * M + m) * K + k) * nt];
                            cd* ep = &out[((static_cast<std::size_t>(o) * K + l) * K + k) * nt];
                            for (int i = 0; i < nt; ++i)
                                ep[i] += w * ap[i];
                        }
                    }
                }
        };

        // Row a of the (corrected) effective channel of user l.
        auto fill_row = [&](const std::vector<cd>& ef, int l, Eigen::MatrixXcd& out) {
            out.setZero();
            for (int k = 0; k < K; ++k) {
                switch (kind) {
                case ReceiverKind::mrc_perfect:
                case ReceiverKind::mrc_imperfect: {
                    const cd* ep = &ef[(static_cast<std::size_t>(l) * K + k) * nt];
                    for (int i = -L; i <= L; ++i)
                        out(k, a - i) = ep[i + L];
                    break;
                }
                case ReceiverKind::mrczf_perfect: {
                    const cd* ep = &ef[(static_cast<std::size_t>(l) * K + k) * nt];
                    for (int n = 0; n < N; ++n) {
                        cd acc = 0.0;
                        for (int i = std::max(-L, -n); i <= std::min(L, N - 1 - n); ++i)
                            acc += zrow(n + i) * ep[i + L];
                        out(k, n) = acc;
                    }
                    break;
                }
                case ReceiverKind::mrczf_imperfect: {
                    const auto& w = mt.wrow[l];
                    for (int n = 0; n < N; ++n) {
                        cd acc = 0.0;
                        for (int o = 0; o < S; ++o) {
                            const cd* ep = &ef[((static_cast<std::size_t>(o) * K + l) * K + k) * nt];
                            for (int i = std::max(-L, -n); i <= std::min(L, N - 1 - n); ++i)
                                acc += w(o * N + n + i) * ep[i + L];
                        }
                        out(k, n) = acc;
                    }
                    break;
                }
                }
            }
        };

        const int t_begin = static_cast<int>(c) * kChunk;
        const int t_end = std::min(trials, t_begin + kChunk);
        for (int t = t_begin; t < t_end; ++t) {
            RandomStream rng(cfg.seed, static_cast<std::uint64_t>(t));
            for (int m = 0; m < M; ++m)
                for (int k = 0; k < K; ++k)
                    tau(m, k) = sc.dist.sample(rng);
            for (int m = 0; m < M; ++m)
                for (int k = 0; k < K; ++k)
                    C(m, k) = sqrt_beta[k] * rng.complex_normal();

            // Imperfect CSI: the estimate splits into the noise-free part
            // (pilot leakage) and white estimation noise. The effective
            // channel uses the first; the second acts as extra noise.
            if (is_imperfect(kind)) {
                const auto Yp = synthesize_pilot_block(pulse, cfg.e_s, *sc.pilots, C, tau, cfg.rho_p(), false, rng);
                Ct = estimate_channels(Yp, sc.pilots->Phi, cfg.rho_p());
                Eigen::MatrixXcd Wn(M, sc.pilots->N_p());
                for (int m = 0; m < M; ++m)
                    for (int n = 0; n < Wn.cols(); ++n)
                        Wn(m, n) = rng.complex_normal();
                E = estimate_channels(Wn, sc.pilots->Phi, cfg.rho_p());
            } else {
                Ct = C;
            }

            for (int o = 0; o < S; ++o)
                for (int m = 0; m < M; ++m)
                    for (int k = 0; k < K; ++k)
                        pulse.taps(origins[o], tau(m, k), &taps[((static_cast<std::size_t>(o) * M + m) * K + k) * nt]);

            effective_taps(Ct, eff);
            if (is_imperfect(kind))
                effective_taps(E, effn);

            for (int l = 0; l < K; ++l) {
                fill_row(eff, l, row);
                double s = 0.0;
                if (is_imperfect(kind)) {
                    fill_row(effn, l, rown);
                    s = (Ct.col(l) + E.col(l)).squaredNorm() / (static_cast<double>(M) * M) * noise_factor[l] +
                        rho * rown.cwiseAbs2().sum();
                } else {
                    s = Ct.col(l).squaredNorm() / (static_cast<double>(M) * M) * noise_factor[l];
                }
                const double q = row.cwiseAbs2().sum();
                const cd tll = row(l, a);
                const double sig = rho * std::norm(tll);
                const double den = rho * (q - std::norm(tll)) + s;

                const std::size_t idx = static_cast<std::size_t>(t) * K + l;
                rec.re[idx] = tll.real();
                rec.im[idx] = tll.imag();
                rec.q[idx] = q;
                rec.s[idx] = s;
                rec.genie[idx] = kappa * std::log2(1.0 + sig / den);

                cs.mean[l] += row;
                cs.second[l] += row.cwiseAbs2();
                cs.noise[l] += s;
            }
        }
    };

    const int threads = opt.threads > 0 ? opt.threads : default_thread_count();
    parallel_for(static_cast<std::size_t>(chunks), threads, run_chunk);

    // Deterministic reduction in chunk order.
    McReport rep;
    rep.kind = kind;
    rep.M = M;
    rep.trials = trials;
    SecondOrderStats& st = rep.sample;
    st.kind = kind;
    st.K = K;
    st.N = N;
    st.M = M;
    st.ref = a;
    st.rho_d = rho;
    st.kappa = kappa;
    st.mean.assign(K, Eigen::MatrixXcd::Zero(K, N));
    st.second.assign(K, Eigen::MatrixXd::Zero(K, N));
    st.noise.assign(K, 0.0);
    for (int l = 0; l < K; ++l) {
        for (const auto& cs : partial) {
            st.mean[l] += cs.mean[l];
            st.second[l] += cs.second[l];
            st.noise[l] += cs.noise[l];
        }
        st.mean[l] /= static_cast<double>(trials);
        st.second[l] /= static_cast<double>(trials);
        st.noise[l] /= trials;
    }
    const RateReport plug = rate_from_stats(st);
    rep.rate = plug.rate;

    // Delta method on (Re m, Im m, Q, s) per user; the per-trial influence
    // values of all users are summed for the sum-rate error.
    const double n = trials;
    const double c = kappa / std::numbers::ln2;
    rep.rate_se.assign(K, 0.0);
    rep.genie.assign(K, 0.0);
    rep.genie_se.assign(K, 0.0);
    std::vector<double> gr(K), gi(K), gq(K), gs(K), mr(K), mi(K), mq(K), ms(K);
    for (int l = 0; l < K; ++l) {
        Neumaier sr, si, sq, ss, sg;
        for (int t = 0; t < trials; ++t) {
            const std::size_t idx = static_cast<std::size_t>(t) * K + l;
            sr.add(rec.re[idx]);
            si.add(rec.im[idx]);
            sq.add(rec.q[idx]);
            ss.add(rec.s[idx]);
            sg.add(rec.genie[idx]);
        }
        mr[l] = sr.value() / n;
        mi[l] = si.value() / n;
        mq[l] = sq.value() / n;
        ms[l] = ss.value() / n;
        rep.genie[l] = sg.value() / n;
        const double A = rho * mq[l] + ms[l];
        const double D = rho * (mq[l] - mr[l] * mr[l] - mi[l] * mi[l]) + ms[l];
        gq[l] = c * (rho / A - rho / D);
        gs[l] = c * (1.0 / A - 1.0 / D);
        gr[l] = c * 2.0 * rho * mr[l] / D;
        gi[l] = c * 2.0 * rho * mi[l] / D;
    }
    Neumaier sum_psi2;
    std::vector<Neumaier> psi2(K), gen2(K);
    Neumaier sum_gen2;
    for (int t = 0; t < trials; ++t) {
        double psi_sum = 0.0, gen_sum = 0.0;
        for (int l = 0; l < K; ++l) {
            const std::size_t idx = static_cast<std::size_t>(t) * K + l;
            const double psi = gr[l] * (rec.re[idx] - mr[l]) + gi[l] * (rec.im[idx] - mi[l]) +
                               gq[l] * (rec.q[idx] - mq[l]) + gs[l] * (rec.s[idx] - ms[l]);
            const double dg = rec.genie[idx] - rep.genie[l];
            psi2[l].add(psi * psi);
            gen2[l].add(dg * dg);
            psi_sum += psi;
            gen_sum += dg;
        }
        sum_psi2.add(psi_sum * psi_sum);
        sum_gen2.add(gen_sum * gen_sum);
    }
    const double denom = n > 1 ? n * (n - 1) : 1.0;
    for (int l = 0; l < K; ++l) {
        rep.rate_se[l] = std::sqrt(psi2[l].value() / denom);
        rep.genie_se[l] = std::sqrt(gen2[l].value() / denom);
        rep.sum_rate += rep.rate[l];
        rep.genie_sum += rep.genie[l];
    }
    rep.sum_rate_se = std::sqrt(sum_psi2.value() / denom);
    rep.genie_sum_se = std::sqrt(sum_gen2.value() / denom);
    return rep;
}

namespace {

double origin_objective(ReceiverKind kind, int K, const Pulse& pulse, const DelayDist& dist, double e,
                        const PilotSet* pilots)
{
    if (kind == ReceiverKind::mrc_perfect) {
        MomentTable mt;
        mt.L = pulse.max_lag();
        mt.taps = tap_moments(pulse, dist, e);
        return saturation_sir_perfect(mt);
    }
    LinkConfig cfg;
    cfg.K = K;
    cfg.N = 4 * pulse.max_lag() + 8 + pilots->N_p();
    cfg.N_p = pilots->N_p();
    cfg.e = e;
    cfg.e_s = e;
    cfg.beta.assign(K, 1.0);
    MomentRequest req;
    req.imperfect = true;
    const auto mt = compute_moments(pulse, dist, cfg, pilots, req);
    double total = 0.0;
    for (int l = 0; l < K; ++l)
        total += std::log2(1.0 + saturation_sir_imperfect(mt, cfg.beta, l));
    return total;
}

} // namespace

OriginSearch optimize_sampling_origin(ReceiverKind kind, int K, const Pulse& pulse, const DelayDist& dist,
                                      double grid_step, PilotKind pilot_kind)
{
    if (kind != ReceiverKind::mrc_perfect && kind != ReceiverKind::mrc_imperfect)
        throw ConfigError("origin optimisation is defined for mrc-perfect and mrc-imperfect only");
    if (!(grid_step > 0.0 && grid_step <= 0.01))
        throw ConfigError("origin grid step must lie in (0, 0.01]");
    if (K < 1)
        throw ConfigError("origin optimisation needs K >= 1");

    std::optional<PilotSet> pilots;
    if (kind == ReceiverKind::mrc_imperfect) {
        PilotOptions po;
        if (pilot_kind == PilotKind::zadoff_chu) {
            po.cyclic_guard = true;
            po.guard = pulse.max_lag();
        }
        pilots = make_pilots(pilot_kind, K, default_pilot_length(pilot_kind, K, po.cyclic_guard, pulse.max_lag()), po);
    }
    const PilotSet* pp = pilots ? &*pilots : nullptr;
    auto f = [&](double e) { return origin_objective(kind, K, pulse, dist, e, pp); };

    OriginSearch res;
    const int steps = static_cast<int>(std::lround(1.0 / grid_step));
    std::size_t best = 0;
    for (int s = 0; s <= steps; ++s) {
        const double e = std::min(1.0, s * grid_step);
        res.grid.push_back(e);
        res.objective.push_back(f(e));
        if (res.objective.back() > res.objective[best])
            best = res.grid.size() - 1;
    }
    res.e_star = res.grid[best];
    res.objective_star = res.objective[best];

    // Golden-section refinement inside the neighbouring grid cells.
    double lo = res.grid[best > 0 ? best - 1 : 0];
    double hi = res.grid[std::min(best + 1, res.grid.size() - 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-6) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (lo + hi);
    const double fm = f(xm);
    if (fm > res.objective_star) {
        res.e_star = xm;
        res.objective_star = fm;
    }
    return res;
}

ScalingCurve power_scaling_sweep(const Scenario& sc, const MomentTable& mt, ReceiverKind kind, double E_d,
                                 const std::vector<int>& M_list, PowerScaling scaling)
{
    if (M_list.empty() || !std::is_sorted(M_list.begin(), M_list.end()))
        throw ConfigError("M list must be nonempty and sorted");
    if (!(E_d >= 0.0))
        throw ConfigError("E_d must be >= 0");
    ScalingCurve curve;
    curve.kind = kind;
    curve.scaling = scaling;
    curve.E_d = E_d;
    for (int M : M_list) {
        if (M < 1)
            throw ConfigError("M must be >= 1");
        LinkConfig cfg = sc.cfg;
        cfg.M = M;
        switch (scaling) {
        case PowerScaling::fixed_power: cfg.rho_d = E_d; break;
        case PowerScaling::power_over_M: cfg.rho_d = E_d / M; break;
        case PowerScaling::power_over_sqrtM: cfg.rho_d = E_d / std::sqrt(static_cast<double>(M)); break;
        }
        const auto r = rate_from_stats(second_order_stats(kind, cfg, mt));
        curve.points.push_back({M, cfg.rho_d, r.rate, r.sum_rate()});
    }
    LinkConfig lim = sc.cfg;
    lim.E_d = E_d;
    curve.limit = asymptotic_limit(kind, lim, mt, scaling, LimitKind::M_to_inf);
    return curve;
}

} // namespace asyncmimo
