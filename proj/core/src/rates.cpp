// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/rates.hpp"
#include "asyncmimo/errors.hpp"

#include <cmath>
#include <limits>

namespace asyncmimo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double beta_sum(const std::vector<double>& b)
{
    double s = 0.0;
    for (double x : b)
        s += x;
    return s;
}

double sum_Eg2(const MomentTable& mt)
{
    double s = 0.0;
    for (int i = -mt.L; i <= mt.L; ++i)
        s += mt.Eg2(i);
    return s;
}

// 1/rho_p, infinite when there is no pilot power.
double inv_rho_p(const LinkConfig& cfg)
{
    return cfg.rho_p() > 0.0 ? 1.0 / cfg.rho_p() : kInf;
}

void check_tables(ReceiverKind kind, const LinkConfig& cfg, const MomentTable& mt)
{
    if (mt.K != cfg.K || mt.N != cfg.N)
        throw ConfigError("moment table was computed for a different K or N");
    if (is_imperfect(kind) && !mt.has_pilots)
        throw ConfigError("moment table lacks pilot-dependent entries for " + to_string(kind));
    if (kind == ReceiverKind::mrczf_perfect && !mt.has_zf_perfect)
        throw ConfigError("moment table lacks the Z-matrix entries");
    if (kind == ReceiverKind::mrczf_imperfect && !mt.has_zf_imperfect)
        throw ConfigError("moment table lacks the Gamma/W entries");
    if (static_cast<int>(cfg.beta.size()) != cfg.K)
        throw ConfigError("beta must have K entries");
}

RateReport finish(RateReport r)
{
    const int K = static_cast<int>(r.signal.size());
    r.rate.resize(K);
    for (int l = 0; l < K; ++l) {
        if (r.signal[l] == 0.0) {
            r.rate[l] = 0.0;
            continue;
        }
        const double den = r.isi[l] + r.iui[l] + r.noise[l];
        if (!(den > 0.0))
            throw InternalError("nonpositive interference-plus-noise in rate evaluation");
        r.rate[l] = r.kappa * std::log2(1.0 + r.signal[l] / den);
    }
    return r;
}

} // namespace

double RateReport::sum_rate() const
{
    double s = 0.0;
    for (double x : rate)
        s += x;
    return s;
}

double RateReport::sinr(int l) const
{
    return signal[l] / (isi[l] + iui[l] + noise[l]);
}

SecondOrderStats second_order_stats(ReceiverKind kind, const LinkConfig& cfg, const MomentTable& mt)
{
    check_tables(kind, cfg, mt);
    const int K = cfg.K, N = cfg.N, L = mt.L, a = mt.ref;
    if (a < L || N - 1 - a < L)
        throw ConfigError("link.N too small: the reference symbol needs L symbols on each side");
    const double M = cfg.M;
    const auto& beta = cfg.beta;
    const double rho = cfg.rho_d;

    SecondOrderStats st;
    st.kind = kind;
    st.K = K;
    st.N = N;
    st.M = cfg.M;
    st.ref = a;
    st.rho_d = rho;
    st.kappa = is_imperfect(kind) ? cfg.kappa() : 1.0;
    st.mean.assign(K, Eigen::MatrixXcd::Zero(K, N));
    st.second.assign(K, Eigen::MatrixXd::Zero(K, N));
    st.noise.assign(K, 0.0);

    switch (kind) {
    case ReceiverKind::mrc_perfect:
        for (int l = 0; l < K; ++l) {
            for (int n = 0; n < N; ++n) {
                const int i = a - n;
                st.mean[l](l, n) = beta[l] * mt.Eg(i);
                for (int k = 0; k < K; ++k)
                    st.second[l](k, n) = k == l ? beta[l] * beta[l] / M * (2.0 * mt.Eg2(i) + (M - 1.0) * mt.Eg(i) * mt.Eg(i))
                                                : beta[l] * beta[k] * mt.Eg2(i) / M;
            }
            st.noise[l] = beta[l] / M;
        }
        break;

    case ReceiverKind::mrc_imperfect: {
        const double est = sum_Eg2(mt) * beta_sum(beta) / cfg.N_p; // rho_d / rho_p = 1 / N_p
        for (int l = 0; l < K; ++l) {
            for (int n = 0; n < N; ++n) {
                const int i = a - n;
                for (int k = 0; k < K; ++k) {
                    const cd g1 = mt.gamma1(l, k, i);
                    st.mean[l](k, n) = beta[k] * g1;
                    double cross = 0.0;
                    for (int j = 0; j < K; ++j)
                        if (j != k)
                            cross += beta[j] * beta[k] * M * mt.gamma2(l, j, k, i);
                    st.second[l](k, n) =
                        (beta[k] * beta[k] * (2.0 * M * mt.gamma2(l, k, k, i) + M * (M - 1.0) * std::norm(g1)) + cross) /
                        (M * M);
                }
            }
            double leak = 0.0;
            for (int j = 0; j < K; ++j)
                leak += beta[j] * mt.lambda2(l, j);
            st.noise[l] = (est + leak + inv_rho_p(cfg)) / M;
        }
        break;
    }

    case ReceiverKind::mrczf_perfect:
        for (int l = 0; l < K; ++l) {
            for (int n = 0; n < N; ++n) {
                const double d = n == a ? 1.0 : 0.0; // Z E[G] = I
                st.mean[l](l, n) = beta[l] * d;
                for (int k = 0; k < K; ++k)
                    st.second[l](k, n) = k == l ? beta[l] * beta[l] / (M * M) * (2.0 * M * mt.xi2(n) + M * (M - 1.0) * d)
                                                : beta[l] * beta[k] * mt.xi2(n) / M;
            }
            st.noise[l] = beta[l] * mt.eps0 / M;
        }
        break;

    case ReceiverKind::mrczf_imperfect:
        for (int l = 0; l < K; ++l) {
            for (int n = 0; n < N; ++n) {
                for (int k = 0; k < K; ++k) {
                    const double d = (n == a && k == l) ? 1.0 : 0.0; // W_l Gamma_l = I
                    st.mean[l](k, n) = beta[k] * d;
                    double cross = 0.0;
                    for (int j = 0; j < K; ++j)
                        if (j != k)
                            cross += beta[j] * beta[k] * mt.gammahat2(l, j, k, n);
                    st.second[l](k, n) =
                        (M * (2.0 * beta[k] * beta[k] * mt.gammahat2(l, k, k, n) + cross) + M * (M - 1.0) * beta[k] * beta[k] * d) /
                        (M * M);
                }
            }
            double leak = 0.0;
            for (int j = 0; j < K; ++j)
                leak += beta[j] * mt.lambda2(l, j);
            st.noise[l] = (mt.u[l] * beta_sum(beta) / cfg.N_p + (leak + inv_rho_p(cfg)) * mt.v[l]) / M;
        }
        break;
    }
    return st;
}

RateReport rate_from_stats(const SecondOrderStats& st)
{
    RateReport r;
    r.kind = st.kind;
    r.kappa = st.kappa;
    const int K = st.K, a = st.ref;
    r.signal.resize(K);
    r.isi.resize(K);
    r.iui.resize(K);
    r.noise.resize(K);
    for (int l = 0; l < K; ++l) {
        const double m2 = std::norm(st.mean[l](l, a));
        double own = 0.0, other = 0.0;
        for (int k = 0; k < K; ++k) {
            const double s = st.second[l].row(k).sum();
            (k == l ? own : other) += s;
        }
        r.signal[l] = st.rho_d * m2;
        r.isi[l] = st.rho_d * (own - m2);
        r.iui[l] = st.rho_d * other;
        r.noise[l] = st.noise[l];
        if (st.rho_d == 0.0)
            r.isi[l] = r.iui[l] = 0.0;
    }
    return finish(std::move(r));
}

ReceiverKind theorem_receiver(int theorem)
{
    if (theorem < 1 || theorem > 4)
        throw ConfigError("theorem must be 1, 2, 3 or 4");
    return kAllReceivers[theorem - 1];
}

RateReport theorem_rate(int theorem, const LinkConfig& cfg, const MomentTable& mt)
{
    const ReceiverKind kind = theorem_receiver(theorem);
    check_tables(kind, cfg, mt);
    const int K = cfg.K, L = mt.L, N = cfg.N;
    const double M = cfg.M, rho = cfg.rho_d;
    const auto& beta = cfg.beta;

    RateReport r;
    r.kind = kind;
    r.kappa = is_imperfect(kind) ? cfg.kappa() : 1.0;
    r.signal.resize(K);
    r.isi.resize(K);
    r.iui.resize(K);
    r.noise.resize(K);

    for (int l = 0; l < K; ++l) {
        double others = 0.0;
        for (int k = 0; k < K; ++k)
            if (k != l)
                others += beta[k];

        if (theorem == 1) {
            double isi = 0.0;
            for (int i = -L; i <= L; ++i)
                isi += 2.0 * mt.Eg2(i) + (M * (i != 0 ? 1.0 : 0.0) - 1.0) * mt.Eg(i) * mt.Eg(i);
            r.signal[l] = rho * beta[l] * M * mt.Eg(0) * mt.Eg(0);
            r.iui[l] = rho * sum_Eg2(mt) * others;
            r.isi[l] = rho * beta[l] * isi;
            r.noise[l] = 1.0;
        } else if (theorem == 2) {
            double isi = 0.0, isi_x = 0.0, iui = 0.0, iui_x = 0.0;
            for (int n = -L; n <= L; ++n) {
                isi += 2.0 * mt.gamma2(l, l, l, n) + (M * (n != 0 ? 1.0 : 0.0) - 1.0) * std::norm(mt.gamma1(l, l, n));
                for (int j = 0; j < K; ++j)
                    if (j != l)
                        isi_x += beta[j] * mt.gamma2(l, j, l, n);
                for (int k = 0; k < K; ++k) {
                    if (k == l)
                        continue;
                    iui += beta[k] * beta[k] * (2.0 * mt.gamma2(l, k, k, n) + (M - 1.0) * std::norm(mt.gamma1(l, k, n)));
                    for (int j = 0; j < K; ++j)
                        if (j != k)
                            iui_x += beta[k] * beta[j] * mt.gamma2(l, j, k, n);
                }
            }
            double leak = 0.0;
            for (int k = 0; k < K; ++k)
                leak += beta[k] * mt.lambda2(l, k);
            r.signal[l] = rho * beta[l] * beta[l] * M * std::norm(mt.gamma1(l, l, 0));
            r.isi[l] = rho * beta[l] * beta[l] * isi + rho * beta[l] * isi_x;
            r.iui[l] = rho * iui + rho * iui_x;
            r.noise[l] = beta_sum(beta) * sum_Eg2(mt) / cfg.N_p + leak + inv_rho_p(cfg);
        } else if (theorem == 3) {
            const double xs = mt.xi2.sum();
            r.signal[l] = rho * beta[l] * M;
            r.iui[l] = rho * xs * others;
            r.isi[l] = rho * beta[l] * (2.0 * xs - 1.0);
            r.noise[l] = mt.eps0;
        } else {
            double own = 0.0, own_x = 0.0, iui = 0.0, iui_x = 0.0;
            for (int n = 0; n < N; ++n) {
                own += mt.gammahat2(l, l, l, n);
                for (int j = 0; j < K; ++j)
                    if (j != l)
                        own_x += beta[j] * mt.gammahat2(l, j, l, n);
                for (int k = 0; k < K; ++k) {
                    if (k == l)
                        continue;
                    iui += beta[k] * beta[k] * 2.0 * mt.gammahat2(l, k, k, n);
                    for (int j = 0; j < K; ++j)
                        if (j != k)
                            iui_x += beta[k] * beta[j] * mt.gammahat2(l, j, k, n);
                }
            }
            double leak = 0.0;
            for (int k = 0; k < K; ++k)
                leak += beta[k] * mt.lambda2(l, k);
            r.signal[l] = rho * beta[l] * beta[l] * M;
            r.isi[l] = rho * beta[l] * beta[l] * (2.0 * own - 1.0) + rho * beta[l] * own_x;
            r.iui[l] = rho * iui + rho * iui_x;
            r.noise[l] = mt.u[l] * beta_sum(beta) / cfg.N_p + (leak + inv_rho_p(cfg)) * mt.v[l];
        }
        if (rho == 0.0)
            r.isi[l] = r.iui[l] = 0.0;
    }
    return finish(std::move(r));
}

double zc_closed_form_rate(const LinkConfig& cfg, const MomentTable& mt, int l)
{
    const double Np = cfg.N_p, rho = cfg.rho_d, M = cfg.M;
    const double bl = cfg.beta[l];
    double others = 0.0;
    for (int k = 0; k < cfg.K; ++k)
        if (k != l)
            others += cfg.beta[k];
    const double s2 = sum_Eg2(mt);
    double isi = 0.0;
    for (int i = -mt.L; i <= mt.L; ++i)
        isi += 2.0 * mt.Eg2(i) + (M * (i != 0 ? 1.0 : 0.0) - 1.0) * mt.Eg(i) * mt.Eg(i);
    const double delta = rho * (Np * rho * bl + 1.0) * s2 * others + Np * rho * rho * bl * bl * isi +
                         rho * (Np + s2) * bl;
    const double num = Np * rho * rho * bl * bl * M * mt.Eg(0) * mt.Eg(0);
    return cfg.kappa() * std::log2(1.0 + num / (delta + 1.0));
}

double sync_classical_rate(ReceiverKind kind, const LinkConfig& cfg, int l)
{
    const double M = cfg.M, rho = cfg.rho_d, bl = cfg.beta[l];
    const double total = beta_sum(cfg.beta);
    if (!is_imperfect(kind))
        return std::log2(1.0 + M * rho * bl / (rho * total + 1.0));
    if (rho == 0.0)
        return 0.0;
    const double est_var = 1.0 / cfg.rho_p();
    return cfg.kappa() * std::log2(1.0 + M * rho * bl * bl / ((bl + est_var) * (rho * total + 1.0)));
}

std::string to_string(PowerScaling s)
{
    switch (s) {
    case PowerScaling::fixed_power: return "fixed";
    case PowerScaling::power_over_M: return "over-M";
    case PowerScaling::power_over_sqrtM: return "over-sqrtM";
    }
    return "?";
}

PowerScaling parse_power_scaling(const std::string& s)
{
    if (s == "fixed" || s == "fixed_power")
        return PowerScaling::fixed_power;
    if (s == "over-M" || s == "power_over_M" || s == "1/M")
        return PowerScaling::power_over_M;
    if (s == "over-sqrtM" || s == "power_over_sqrtM" || s == "1/sqrtM")
        return PowerScaling::power_over_sqrtM;
    throw ConfigError("unknown power scaling '" + s + "' (expected fixed, over-M or over-sqrtM)");
}

double saturation_sir_perfect(const MomentTable& mt)
{
    double isi = 0.0;
    for (int i = -mt.L; i <= mt.L; ++i)
        if (i != 0)
            isi += mt.Eg(i) * mt.Eg(i);
    return mt.Eg(0) * mt.Eg(0) / isi;
}

double saturation_sir_imperfect(const MomentTable& mt, const std::vector<double>& beta, int l)
{
    double isi = 0.0, iui = 0.0;
    for (int i = -mt.L; i <= mt.L; ++i) {
        if (i != 0)
            isi += beta[l] * beta[l] * std::norm(mt.gamma1(l, l, i));
        for (int k = 0; k < mt.K; ++k)
            if (k != l)
                iui += beta[k] * beta[k] * std::norm(mt.gamma1(l, k, i));
    }
    return beta[l] * beta[l] * std::norm(mt.gamma1(l, l, 0)) / (isi + iui);
}

std::vector<double> asymptotic_limit(ReceiverKind kind, const LinkConfig& cfg, const MomentTable& mt,
                                     PowerScaling scaling, LimitKind limit)
{
    check_tables(kind, cfg, mt);
    const int K = cfg.K;
    const double Ed = cfg.E_d;
    const bool perfect = !is_imperfect(kind);
    if (perfect && scaling == PowerScaling::power_over_sqrtM)
        throw ConfigError(to_string(kind) + " has no limit defined for power scaling 1/sqrt(M)");
    if (!perfect && scaling == PowerScaling::power_over_M)
        throw ConfigError(to_string(kind) + " has no limit defined for power scaling 1/M");

    std::vector<double> out(K);
    for (int l = 0; l < K; ++l) {
        const double bl = cfg.beta[l];
        switch (kind) {
        case ReceiverKind::mrc_perfect: {
            double isi = 0.0;
            for (int i = -mt.L; i <= mt.L; ++i)
                if (i != 0)
                    isi += mt.Eg(i) * mt.Eg(i);
            const double g0 = mt.Eg(0) * mt.Eg(0);
            if (scaling == PowerScaling::power_over_M && limit == LimitKind::M_to_inf)
                out[l] = std::log2(1.0 + Ed * bl * g0 / (Ed * bl * isi + 1.0));
            else
                out[l] = std::log2(1.0 + g0 / isi);
            break;
        }
        case ReceiverKind::mrc_imperfect: {
            double isi = 0.0, iui = 0.0;
            for (int i = -mt.L; i <= mt.L; ++i) {
                if (i != 0)
                    isi += bl * bl * std::norm(mt.gamma1(l, l, i));
                for (int k = 0; k < K; ++k)
                    if (k != l)
                        iui += cfg.beta[k] * cfg.beta[k] * std::norm(mt.gamma1(l, k, i));
            }
            const double sig = bl * bl * std::norm(mt.gamma1(l, l, 0));
            if (scaling == PowerScaling::power_over_sqrtM && limit == LimitKind::M_to_inf) {
                const double c = cfg.N_p * Ed * Ed;
                out[l] = cfg.kappa() * std::log2(1.0 + c * sig / (c * (isi + iui) + 1.0));
            } else
                out[l] = cfg.kappa() * std::log2(1.0 + sig / (isi + iui));
            break;
        }
        case ReceiverKind::mrczf_perfect:
            if (scaling == PowerScaling::power_over_M && limit == LimitKind::M_to_inf)
                out[l] = std::log2(1.0 + Ed * bl / mt.eps0);
            else
                out[l] = kInf;
            break;
        case ReceiverKind::mrczf_imperfect:
            if (scaling == PowerScaling::power_over_sqrtM && limit == LimitKind::M_to_inf)
                out[l] = cfg.kappa() * std::log2(1.0 + cfg.N_p * Ed * Ed * bl * bl / mt.v[l]);
            else
                out[l] = kInf;
            break;
        }
    }
    return out;
}

std::vector<double> mrczf_imperfect_limit_quoted(const LinkConfig& cfg, const MomentTable& mt)
{
    check_tables(ReceiverKind::mrczf_imperfect, cfg, mt);
    std::vector<double> out(cfg.K);
    for (int l = 0; l < cfg.K; ++l)
        out[l] = cfg.kappa() * std::log2(1.0 + cfg.E_d * cfg.beta[l] / mt.v[l]);
    return out;
}

double approx_error_bound(const SecondOrderStats& st, int M, double c)
{
    if (M < 1)
        throw ConfigError("approx_error_bound needs M >= 1");
    double mu = kInf;
    for (int l = 0; l < st.K; ++l)
        mu = std::min(mu, std::norm(st.mean[l](l, st.ref)));
    if (!(mu > 0.0))
        throw ConfigError("approximation bound undefined: a signal mean is zero");
    // Per-antenna summand variance: Var_1 = M_stats * (E|T|^2 - |E T|^2).
    double sig2 = 0.0;
    for (int l = 0; l < st.K; ++l)
        for (int k = 0; k < st.K; ++k)
            for (int n = 0; n < st.N; ++n) {
                const double m2 = std::norm(st.mean[l](k, n));
                const double var1 = st.M * std::max(0.0, st.second[l](k, n) - m2);
                sig2 = std::max(sig2, 4.0 * m2 * var1);
            }
    return 2.0 * std::log2(1.0 + c * sig2 / (static_cast<double>(M) * mu * mu));
}

} // namespace asyncmimo
