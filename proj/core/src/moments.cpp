// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/moments.hpp"
#include "asyncmimo/discretize.hpp"
#include "asyncmimo/errors.hpp"
#include "asyncmimo/receivers.hpp"

#include <algorithm>
#include <cmath>

namespace asyncmimo {

double MomentTable::tap_cross(int i, int j) const
{
    if (std::abs(i) > L || std::abs(j) > L)
        return 0.0;
    return taps.cross[(i + L) * (2 * L + 1) + (j + L)];
}

cd MomentTable::gamma1(int l, int k, int i) const
{
    if (std::abs(i) > L)
        return 0.0;
    return gamma1_[(l * K + k) * (2 * L + 1) + i + L];
}

double MomentTable::gamma2(int l, int j, int k, int i) const
{
    if (std::abs(i) > L)
        return 0.0;
    if (j == k)
        return gamma2s_[(l * K + k) * (2 * L + 1) + i + L];
    return lambda2(l, j) * Eg2(i);
}

cd MomentTable::gamma1t(int l, int k, int t, int i) const
{
    if (std::abs(i) > L)
        return 0.0;
    return gamma1t_[((l * K + k) * K + t) * (2 * L + 1) + i + L];
}

double MomentTable::gammahat2(int l, int j, int k, int n) const
{
    if (j == k)
        return gammahat2s[l](k, n);
    return lambda2(l, j) * ghat2[l](n);
}

void leakage_from_taps(const PilotSet& pilots, const double* taps_es, int L, int j, cd* out)
{
    const int K = pilots.K();
    for (int l = 0; l < K; ++l)
        out[l] = 0.0;
    for (int i = -L; i <= L; ++i) {
        const double a = taps_es[i + L];
        if (a == 0.0)
            continue;
        const auto& U = pilots.shift(i);
        for (int l = 0; l < K; ++l)
            out[l] += a * U(j, l);
    }
}

namespace {

std::vector<double> kink_list(const Pulse& pulse, const std::vector<double>& origins)
{
    std::vector<double> out;
    for (double o : origins)
        for (double b : pulse.tap_breaks(o))
            out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void fill_pilot_tables(MomentTable& mt, const Pulse& pulse, const DelayDist& dist, const PilotSet& pilots,
                       const QuadOptions& quad)
{
    const int K = mt.K, L = mt.L, nt = 2 * L + 1;
    const std::size_t kk = static_cast<std::size_t>(K) * K;
    const std::size_t offB = 2 * kk * nt, offC = offB + kk * nt, dim = offC + kk;

    std::vector<double> as(nt), ae(nt);
    std::vector<cd> lam(K);
    auto fn = [&](double tau, double* out) {
        pulse.taps(mt.e_s, tau, as.data());
        pulse.taps(mt.e, tau, ae.data());
        for (int k = 0; k < K; ++k) {
            leakage_from_taps(pilots, as.data(), L, k, lam.data());
            for (int l = 0; l < K; ++l) {
                const cd c = std::conj(lam[l]);
                const double p = std::norm(lam[l]);
                const std::size_t base = (static_cast<std::size_t>(l) * K + k) * nt;
                for (int i = 0; i < nt; ++i) {
                    out[2 * (base + i)] = c.real() * ae[i];
                    out[2 * (base + i) + 1] = c.imag() * ae[i];
                    out[offB + base + i] = p * ae[i] * ae[i];
                }
                out[offC + static_cast<std::size_t>(l) * K + k] = p;
            }
        }
    };
    const auto v = dist.expect_vec(fn, dim, kink_list(pulse, {mt.e, mt.e_s}), quad);

    mt.gamma1_.resize(kk * nt);
    for (std::size_t x = 0; x < kk * nt; ++x)
        mt.gamma1_[x] = {v[2 * x], v[2 * x + 1]};
    mt.gamma2s_.assign(v.begin() + offB, v.begin() + offC);
    mt.lambda2.resize(K, K);
    for (int l = 0; l < K; ++l)
        for (int k = 0; k < K; ++k)
            mt.lambda2(l, k) = v[offC + static_cast<std::size_t>(l) * K + k];
    mt.has_pilots = true;
}

void fill_gamma1t(MomentTable& mt, const Pulse& pulse, const DelayDist& dist, const PilotSet& pilots,
                  const QuadOptions& quad)
{
    const int K = mt.K, L = mt.L, nt = 2 * L + 1;
    const std::size_t count = static_cast<std::size_t>(K) * K * K * nt;
    std::vector<double> as(nt), at(static_cast<std::size_t>(K) * nt);
    std::vector<cd> lam(K);
    auto fn = [&](double tau, double* out) {
        pulse.taps(mt.e_s, tau, as.data());
        for (int t = 0; t < K; ++t)
            pulse.taps(mt.e_t[t], tau, at.data() + static_cast<std::size_t>(t) * nt);
        for (int k = 0; k < K; ++k) {
            leakage_from_taps(pilots, as.data(), L, k, lam.data());
            for (int l = 0; l < K; ++l) {
                const cd c = std::conj(lam[l]);
                for (int t = 0; t < K; ++t) {
                    const std::size_t base = ((static_cast<std::size_t>(l) * K + k) * K + t) * nt;
                    for (int i = 0; i < nt; ++i) {
                        out[2 * (base + i)] = c.real() * at[t * nt + i];
                        out[2 * (base + i) + 1] = c.imag() * at[t * nt + i];
                    }
                }
            }
        }
    };
    std::vector<double> origins = mt.e_t;
    origins.push_back(mt.e_s);
    const auto v = dist.expect_vec(fn, 2 * count, kink_list(pulse, origins), quad);
    mt.gamma1t_.resize(count);
    for (std::size_t x = 0; x < count; ++x)
        mt.gamma1t_[x] = {v[2 * x], v[2 * x + 1]};
}

void fill_zf_imperfect_user(MomentTable& mt, int l, const GammaW& gw, const Pulse& pulse, const DelayDist& dist,
                            const PilotSet& pilots, const Eigen::MatrixXd& sigma_os, const QuadOptions& quad)
{
    const int K = mt.K, N = mt.N, L = mt.L, nt = 2 * L + 1;
    const Eigen::RowVectorXcd w = gw.W.row(l * N + mt.ref);
    mt.wrow[l] = w;

    // Integrand layout: |Ghat(n)|^2 (N), |lambda_lk|^2 |Ghat(n)|^2 (K N),
    // conj(lambda_lk) Ghat(n) (2 K N).
    const std::size_t offB = N, offC = offB + static_cast<std::size_t>(K) * N;
    const std::size_t dim = offC + 2 * static_cast<std::size_t>(K) * N;
    std::vector<double> as(nt), at(static_cast<std::size_t>(K) * nt);
    std::vector<cd> lam_src(K), lam(K), gh(N);
    auto fn = [&](double tau, double* out) {
        pulse.taps(mt.e_s, tau, as.data());
        for (int t = 0; t < K; ++t)
            pulse.taps(mt.e_t[t], tau, at.data() + static_cast<std::size_t>(t) * nt);
        for (int n = 0; n < N; ++n) {
            cd acc = 0.0;
            for (int t = 0; t < K; ++t)
                for (int i = std::max(-L, -n); i <= std::min(L, N - 1 - n); ++i)
                    acc += w(t * N + n + i) * at[t * nt + i + L];
            gh[n] = acc;
        }
        for (int k = 0; k < K; ++k) {
            leakage_from_taps(pilots, as.data(), L, k, lam_src.data());
            lam[k] = lam_src[l];
        }
        for (int n = 0; n < N; ++n) {
            const double g2 = std::norm(gh[n]);
            out[n] = g2;
            for (int k = 0; k < K; ++k) {
                out[offB + static_cast<std::size_t>(k) * N + n] = std::norm(lam[k]) * g2;
                const cd c = std::conj(lam[k]) * gh[n];
                out[offC + 2 * (static_cast<std::size_t>(k) * N + n)] = c.real();
                out[offC + 2 * (static_cast<std::size_t>(k) * N + n) + 1] = c.imag();
            }
        }
    };
    std::vector<double> origins = mt.e_t;
    origins.push_back(mt.e_s);
    const auto v = dist.expect_vec(fn, dim, kink_list(pulse, origins), quad);

    mt.ghat2[l] = Eigen::Map<const Eigen::VectorXd>(v.data(), N);
    mt.gammahat2s[l].resize(K, N);
    mt.ghat_mean[l].resize(K, N);
    for (int k = 0; k < K; ++k)
        for (int n = 0; n < N; ++n) {
            mt.gammahat2s[l](k, n) = v[offB + static_cast<std::size_t>(k) * N + n];
            mt.ghat_mean[l](k, n) = {v[offC + 2 * (static_cast<std::size_t>(k) * N + n)],
                                     v[offC + 2 * (static_cast<std::size_t>(k) * N + n) + 1]};
        }
    mt.u[l] = mt.ghat2[l].sum();
    mt.v[l] = (w * sigma_os.cast<cd>() * w.adjoint())(0, 0).real();
}

} // namespace

MomentTable compute_moments(const Pulse& pulse, const DelayDist& dist, const LinkConfig& cfg,
                            const PilotSet* pilots, const MomentRequest& req)
{
    MomentTable mt;
    mt.K = cfg.K;
    mt.N = cfg.N;
    mt.L = pulse.max_lag();
    mt.ref = cfg.reference_symbol();
    mt.e = cfg.e;
    mt.e_s = cfg.e_s < 0.0 ? cfg.e : cfg.e_s;
    mt.e_t = cfg.e_t;
    mt.taps = tap_moments(pulse, dist, cfg.e, req.quad);

    const bool want_cross = req.zf_imperfect || req.cross_tables;
    if ((req.imperfect || want_cross) && !pilots)
        throw ConfigError("imperfect-CSI moments need a pilot set");
    if (pilots && pilots->K() != cfg.K)
        throw ConfigError("pilot set has a different number of users than the link");
    if (req.imperfect || want_cross)
        fill_pilot_tables(mt, pulse, dist, *pilots, req.quad);

    if (req.zf_perfect) {
        if (cfg.N < 2 * mt.L + 1)
            throw ConfigError("link.N must be at least 2L+1 for MRC-ZF");
        const auto zf = build_Z(mt.taps, cfg.N, req.max_condition);
        mt.Z = zf.Z;
        mt.z_condition = zf.condition;
        const Eigen::VectorXd z = zf.Z.row(mt.ref).transpose();
        mt.xi2.resize(cfg.N);
        for (int n = 0; n < cfg.N; ++n) {
            double acc = 0.0;
            for (int i = -mt.L; i <= mt.L; ++i) {
                if (n + i < 0 || n + i >= cfg.N)
                    continue;
                for (int j = -mt.L; j <= mt.L; ++j) {
                    if (n + j < 0 || n + j >= cfg.N)
                        continue;
                    acc += z(n + i) * z(n + j) * mt.tap_cross(i, j);
                }
            }
            mt.xi2(n) = acc;
        }
        mt.eps0 = z.squaredNorm();
        mt.has_zf_perfect = true;
    }

    if (want_cross) {
        if (static_cast<int>(cfg.e_t.size()) != cfg.K)
            throw ConfigError("MRC-ZF with imperfect CSI needs K detection origins");
        fill_gamma1t(mt, pulse, dist, *pilots, req.quad);
    }
    if (req.zf_imperfect) {
        const Eigen::MatrixXd sigma_os = noise_cov_oversampled(pulse, cfg.e_t, cfg.N);
        mt.gamma_condition.resize(cfg.K);
        mt.wrow.resize(cfg.K);
        mt.ghat2.resize(cfg.K);
        mt.gammahat2s.resize(cfg.K);
        mt.ghat_mean.resize(cfg.K);
        mt.u.resize(cfg.K);
        mt.v.resize(cfg.K);
        for (int l = 0; l < cfg.K; ++l) {
            const auto gw = build_Gamma_W(mt, l, req.max_condition);
            mt.gamma_condition[l] = gw.condition;
            fill_zf_imperfect_user(mt, l, gw, pulse, dist, *pilots, sigma_os, req.quad);
        }
        mt.has_zf_imperfect = true;
    }
    return mt;
}

} // namespace asyncmimo
