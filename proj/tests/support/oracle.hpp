// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

// Brute-force reference for the closed-form second-order statistics: build
// every G_km as a dense matrix, form the effective channel matrices
// explicitly and average over random draws.

#pragma once

#include <asyncmimo/asyncmimo.hpp>

#include <cmath>
#include <vector>

namespace oracle {

using namespace asyncmimo;

struct EntryStats {
    std::vector<Eigen::MatrixXcd> mean; // per l, K x N
    std::vector<Eigen::MatrixXd> mean_se_re, mean_se_im;
    std::vector<Eigen::MatrixXd> second, second_se;
    std::vector<double> noise, noise_se;
};

// Z = E[G]^{-1}, assembled from pulse_moment directly.
inline Eigen::MatrixXd reference_Z(const Pulse& pulse, const DelayDist& dist, double e, int N)
{
    Eigen::MatrixXd EG = Eigen::MatrixXd::Zero(N, N);
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q)
            if (std::abs(p - q) <= pulse.max_lag())
                EG(p, q) = pulse_moment(pulse, dist, e, p - q, 1);
    return EG.inverse();
}

inline EntryStats brute_force(ReceiverKind kind, const Scenario& sc, const MomentTable& mt, int trials,
                              std::uint64_t seed)
{
    const auto& cfg = sc.cfg;
    const int K = cfg.K, M = cfg.M, N = cfg.N, a = cfg.reference_symbol();
    const std::vector<double> origins =
        kind == ReceiverKind::mrczf_imperfect ? cfg.e_t : std::vector<double>{cfg.e};
    const int S = static_cast<int>(origins.size());

    Eigen::MatrixXd Z;
    double zz = 1.0;
    if (kind == ReceiverKind::mrczf_perfect) {
        Z = reference_Z(sc.pulse, sc.dist, cfg.e, N);
        zz = (Z * Z.transpose())(a, a);
    }
    std::vector<Eigen::RowVectorXcd> wrow(K);
    std::vector<double> wcw(K, 1.0);
    if (kind == ReceiverKind::mrczf_imperfect) {
        const Eigen::MatrixXd cov = noise_cov_oversampled(sc.pulse, origins, N);
        for (int l = 0; l < K; ++l) {
            const auto gw = build_Gamma_W(mt, l);
            wrow[l] = gw.W_ll(N).row(a);
            wcw[l] = (wrow[l] * cov.cast<cd>() * wrow[l].adjoint())(0, 0).real();
        }
    }

    std::vector<Eigen::MatrixXcd> s1(K, Eigen::MatrixXcd::Zero(K, N));
    std::vector<Eigen::MatrixXd> sre2(K, Eigen::MatrixXd::Zero(K, N)), sim2(K, Eigen::MatrixXd::Zero(K, N));
    std::vector<Eigen::MatrixXd> sq(K, Eigen::MatrixXd::Zero(K, N)), sq2(K, Eigen::MatrixXd::Zero(K, N));
    std::vector<double> sn(K, 0.0), sn2(K, 0.0);

    for (int t = 0; t < trials; ++t) {
        RandomStream rng(seed, static_cast<std::uint64_t>(t));
        Eigen::MatrixXd tau(M, K);
        Eigen::MatrixXcd C(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                tau(m, k) = sc.dist.sample(rng);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                C(m, k) = std::sqrt(cfg.beta[k]) * rng.complex_normal();
        // The effective channel uses the noise-free estimate; estimation
        // noise reaches the output only through the effective noise term.
        Eigen::MatrixXcd Ct = C, Cn = C, E;
        if (is_imperfect(kind)) {
            const auto Yp = synthesize_pilot_block(sc.pulse, cfg.e_s, *sc.pilots, C, tau, cfg.rho_p(), false, rng);
            Ct = estimate_channels(Yp, sc.pilots->Phi, cfg.rho_p());
            Eigen::MatrixXcd W(M, sc.pilots->N_p());
            for (int m = 0; m < M; ++m)
                for (int n = 0; n < W.cols(); ++n)
                    W(m, n) = rng.complex_normal();
            E = estimate_channels(W, sc.pilots->Phi, cfg.rho_p());
            Cn = Ct + E;
        }

        // G[o][m*K + k]
        std::vector<std::vector<Eigen::MatrixXd>> G(S, std::vector<Eigen::MatrixXd>(M * K));
        for (int o = 0; o < S; ++o)
            for (int m = 0; m < M; ++m)
                for (int k = 0; k < K; ++k)
                    G[o][m * K + k] = build_G(sc.pulse, origins[o], tau(m, k), N).dense();

        auto corrected_row = [&](const Eigen::MatrixXcd& weights, int l, int k) {
            std::vector<Eigen::MatrixXcd> T(S, Eigen::MatrixXcd::Zero(N, N));
            for (int o = 0; o < S; ++o)
                for (int m = 0; m < M; ++m)
                    T[o] += (std::conj(weights(m, l)) * C(m, k) / static_cast<double>(M)) * G[o][m * K + k].cast<cd>();
            switch (kind) {
            case ReceiverKind::mrc_perfect:
            case ReceiverKind::mrc_imperfect: return Eigen::RowVectorXcd(T[0].row(a));
            case ReceiverKind::mrczf_perfect: return Eigen::RowVectorXcd((Z.cast<cd>() * T[0]).row(a));
            case ReceiverKind::mrczf_imperfect: break;
            }
            Eigen::MatrixXcd stacked(S * N, N);
            for (int o = 0; o < S; ++o)
                stacked.middleRows(o * N, N) = T[o];
            return Eigen::RowVectorXcd(wrow[l] * stacked);
        };

        for (int l = 0; l < K; ++l) {
            double est_leak = 0.0;
            for (int k = 0; k < K; ++k) {
                const Eigen::RowVectorXcd row = corrected_row(Ct, l, k);
                if (is_imperfect(kind))
                    est_leak += corrected_row(E, l, k).squaredNorm();
                for (int n = 0; n < N; ++n) {
                    const cd x = row(n);
                    s1[l](k, n) += x;
                    sre2[l](k, n) += x.real() * x.real();
                    sim2[l](k, n) += x.imag() * x.imag();
                    const double q = std::norm(x);
                    sq[l](k, n) += q;
                    sq2[l](k, n) += q * q;
                }
            }
            double nf = Cn.col(l).squaredNorm() / (static_cast<double>(M) * M);
            if (kind == ReceiverKind::mrczf_perfect)
                nf *= zz;
            if (kind == ReceiverKind::mrczf_imperfect)
                nf *= wcw[l];
            nf += cfg.rho_d * est_leak;
            sn[l] += nf;
            sn2[l] += nf * nf;
        }
    }

    const double n = trials;
    auto se = [n](double s, double s2) {
        const double m = s / n;
        return std::sqrt(std::max(0.0, s2 / n - m * m) / (n - 1));
    };
    EntryStats out;
    for (int l = 0; l < K; ++l) {
        out.mean.push_back(s1[l] / n);
        out.second.push_back(sq[l] / n);
        Eigen::MatrixXd ser(K, N), sei(K, N), seq(K, N);
        for (int k = 0; k < K; ++k)
            for (int c = 0; c < N; ++c) {
                ser(k, c) = se(s1[l](k, c).real(), sre2[l](k, c));
                sei(k, c) = se(s1[l](k, c).imag(), sim2[l](k, c));
                seq(k, c) = se(sq[l](k, c), sq2[l](k, c));
            }
        out.mean_se_re.push_back(ser);
        out.mean_se_im.push_back(sei);
        out.second_se.push_back(seq);
        out.noise.push_back(sn[l] / n);
        out.noise_se.push_back(se(sn[l], sn2[l]));
    }
    return out;
}

struct Agreement {
    int checked = 0;
    int outside = 0;
    double worst_z = 0.0;
};

// Counts entries whose closed-form value lies more than `sigmas` standard
// errors (plus a 1e-12 floor for deterministic entries) from the brute force.
inline Agreement compare(const SecondOrderStats& st, const EntryStats& bf, double sigmas)
{
    Agreement r;
    auto check = [&](double theory, double emp, double se) {
        ++r.checked;
        const double d = std::abs(theory - emp);
        const double tol = sigmas * se + 1e-12;
        if (d > tol)
            ++r.outside;
        if (se > 0)
            r.worst_z = std::max(r.worst_z, d / se);
    };
    for (int l = 0; l < st.K; ++l) {
        for (int k = 0; k < st.K; ++k)
            for (int c = 0; c < st.N; ++c) {
                check(st.mean[l](k, c).real(), bf.mean[l](k, c).real(), bf.mean_se_re[l](k, c));
                check(st.mean[l](k, c).imag(), bf.mean[l](k, c).imag(), bf.mean_se_im[l](k, c));
                check(st.second[l](k, c), bf.second[l](k, c), bf.second_se[l](k, c));
            }
        check(st.noise[l], bf.noise[l], bf.noise_se[l]);
    }
    return r;
}

} // namespace oracle
