// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/discretize.hpp"
#include "asyncmimo/errors.hpp"

#include <cmath>

namespace asyncmimo {

Eigen::MatrixXd BandedToeplitz::dense() const
{
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
    for (int p = 0; p < N; ++p)
        for (int q = std::max(0, p - L); q <= std::min(N - 1, p + L); ++q)
            G(p, q) = taps[p - q + L];
    return G;
}

void BandedToeplitz::apply_add(const Eigen::VectorXcd& x, std::complex<double> alpha, Eigen::VectorXcd& y) const
{
    for (int p = 0; p < N; ++p) {
        std::complex<double> acc = 0.0;
        for (int q = std::max(0, p - L); q <= std::min(N - 1, p + L); ++q)
            acc += taps[p - q + L] * x[q];
        y[p] += alpha * acc;
    }
}

BandedToeplitz build_G(const Pulse& pulse, double e, double tau, int N)
{
    if (!(tau >= 0.0 && tau <= 1.0))
        throw ConfigError("delay tau must lie in [0, 1]");
    BandedToeplitz G;
    G.N = N;
    G.L = pulse.max_lag();
    G.taps.resize(pulse.num_taps());
    pulse.taps(e, tau, G.taps.data());
    return G;
}

Eigen::MatrixXcd gen_frames(int K, int N, RandomStream& rng)
{
    Eigen::MatrixXcd b(K, N);
    const double s = std::sqrt(0.5);
    for (int k = 0; k < K; ++k)
        for (int n = 0; n < N; ++n) {
            const auto bits = rng.next_u64();
            b(k, n) = {bits & 1 ? s : -s, bits & 2 ? s : -s};
        }
    return b;
}

namespace {

void check_realization(const LinkConfig& cfg, const ChannelRealization& rz)
{
    if (rz.H.rows() != cfg.M || rz.H.cols() != cfg.K || rz.tau.rows() != cfg.M || rz.tau.cols() != cfg.K ||
        rz.b.rows() != cfg.K || rz.b.cols() != cfg.N || static_cast<int>(cfg.beta.size()) != cfg.K)
        throw ConfigError("channel realization dimensions do not match the link configuration");
}

} // namespace

Eigen::MatrixXcd synthesize_rx(const LinkConfig& cfg, const Pulse& pulse, const ChannelRealization& rz,
                               bool include_noise, RandomStream& rng)
{
    return synthesize_rx_oversampled(cfg, pulse, rz, {cfg.e}, nullptr, rng) +
           (include_noise ? Eigen::MatrixXcd(gen_fading(cfg.N, cfg.M, rng)) : Eigen::MatrixXcd::Zero(cfg.M, cfg.N));
}

Eigen::MatrixXd noise_cov_oversampled(const Pulse& pulse, const std::vector<double>& origins, int N)
{
    const int S = static_cast<int>(origins.size());
    const double T = pulse.support();
    Eigen::MatrixXd C(S * N, S * N);
    for (int t1 = 0; t1 < S; ++t1)
        for (int t2 = 0; t2 < S; ++t2)
            for (int p = 0; p < N; ++p)
                for (int q = 0; q < N; ++q)
                    C(t1 * N + p, t2 * N + q) = pulse.g(T + (p - q) + origins[t1] - origins[t2]);
    // Symmetrise away interpolation round-off, then check semidefiniteness.
    C = 0.5 * (C + C.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-6 * std::max(1.0, es.eigenvalues().maxCoeff()))
        throw InternalError("oversampled noise covariance is not positive semidefinite (min eigenvalue " +
                            std::to_string(lo) + ")");
    return C;
}

NoiseFactor::NoiseFactor(const Eigen::MatrixXd& cov)
{
    // Eigen-decomposition square root; clamps tiny negative eigenvalues so
    // duplicated origins (rank-deficient covariance) are handled exactly.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
        throw InternalError("noise covariance factorisation failed");
    Eigen::VectorXd ev = es.eigenvalues();
    const double tol = 1e-9 * std::max(1.0, ev.maxCoeff());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -tol)
            throw InternalError("noise covariance has a negative eigenvalue");
        ev[i] = ev[i] > tol ? std::sqrt(ev[i]) : 0.0;
    }
    F_ = es.eigenvectors() * ev.asDiagonal();
}

Eigen::VectorXcd NoiseFactor::draw(RandomStream& rng) const
{
    Eigen::VectorXcd z(F_.cols());
    for (int i = 0; i < z.size(); ++i)
        z[i] = rng.complex_normal();
    return F_ * z;
}

Eigen::VectorXcd sample_correlated_noise(const Eigen::MatrixXd& cov, RandomStream& rng)
{
    return NoiseFactor(cov).draw(rng);
}

Eigen::MatrixXcd synthesize_rx_oversampled(const LinkConfig& cfg, const Pulse& pulse,
                                           const ChannelRealization& rz, const std::vector<double>& origins,
                                           const NoiseFactor* noise, RandomStream& rng)
{
    check_realization(cfg, rz);
    const int S = static_cast<int>(origins.size());
    const int N = cfg.N;
    if (noise && noise->dim() != S * N)
        throw ConfigError("noise factor dimension does not match the oversampled frame");
    const double sr = std::sqrt(cfg.rho_d);
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(cfg.M, S * N);
    Eigen::VectorXcd y(N);
    for (int m = 0; m < cfg.M; ++m) {
        for (int t = 0; t < S; ++t) {
            y.setZero();
            for (int k = 0; k < cfg.K; ++k) {
                const auto G = build_G(pulse, origins[t], rz.tau(m, k), N);
                const std::complex<double> c = sr * std::sqrt(cfg.beta[k]) * rz.H(m, k);
                G.apply_add(rz.b.row(k).transpose(), c, y);
            }
            Y.block(m, t * N, 1, N) = y.transpose();
        }
        if (noise)
            Y.row(m) += noise->draw(rng).transpose();
    }
    return Y;
}

Eigen::MatrixXcd synthesize_pilot_block(const Pulse& pulse, double e_s, const PilotSet& pilots,
                                        const Eigen::MatrixXcd& C, const Eigen::MatrixXd& tau, double rho_p,
                                        bool include_noise, RandomStream& rng)
{
    const int M = static_cast<int>(C.rows());
    const int K = static_cast<int>(C.cols());
    const int Np = pilots.N_p();
    const int L = pulse.max_lag();
    if (K != pilots.K() || tau.rows() != M || tau.cols() != K)
        throw ConfigError("pilot block dimensions do not match");
    const double sr = std::sqrt(rho_p);
    std::vector<double> a(pulse.num_taps());
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(M, Np);
    for (int m = 0; m < M; ++m) {
        for (int k = 0; k < K; ++k) {
            pulse.taps(e_s, tau(m, k), a.data());
            const std::complex<double> c = sr * C(m, k);
            for (int n = 0; n < Np; ++n) {
                std::complex<double> acc = 0.0;
                for (int i = -L; i <= L; ++i)
                    acc += a[i + L] * pilots.transmitted(k, n - i);
                Y(m, n) += c * acc;
            }
        }
        if (include_noise)
            for (int n = 0; n < Np; ++n)
                Y(m, n) += rng.complex_normal();
    }
    return Y;
}

} // namespace asyncmimo
