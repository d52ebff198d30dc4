// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/channel.hpp"
#include "asyncmimo/pulse.hpp"

#include <Eigen/Dense>

#include <vector>

namespace asyncmimo {

// Banded Toeplitz N x N matrix, entry (p, q) = taps[p - q + L] for |p - q| <= L.
struct BandedToeplitz {
    int N = 0;
    int L = 0;
    std::vector<double> taps;

    double operator()(int p, int q) const
    {
        const int d = p - q;
        return (d < -L || d > L) ? 0.0 : taps[d + L];
    }
    Eigen::MatrixXd dense() const;
    // y += alpha * G x
    void apply_add(const Eigen::VectorXcd& x, std::complex<double> alpha, Eigen::VectorXcd& y) const;
};

// G(p, q) = g(e + T + (p - q) - tau).
BandedToeplitz build_G(const Pulse& pulse, double e, double tau, int N);

// One data-phase realisation: fading H (M x K), delays tau (M x K), frames
// b (K x N, unit-power symbols).
struct ChannelRealization {
    Eigen::MatrixXcd H;
    Eigen::MatrixXd tau;
    Eigen::MatrixXcd b;
};

// Unit-power QPSK frames.
Eigen::MatrixXcd gen_frames(int K, int N, RandomStream& rng);

// y_m = sqrt(rho_d) sum_k sqrt(beta_k) h_km G_km b_k + n_m, sampled at origin e.
// Returns M x N.
Eigen::MatrixXcd synthesize_rx(const LinkConfig& cfg, const Pulse& pulse, const ChannelRealization& rz,
                               bool include_noise, RandomStream& rng);

// Covariance of the noise samples taken at several origins, KN x KN with
// block (t1, t2) entries g(T + (p - q) + e_t1 - e_t2).
Eigen::MatrixXd noise_cov_oversampled(const Pulse& pulse, const std::vector<double>& origins, int N);

// Square-root factor F with F F^T = cov, from a pivoted LDL^T that tolerates
// semidefinite input.
class NoiseFactor {
public:
    explicit NoiseFactor(const Eigen::MatrixXd& cov);
    int dim() const { return static_cast<int>(F_.rows()); }
    const Eigen::MatrixXd& factor() const { return F_; }
    // Zero-mean circular complex Gaussian with covariance cov.
    Eigen::VectorXcd draw(RandomStream& rng) const;

private:
    Eigen::MatrixXd F_;
};

Eigen::VectorXcd sample_correlated_noise(const Eigen::MatrixXd& cov, RandomStream& rng);

// Same model as synthesize_rx but sampled at every origin in `origins`; the
// per-antenna output is the stacked vector [y^(1); ...; y^(T)] (M x TN) with
// correlated noise.
Eigen::MatrixXcd synthesize_rx_oversampled(const LinkConfig& cfg, const Pulse& pulse,
                                           const ChannelRealization& rz, const std::vector<double>& origins,
                                           const NoiseFactor* noise, RandomStream& rng);

// Pilot phase: y_m(n) = sqrt(rho_p) sum_k c_km sum_i a_i(e_s, tau_km) x_k(n - i) + n_m(n),
// n = 0..N_p-1, with c = C (M x K, already including sqrt(beta)).
Eigen::MatrixXcd synthesize_pilot_block(const Pulse& pulse, double e_s, const PilotSet& pilots,
                                        const Eigen::MatrixXcd& C, const Eigen::MatrixXd& tau, double rho_p,
                                        bool include_noise, RandomStream& rng);

} // namespace asyncmimo
