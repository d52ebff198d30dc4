// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/channel.hpp"
#include "asyncmimo/delay.hpp"
#include "asyncmimo/pulse.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace asyncmimo {

using cd = std::complex<double>;

struct MomentRequest {
    bool imperfect = false;      // pilot-dependent tables (needs a PilotSet)
    bool zf_perfect = false;     // Z, xi'', eps
    bool zf_imperfect = false;   // Gamma_l, W_l, gammahat'', u, v
    bool cross_tables = false;   // oversampled cross moments only, no inversion
    double max_condition = 1e8;  // larger condition estimates are treated as singular
    QuadOptions quad{};
};

// Delay-averaged quantities that the closed-form rates are built from. Lags
// i run over -L..L (L = pulse.max_lag()); ZF tables are indexed by the column
// n = 0..N-1 of the reference row a = N/2.
//
// lambda_lk(tau) = sum_i Upsilon^i(k, l) a_i(e_s, tau) is the leakage of user
// k (delay tau) into user l's channel estimate.
struct MomentTable {
    int K = 0, N = 0, L = 0, ref = 0;
    double e = 0.0, e_s = 0.0;
    std::vector<double> e_t;
    TapMoments taps; // at origin e

    double Eg(int i) const { return taps.Eg(i); }
    double Eg2(int i) const { return taps.Eg2(i); }
    double tap_cross(int i, int j) const;

    // Imperfect CSI.
    bool has_pilots = false;
    std::vector<cd> gamma1_;        // E[conj(lambda_lk) a_i(e)],        (l, k, i)
    std::vector<double> gamma2s_;   // E[|lambda_lk|^2 a_i(e)^2],       (l, k, i)
    Eigen::MatrixXd lambda2;        // E[|lambda_lk|^2]

    cd gamma1(int l, int k, int i) const;            // gamma'_{lkk}(i)
    double gamma2(int l, int j, int k, int i) const; // gamma''_{ljk}(i)

    // MRC-ZF, perfect CSI.
    bool has_zf_perfect = false;
    Eigen::MatrixXd Z;
    double z_condition = 0.0;
    Eigen::VectorXd xi2; // E[G'(a, n)^2], G' = Z G
    double eps0 = 0.0;   // (Z Z^T)(a, a)

    // MRC-ZF, imperfect CSI.
    bool has_zf_imperfect = false;
    std::vector<cd> gamma1t_;                  // E[conj(lambda_lk(e_s)) a_i(e_t)], (l, k, t, i)
    std::vector<double> gamma_condition;       // per l
    std::vector<Eigen::RowVectorXcd> wrow;     // per l: row a of W_ll (length K N)
    std::vector<Eigen::VectorXd> ghat2;        // per l: E[|Ghat_l(a, n)|^2]
    std::vector<Eigen::MatrixXd> gammahat2s;   // per l: K x N, E[|lambda_lk|^2 |Ghat_l(a, n)|^2]
    std::vector<Eigen::MatrixXcd> ghat_mean;   // per l: K x N, E[conj(lambda_lk) Ghat_l(a, n)]
    std::vector<double> u, v;                  // per l

    cd gamma1t(int l, int k, int t, int i) const;
    double gammahat2(int l, int j, int k, int n) const; // gammahat''_{ljk}(a, n)
};

// Leakage lambda_lj for a source user j whose taps at e_s are given; writes
// K values (over l) into out.
void leakage_from_taps(const PilotSet& pilots, const double* taps_es, int L, int j, cd* out);

MomentTable compute_moments(const Pulse& pulse, const DelayDist& dist, const LinkConfig& cfg,
                            const PilotSet* pilots, const MomentRequest& req);

} // namespace asyncmimo
