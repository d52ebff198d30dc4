// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/channel.hpp"
#include "asyncmimo/moments.hpp"
#include "asyncmimo/receivers.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace asyncmimo {

// First and second moments of the effective channel row a (the reference
// symbol) for every user pair, plus the effective noise variance:
//   mean[l](k, n)   = E[T_lk(a, n)]
//   second[l](k, n) = E[|T_lk(a, n)|^2]
//   noise[l]        = variance of the noise term after detection, including
//                     the channel-estimation noise leaking through the data
//                     (already multiplied by rho_d where it applies)
struct SecondOrderStats {
    ReceiverKind kind = ReceiverKind::mrc_perfect;
    int K = 0, N = 0, M = 0, ref = 0;
    double rho_d = 0.0;
    double kappa = 1.0; // 1 for perfect CSI
    std::vector<Eigen::MatrixXcd> mean;
    std::vector<Eigen::MatrixXd> second;
    std::vector<double> noise;
};

struct RateReport {
    ReceiverKind kind = ReceiverKind::mrc_perfect;
    double kappa = 1.0;
    std::vector<double> rate; // bits/symbol
    std::vector<double> signal, isi, iui, noise;
    double sum_rate() const;
    double sinr(int l) const;
};

SecondOrderStats second_order_stats(ReceiverKind kind, const LinkConfig& cfg, const MomentTable& mt);

// Worst-case uncorrelated-noise rate:
//   R_l = kappa log2(1 + rho |E T_ll(a,a)|^2 /
//                    (rho sum_k sum_n E|T_lk(a,n)|^2 - rho |E T_ll(a,a)|^2 + sigma^2))
RateReport rate_from_stats(const SecondOrderStats& stats);

// The four printed closed forms (theorem 1..4 = mrc-perfect, mrc-imperfect,
// mrczf-perfect, mrczf-imperfect). Components are in the printed (M-scaled)
// normalisation.
RateReport theorem_rate(int theorem, const LinkConfig& cfg, const MomentTable& mt);
ReceiverKind theorem_receiver(int theorem);

// Closed form for Zadoff-Chu pilots without contamination, written only in
// terms of E[g_i], E[g_i^2].
double zc_closed_form_rate(const LinkConfig& cfg, const MomentTable& mt, int l);

// Textbook synchronous rates (no delays), used by the degeneracy checks.
double sync_classical_rate(ReceiverKind kind, const LinkConfig& cfg, int l);

enum class PowerScaling { fixed_power, power_over_M, power_over_sqrtM };
enum class LimitKind { M_to_inf, M_and_power_to_inf };
std::string to_string(PowerScaling s);
PowerScaling parse_power_scaling(const std::string& s);

// Large-array limits per user (may be +inf when the rate is unbounded).
std::vector<double> asymptotic_limit(ReceiverKind kind, const LinkConfig& cfg, const MomentTable& mt,
                                     PowerScaling scaling, LimitKind limit);
// The MRC-ZF imperfect-CSI limit in the form log2(1 + E_d beta_l / v_l0) as
// it is usually quoted; asymptotic_limit() returns the form that follows from
// the rate expression itself.
std::vector<double> mrczf_imperfect_limit_quoted(const LinkConfig& cfg, const MomentTable& mt);

// Saturation SIRs used by the sampling-origin optimiser.
double saturation_sir_perfect(const MomentTable& mt);
double saturation_sir_imperfect(const MomentTable& mt, const std::vector<double>& beta, int l);

// 2 log2(1 + c sigma^2 / (M mu^2)) with mu = min_l |E T_ll(a,a)|^2 and
// sigma^2 = max_{l,k,n} 4 |E T_lk|^2 Var_1[T_lk], Var_1 the per-antenna variance.
double approx_error_bound(const SecondOrderStats& stats, int M, double c = 1.0);

} // namespace asyncmimo
