// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/channel.hpp"
#include "asyncmimo/moments.hpp"
#include "asyncmimo/pulse.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace asyncmimo {

enum class ReceiverKind { mrc_perfect, mrc_imperfect, mrczf_perfect, mrczf_imperfect };

inline constexpr ReceiverKind kAllReceivers[] = {ReceiverKind::mrc_perfect, ReceiverKind::mrc_imperfect,
                                                 ReceiverKind::mrczf_perfect, ReceiverKind::mrczf_imperfect};

std::string to_string(ReceiverKind k);
ReceiverKind parse_receiver(const std::string& s);
inline bool is_imperfect(ReceiverKind k)
{
    return k == ReceiverKind::mrc_imperfect || k == ReceiverKind::mrczf_imperfect;
}
inline bool is_zf(ReceiverKind k)
{
    return k == ReceiverKind::mrczf_perfect || k == ReceiverKind::mrczf_imperfect;
}
// Which moment tables a receiver needs.
MomentRequest moment_request_for(ReceiverKind k);

// Perfect-CSI corrector: Z = inverse of the Toeplitz matrix of E[g_{p-q}].
struct ZfPerfect {
    Eigen::MatrixXd mean_G; // E[G]
    Eigen::MatrixXd Z;
    double condition = 0.0;
};
ZfPerfect build_Z(const TapMoments& taps, int N, double max_condition = 1e8);
inline ZfPerfect build_Z(const MomentTable& mt, int N, double max_condition = 1e8)
{
    return build_Z(mt.taps, N, max_condition);
}

// Imperfect-CSI corrector for user l. Rows of Gamma_l are indexed by
// (sample set t, symbol q), columns by (user k, symbol n):
// Gamma_l(tN + q, kN + n) = gamma'_{lkkt}(q - n).
struct GammaW {
    int l = 0;
    Eigen::MatrixXcd Gamma;
    Eigen::MatrixXcd W;
    double condition = 0.0;
    Eigen::MatrixXcd W_ll(int N) const { return W.middleRows(l * N, N); }
};
Eigen::MatrixXcd assemble_Gamma(const MomentTable& mt, int l);
GammaW build_Gamma_W(const MomentTable& mt, int l, double max_condition = 1e8);

// C~ = Y_p Phi^H / sqrt(rho_p); Y_p is M x N_p, result M x K.
Eigen::MatrixXcd estimate_channels(const Eigen::MatrixXcd& Yp, const Eigen::MatrixXcd& Phi, double rho_p);

// lambda[m](l, j) = sum_i a_i(e_s, tau_jm) Upsilon^i(j, l).
std::vector<Eigen::MatrixXcd> leakage_coeffs(const PilotSet& pilots, const Pulse& pulse, double e_s,
                                             const Eigen::MatrixXd& tau);

// y_l = (1/M) sum_m conj(c~_lm) y_m; Y is M x S (rows are antennas).
Eigen::VectorXcd mrc_combine(const Eigen::MatrixXcd& Y, const Eigen::VectorXcd& c_l);

// Perfect CSI: Z y. Imperfect CSI: W_ll y_os for the stacked oversampled MRC output.
Eigen::VectorXcd mrczf_detect(const ZfPerfect& zf, const Eigen::VectorXcd& y_mrc);
Eigen::VectorXcd mrczf_detect(const GammaW& gw, int N, const Eigen::VectorXcd& y_os);

// Reciprocal 1-norm condition estimate of a square matrix via LU, as a
// condition number (inf when singular).
double condition_estimate(const Eigen::MatrixXd& A);
double condition_estimate(const Eigen::MatrixXcd& A);

} // namespace asyncmimo
