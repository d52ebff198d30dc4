// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/receivers.hpp"
#include "asyncmimo/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace asyncmimo {

std::string to_string(ReceiverKind k)
{
    switch (k) {
    case ReceiverKind::mrc_perfect: return "mrc-perfect";
    case ReceiverKind::mrc_imperfect: return "mrc-imperfect";
    case ReceiverKind::mrczf_perfect: return "mrczf-perfect";
    case ReceiverKind::mrczf_imperfect: return "mrczf-imperfect";
    }
    return "?";
}

ReceiverKind parse_receiver(const std::string& s)
{
    for (auto k : kAllReceivers)
        if (s == to_string(k))
            return k;
    if (s == "mrc_perfect") return ReceiverKind::mrc_perfect;
    if (s == "mrc_imperfect") return ReceiverKind::mrc_imperfect;
    if (s == "mrczf_perfect" || s == "mrc-zf-perfect") return ReceiverKind::mrczf_perfect;
    if (s == "mrczf_imperfect" || s == "mrc-zf-imperfect") return ReceiverKind::mrczf_imperfect;
    throw ConfigError("unknown receiver '" + s +
                      "' (expected mrc-perfect, mrc-imperfect, mrczf-perfect or mrczf-imperfect)");
}

MomentRequest moment_request_for(ReceiverKind k)
{
    MomentRequest r;
    r.imperfect = is_imperfect(k);
    r.zf_perfect = k == ReceiverKind::mrczf_perfect;
    r.zf_imperfect = k == ReceiverKind::mrczf_imperfect;
    return r;
}

namespace {

template <class Mat>
double condition_impl(const Mat& A)
{
    if (A.rows() == 0)
        return 1.0;
    Eigen::PartialPivLU<Mat> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 0.0) || !std::isfinite(rc))
        return std::numeric_limits<double>::infinity();
    return 1.0 / rc;
}

} // namespace

double condition_estimate(const Eigen::MatrixXd& A)
{
    return condition_impl(A);
}

double condition_estimate(const Eigen::MatrixXcd& A)
{
    return condition_impl(A);
}

ZfPerfect build_Z(const TapMoments& taps, int N, double max_condition)
{
    ZfPerfect zf;
    zf.mean_G.setZero(N, N);
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q)
            zf.mean_G(p, q) = taps.Eg(p - q);
    zf.condition = condition_estimate(zf.mean_G);
    if (!(zf.condition <= max_condition)) {
        std::ostringstream os;
        os << "mean ISI matrix E[G] is singular or ill-conditioned (condition estimate " << zf.condition
           << ", limit " << max_condition << ")";
        throw SingularMatrixError(os.str(), zf.condition);
    }
    zf.Z = zf.mean_G.partialPivLu().inverse();
    return zf;
}

Eigen::MatrixXcd assemble_Gamma(const MomentTable& mt, int l)
{
    const int K = mt.K, N = mt.N, L = mt.L;
    if (mt.gamma1t_.empty())
        throw ConfigError("moment table lacks the oversampled cross moments");
    if (static_cast<int>(mt.e_t.size()) != K)
        throw ConfigError("need exactly K detection origins");
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(K * N, K * N);
    for (int t = 0; t < K; ++t)
        for (int k = 0; k < K; ++k)
            for (int q = 0; q < N; ++q)
                for (int n = std::max(0, q - L); n <= std::min(N - 1, q + L); ++n)
                    G(t * N + q, k * N + n) = mt.gamma1t(l, k, t, q - n);
    return G;
}

GammaW build_Gamma_W(const MomentTable& mt, int l, double max_condition)
{
    GammaW gw;
    gw.l = l;
    gw.Gamma = assemble_Gamma(mt, l);
    gw.condition = condition_estimate(gw.Gamma);
    if (!(gw.condition <= max_condition)) {
        std::ostringstream os;
        os << "Gamma_" << l + 1 << " is singular or ill-conditioned (condition estimate " << gw.condition
           << ", limit " << max_condition << "); the " << mt.K
           << " sample sets cannot separate the users. Check for repeated origins, or for more users than "
              "independent pulse taps (2L+1 = "
           << 2 * mt.L + 1 << ")";
        throw SingularMatrixError(os.str(), gw.condition);
    }
    gw.W = gw.Gamma.partialPivLu().inverse();
    return gw;
}

Eigen::MatrixXcd estimate_channels(const Eigen::MatrixXcd& Yp, const Eigen::MatrixXcd& Phi, double rho_p)
{
    if (Yp.cols() != Phi.cols())
        throw ConfigError("pilot block length does not match the pilot matrix");
    if (!(rho_p > 0.0))
        throw ConfigError("pilot power must be positive");
    return Yp * Phi.adjoint() / std::sqrt(rho_p);
}

std::vector<Eigen::MatrixXcd> leakage_coeffs(const PilotSet& pilots, const Pulse& pulse, double e_s,
                                             const Eigen::MatrixXd& tau)
{
    const int M = static_cast<int>(tau.rows());
    const int K = pilots.K();
    if (tau.cols() != K)
        throw ConfigError("delay matrix must have K columns");
    const int L = pulse.max_lag();
    std::vector<double> a(pulse.num_taps());
    std::vector<cd> col(K);
    std::vector<Eigen::MatrixXcd> out(M, Eigen::MatrixXcd(K, K));
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < K; ++j) {
            pulse.taps(e_s, tau(m, j), a.data());
            leakage_from_taps(pilots, a.data(), L, j, col.data());
            for (int l = 0; l < K; ++l)
                out[m](l, j) = col[l];
        }
    return out;
}

Eigen::VectorXcd mrc_combine(const Eigen::MatrixXcd& Y, const Eigen::VectorXcd& c_l)
{
    if (Y.rows() != c_l.size() || Y.rows() == 0)
        throw ConfigError("MRC weights must have one entry per antenna");
    return (c_l.adjoint() * Y).transpose() / static_cast<double>(Y.rows());
}

Eigen::VectorXcd mrczf_detect(const ZfPerfect& zf, const Eigen::VectorXcd& y_mrc)
{
    if (zf.Z.cols() != y_mrc.size())
        throw ConfigError("Z was built for a different frame length");
    return zf.Z.cast<cd>() * y_mrc;
}

Eigen::VectorXcd mrczf_detect(const GammaW& gw, int N, const Eigen::VectorXcd& y_os)
{
    if (gw.W.cols() != y_os.size() || gw.W.rows() < (gw.l + 1) * N)
        throw ConfigError("W_l was built for a different frame length or user count");
    return gw.W_ll(N) * y_os;
}

} // namespace asyncmimo
