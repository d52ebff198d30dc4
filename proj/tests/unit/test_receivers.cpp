// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include <asyncmimo/asyncmimo.hpp>

#include <doctest.h>

#include <cmath>

using namespace asyncmimo;

TEST_CASE("Z for synchronous links is the identity")
{
    const auto zf = build_Z(tap_moments(Pulse::rectangular(), DelayDist::point(0.0), 0.0), 32);
    CHECK((zf.Z - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-12);
    // Truncation leaves small residual ISI on the root-raised-cosine taps.
    const auto zr = build_Z(tap_moments(Pulse::root_raised_cosine(0.5, 3), DelayDist::point(0.0), 0.0), 32);
    CHECK((zr.Z - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("Z inverts the mean G")
{
    const auto zf = build_Z(tap_moments(Pulse::rectangular(), DelayDist::uniform(0, 1), 0.5), 8);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        T(i, i) = 0.75;
        if (i > 0)
            T(i, i - 1) = T(i - 1, i) = 0.125;
    }
    CHECK((zf.Z - T.inverse()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((zf.Z * zf.mean_G - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(zf.condition >= 1.0);

    const auto z2 = build_Z(tap_moments(Pulse::root_raised_cosine(0.5, 3), DelayDist::standard_mixture(4), 0.3), 40);
    CHECK((z2.Z * z2.mean_G - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Gamma and W")
{
    // Synchronous, Zadoff-Chu: Gamma is the identity for one user.
    LinkConfig c1;
    c1.K = 1;
    c1.N = 16;
    c1.e = 0.0;
    c1.e_t = {0.0};
    c1.pilot_kind = PilotKind::zadoff_chu;
    auto sc1 = Scenario::make(c1, Pulse::rectangular(), DelayDist::point(0.0));
    MomentRequest rq;
    rq.imperfect = true;
    rq.zf_imperfect = true;
    const auto mt1 = sc1.moments(rq);
    const auto gw1 = build_Gamma_W(mt1, 0);
    CHECK((gw1.Gamma - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);

    // Two users: the cross blocks vanish, so Gamma cannot be inverted.
    auto c2 = c1;
    c2.K = 2;
    c2.e_t = {0.0, 0.5};
    auto sc2 = Scenario::make(c2, Pulse::rectangular(), DelayDist::point(0.0));
    MomentRequest rq_tables = rq;
    rq_tables.zf_imperfect = false;
    rq_tables.cross_tables = true;
    const auto mt2 = sc2.moments(rq_tables);
    const auto G2 = assemble_Gamma(mt2, 0);
    CHECK(G2.block(0, 16, 16, 16).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((G2.block(0, 0, 16, 16) - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(sc2.moments(rq), SingularMatrixError);

    // Repeated origins give repeated block rows.
    LinkConfig c3;
    c3.K = 2;
    c3.N = 16;
    c3.resolve_defaults(1);
    c3.e_t = {0.4, 0.4};
    const auto rect = Pulse::rectangular();
    const auto pil = make_link_pilots(c3, 1);
    CHECK_THROWS_AS(compute_moments(rect, DelayDist::standard_mixture(2), c3, &pil, rq), SingularMatrixError);

    LinkConfig c4;
    c4.K = 2;
    c4.N = 16;
    c4.e_t = {1.0 / 3.0, 2.0 / 3.0};
    auto sc4 = Scenario::make(c4, rect, DelayDist::standard_mixture(2));
    const auto mt4 = sc4.moments(rq);
    for (int l = 0; l < 2; ++l) {
        const auto gw = build_Gamma_W(mt4, l);
        CHECK((gw.W * gw.Gamma - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(gw.W_ll(16).rows() == 16);
    }
}

TEST_CASE("channel estimation without noise or delay is exact")
{
    RandomStream rng(5, 0);
    const auto pil = make_pilots(PilotKind::hadamard, 3, 4);
    const auto C = gen_fading(3, 10, rng);
    const Eigen::MatrixXd tau = Eigen::MatrixXd::Zero(10, 3);
    const auto Yp = synthesize_pilot_block(Pulse::rectangular(), 0.0, pil, C, tau, 8.0, false, rng);
    CHECK((estimate_channels(Yp, pil.Phi, 8.0) - C).norm() < 1e-12);
}

TEST_CASE("MRC-ZF with identity Z leaves the MRC output unchanged")
{
    RandomStream rng(1, 9);
    Eigen::MatrixXcd Y(6, 10);
    for (int i = 0; i < Y.size(); ++i)
        Y(i) = rng.complex_normal();
    const Eigen::VectorXcd c = Y.col(0);
    const auto y = mrc_combine(Y, c);
    const auto zf = build_Z(tap_moments(Pulse::rectangular(), DelayDist::point(0.0), 0.0), 10);
    CHECK((mrczf_detect(zf, y) - y).norm() < 1e-12);
    CHECK_THROWS_AS(mrczf_detect(zf, Eigen::VectorXcd::Zero(4)), ConfigError);
    CHECK_THROWS_AS(mrc_combine(Y, Eigen::VectorXcd::Zero(3)), ConfigError);
}

TEST_CASE("MRC-ZF restores unit gain with many antennas")
{
    const int K = 2, M = 100000, N = 12, a = N / 2;
    LinkConfig cfg;
    cfg.K = K;
    cfg.M = M;
    cfg.N = N;
    cfg.rho_d = 1.0;
    cfg.beta = {1.0, 0.4};
    cfg.e = 0.3;
    const auto rect = Pulse::rectangular();
    const auto dist = DelayDist::standard_mixture(K);
    const auto zf = build_Z(tap_moments(rect, dist, cfg.e), N);

    RandomStream rng(17, 0);
    ChannelRealization rz;
    rz.H = gen_fading(K, M, rng);
    rz.tau.resize(M, K);
    for (int i = 0; i < rz.tau.size(); ++i)
        rz.tau(i) = dist.sample(rng);
    for (int src = 0; src < K; ++src) {
        rz.b = Eigen::MatrixXcd::Zero(K, N);
        rz.b(src, a) = 1.0;
        const auto Y = synthesize_rx(cfg, rect, rz, false, rng);
        for (int l = 0; l < K; ++l) {
            const Eigen::VectorXcd c = std::sqrt(cfg.beta[l]) * rz.H.col(l);
            const auto out = mrczf_detect(zf, mrc_combine(Y, c));
            if (l == src)
                CHECK(std::abs(out(a) - cfg.beta[l]) <= 0.02 * cfg.beta[l]);
            else
                CHECK(std::abs(out(a)) <= 0.02 * cfg.beta[l]);
        }
    }
}

TEST_CASE("receiver names")
{
    for (auto k : kAllReceivers)
        CHECK(parse_receiver(to_string(k)) == k);
    CHECK_THROWS_AS(parse_receiver("mmse"), ConfigError);
    CHECK(is_imperfect(ReceiverKind::mrczf_imperfect));
    CHECK_FALSE(is_imperfect(ReceiverKind::mrczf_perfect));
    CHECK(is_zf(ReceiverKind::mrczf_perfect));
}
