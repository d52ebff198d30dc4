// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include <asyncmimo/discretize.hpp>
#include <asyncmimo/errors.hpp>

#include <doctest.h>

#include <cmath>

using namespace asyncmimo;
using cd = std::complex<double>;

namespace {

LinkConfig small_link(int K, int M, int N, double rho)
{
    LinkConfig c;
    c.K = K;
    c.M = M;
    c.N = N;
    c.rho_d = rho;
    c.e = 0.0;
    c.resolve_defaults(1);
    return c;
}

} // namespace

TEST_CASE("G matrices of the rectangular pulse")
{
    const auto p = Pulse::rectangular();
    CHECK((build_G(p, 0.0, 0.0, 6).dense() - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-15);

    const auto G = build_G(p, 0.0, 0.3, 6).dense();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) {
            const double want = r == c ? 0.7 : (r == c + 1 ? 0.3 : 0.0);
            CHECK(G(r, c) == doctest::Approx(want).epsilon(1e-12));
        }

    const auto G2 = build_G(p, 0.5, 0.2, 6).dense();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) {
            const double want = r == c ? 0.7 : (c == r + 1 ? 0.3 : 0.0);
            CHECK(G2(r, c) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("G is Toeplitz, banded and within g's range")
{
    RandomStream rng(8, 0);
    const auto rrc = Pulse::root_raised_cosine(0.5, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const double e = rng.uniform(), tau = rng.uniform();
        const auto G = build_G(rrc, e, tau, 24).dense();
        for (int r = 1; r < 24; ++r)
            for (int c = 1; c < 24; ++c) {
                CHECK(G(r, c) == G(r - 1, c - 1));
                if (std::abs(r - c) > rrc.max_lag())
                    CHECK(G(r, c) == 0.0);
                CHECK(G(r, c) <= 1.0 + 1e-12);
            }
    }
    const auto rect = Pulse::rectangular();
    for (int trial = 0; trial < 20; ++trial) {
        const auto G = build_G(rect, rng.uniform(), rng.uniform(), 10).dense();
        for (int r = 1; r < 9; ++r)
            CHECK(G.row(r).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("banded apply matches the dense product")
{
    const auto G = build_G(Pulse::root_raised_cosine(0.3, 2), 0.4, 0.6, 20);
    RandomStream rng(1, 1);
    Eigen::VectorXcd x(20), y = Eigen::VectorXcd::Zero(20);
    for (int i = 0; i < 20; ++i)
        x(i) = rng.complex_normal();
    G.apply_add(x, cd(0.5, -2.0), y);
    CHECK((y - cd(0.5, -2.0) * (G.dense().cast<cd>() * x)).norm() < 1e-12);
}

TEST_CASE("noiseless received frames")
{
    const auto p = Pulse::rectangular();
    RandomStream rng(6, 0);
    auto cfg = small_link(1, 1, 8, 4.0);
    cfg.beta = {0.25};
    ChannelRealization rz;
    rz.H = Eigen::MatrixXcd::Constant(1, 1, cd(0.3, -0.4));
    rz.tau = Eigen::MatrixXd::Zero(1, 1);
    rz.b = gen_frames(1, 8, rng);
    auto y = synthesize_rx(cfg, p, rz, false, rng);
    CHECK((y.row(0) - 2.0 * 0.5 * cd(0.3, -0.4) * rz.b.row(0)).norm() < 1e-14);

    cfg.beta = {1.0};
    rz.H(0, 0) = 1.0;
    rz.tau(0, 0) = 0.3;
    y = synthesize_rx(cfg, p, rz, false, rng);
    for (int n = 0; n < 8; ++n) {
        const cd want = 2.0 * (0.7 * rz.b(0, n) + (n > 0 ? 0.3 * rz.b(0, n - 1) : cd{}));
        CHECK(std::abs(y(0, n) - want) < 1e-12);
    }
}

TEST_CASE("synthesis is linear in the frames")
{
    const auto p = Pulse::root_raised_cosine(0.5, 1);
    RandomStream rng(3, 3);
    auto cfg = small_link(3, 4, 16, 2.0);
    cfg.beta = {1.0, 0.3, 2.0};
    ChannelRealization r1;
    r1.H = gen_fading(3, 4, rng);
    r1.tau = Eigen::MatrixXd(4, 3);
    for (int i = 0; i < 12; ++i)
        r1.tau(i) = rng.uniform();
    r1.b = gen_frames(3, 16, rng);
    auto r2 = r1;
    r2.b = gen_frames(3, 16, rng);
    auto r3 = r1;
    r3.b = cd(2.0, 1.0) * r1.b - 0.5 * r2.b;
    const auto y1 = synthesize_rx(cfg, p, r1, false, rng);
    const auto y2 = synthesize_rx(cfg, p, r2, false, rng);
    const auto y3 = synthesize_rx(cfg, p, r3, false, rng);
    CHECK((y3 - (cd(2.0, 1.0) * y1 - 0.5 * y2)).norm() < 1e-10);
}

TEST_CASE("sampled noise is white")
{
    const auto p = Pulse::rectangular();
    RandomStream rng(12, 0);
    auto cfg = small_link(1, 1, 4, 0.0);
    ChannelRealization rz;
    rz.H = Eigen::MatrixXcd::Ones(1, 1);
    rz.tau = Eigen::MatrixXd::Constant(1, 1, 0.4);
    rz.b = gen_frames(1, 4, rng);
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(4, 4);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXcd y = synthesize_rx(cfg, p, rz, true, rng).row(0).transpose();
        S += y * y.adjoint();
    }
    S /= n;
    CHECK((S - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("oversampled noise covariance")
{
    const auto p = Pulse::rectangular();
    CHECK((noise_cov_oversampled(p, {0.3}, 5) - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-15);

    const auto C = noise_cov_oversampled(p, {0.2, 0.7}, 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(C(i, 5 + i) == doctest::Approx(0.5));
        CHECK(C(5 + i, i) == doctest::Approx(0.5));
        CHECK(C(i, i) == 1.0);
    }
    const auto D = noise_cov_oversampled(p, {0.4, 0.4}, 5);
    CHECK((D.block(0, 5, 5, 5) - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-15);

    const auto rrc = Pulse::root_raised_cosine(0.5, 3);
    const auto R = noise_cov_oversampled(rrc, {0.25, 0.5, 0.75}, 12);
    CHECK((R - R.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
    CHECK((R.diagonal().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("correlated noise sampling")
{
    RandomStream rng(21, 0);
    const int n = 100000;
    Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
    NoiseFactor f3(I3);
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(3, 3);
    for (int i = 0; i < n; ++i) {
        const auto x = f3.draw(rng);
        S += x * x.adjoint();
    }
    CHECK((S / double(n) - I3.cast<cd>()).cwiseAbs().maxCoeff() < 0.01);

    Eigen::Matrix2d C;
    C << 1.0, 0.5, 0.5, 1.0;
    cd off = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto x = sample_correlated_noise(C, rng);
        off += x(0) * std::conj(x(1));
    }
    CHECK(std::abs(off / double(n) - 0.5) < 0.01);

    Eigen::Matrix2d R = Eigen::Matrix2d::Ones();
    NoiseFactor fr(R);
    for (int i = 0; i < 100; ++i) {
        const auto x = fr.draw(rng);
        CHECK(std::abs(x(0) - x(1)) < 1e-12);
    }
}
