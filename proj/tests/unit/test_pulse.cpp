// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include <asyncmimo/errors.hpp>
#include <asyncmimo/pulse.hpp>
#include <asyncmimo/quadrature.hpp>

#include <doctest.h>

#include <cmath>

using namespace asyncmimo;

TEST_CASE("rectangular pulse and triangle")
{
    const auto p = Pulse::rectangular();
    CHECK(p.support() == 1.0);
    CHECK(p.max_lag() == 1);
    CHECK(p.p(0.5) == 1.0);
    CHECK(p.p(1.5) == 0.0);
    CHECK(p.p(-0.1) == 0.0);
    CHECK(p.g(1.0) == 1.0);
    CHECK(p.g(0.7) == doctest::Approx(0.7));
    CHECK(p.g(1.3) == doctest::Approx(0.7));
    CHECK(p.g(0.0) == 0.0);
    CHECK(p.g(2.0) == 0.0);
    CHECK(p.g(2.5) == 0.0);
}

TEST_CASE("root raised cosine")
{
    CHECK_THROWS_AS(Pulse::root_raised_cosine(-0.1, 3), ConfigError);
    CHECK_THROWS_AS(Pulse::root_raised_cosine(1.1, 3), ConfigError);
    CHECK_THROWS_AS(Pulse::root_raised_cosine(0.5, 0), ConfigError);

    const auto p = Pulse::root_raised_cosine(0.5, 3);
    const double T = p.support();
    CHECK(T == 8.0);
    CHECK(p.max_lag() == 8);

    QuadOptions q;
    q.abs_tol = 1e-12;
    const std::vector<double> br = {T / 2};
    const double energy = integrate_scalar([&](double t) { return p.p(t) * p.p(t); }, 0.0, T, br, q);
    CHECK(std::abs(energy - 1.0) <= 1e-6);

    for (double a : {0.1, 0.77, 2.5, 3.9})
        CHECK(p.p(T - a) == doctest::Approx(p.p(a)).epsilon(1e-12));
    CHECK(p.p(-0.5) == 0.0);
    CHECK(p.p(T + 0.5) == 0.0);

    CHECK(p.g(T) == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 1; n <= 7; ++n) {
        CHECK(std::abs(p.g(T + n)) <= 0.02);
        CHECK(std::abs(p.g(T - n)) <= 0.02);
    }
    CHECK(p.g(-0.1) == 0.0);
    CHECK(p.g(2 * T + 0.1) == 0.0);
    for (double t : {0.3, 1.7, 5.2, 7.9})
        CHECK(p.g(2 * T - t) == doctest::Approx(p.g(t)).epsilon(1e-9));
}

TEST_CASE("tap vector matches g")
{
    for (const auto& p : {Pulse::rectangular(), Pulse::root_raised_cosine(0.35, 2)}) {
        std::vector<double> t(p.num_taps());
        for (double e : {0.0, 0.3, 0.999})
            for (double tau : {0.0, 0.41, 1.0}) {
                p.taps(e, tau, t.data());
                for (int i = -p.max_lag(); i <= p.max_lag(); ++i)
                    CHECK(t[i + p.max_lag()] == doctest::Approx(p.g(e + p.support() + i - tau)));
            }
    }
}

TEST_CASE("pulse moments of the standard mixture")
{
    const auto p = Pulse::rectangular();
    const auto d = DelayDist::standard_mixture(5);
    CHECK(pulse_moment(p, d, 0.5, 0, 1) == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(pulse_moment(p, d, 0.5, -1, 1) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(pulse_moment(p, d, 0.5, 1, 1) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(std::abs(pulse_moment(p, d, 0.5, 0, 2) - 0.516667) <= 1e-6);
    CHECK(pulse_moment(p, d, 0.5, 2, 1) == 0.0);
    CHECK_THROWS_AS(pulse_moment(p, d, 0.5, 0, 3), ConfigError);

    for (const auto& q : {Pulse::rectangular(), Pulse::root_raised_cosine(0.5, 3)})
        CHECK(pulse_moment(q, DelayDist::point(0.0), 0.0, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Jensen and partition of unity")
{
    const auto rect = Pulse::rectangular();
    const auto rrc = Pulse::root_raised_cosine(0.5, 3);
    const std::vector<DelayDist> dists = {DelayDist::standard_mixture(3), DelayDist::uniform(0.1, 0.9),
                                          DelayDist::point(0.25)};
    for (const auto& d : dists)
        for (double e : {0.0, 0.35, 0.8}) {
            double sum = 0.0;
            for (int i = -1; i <= 1; ++i) {
                const double m1 = pulse_moment(rect, d, e, i, 1);
                CHECK(m1 * m1 <= pulse_moment(rect, d, e, i, 2) + 1e-15);
                sum += m1;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
            const auto tm = tap_moments(rrc, d, e);
            for (int i = -tm.max_lag; i <= tm.max_lag; ++i)
                CHECK(tm.Eg(i) * tm.Eg(i) <= tm.Eg2(i) + 1e-12);
        }
}

TEST_CASE("rect closed forms agree with quadrature")
{
    const auto p = Pulse::rectangular();
    for (int K = 2; K <= 16; ++K)
        for (int s = 0; s <= 10; ++s) {
            const double e = 0.1 * s;
            const auto d = DelayDist::standard_mixture(K);
            for (int lag = -1; lag <= 1; ++lag)
                for (int pw = 1; pw <= 2; ++pw)
                    CHECK(std::abs(rect_mixture_moment(K, e, lag, pw) - pulse_moment(p, d, e, lag, pw)) <= 1e-9);
        }
}

TEST_CASE("tap moment table")
{
    const auto p = Pulse::rectangular();
    const auto tm = tap_moments(p, DelayDist::standard_mixture(5), 0.5);
    CHECK(tm.max_lag == 1);
    CHECK(tm.Eg(0) == doctest::Approx(0.7));
    CHECK(tm.Eg(5) == 0.0);
    const int n = 2 * tm.max_lag + 1;
    for (int i = 0; i < n; ++i) {
        CHECK(tm.cross[i * n + i] == doctest::Approx(tm.power[i]));
        for (int j = 0; j < n; ++j)
            CHECK(tm.cross[i * n + j] == doctest::Approx(tm.cross[j * n + i]));
    }
}

TEST_CASE("pulse family names")
{
    CHECK(parse_pulse_family("rect") == PulseFamily::rectangular);
    CHECK(parse_pulse_family("rrc") == PulseFamily::root_raised_cosine);
    CHECK(parse_pulse_family(to_string(PulseFamily::root_raised_cosine)) == PulseFamily::root_raised_cosine);
    CHECK_THROWS_AS(parse_pulse_family("sinc"), ConfigError);
}
