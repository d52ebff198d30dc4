// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include <asyncmimo/rng.hpp>

#include <doctest.h>

#include <cmath>

using namespace asyncmimo;

TEST_CASE("philox known answers")
{
    // Reference vectors from the Random123 distribution.
    auto r = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(r == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    r = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(r == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(r == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct")
{
    RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differ_c = false, differ_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differ_c |= x != c.next_u64();
        differ_d |= x != d.next_u64();
    }
    CHECK(differ_c);
    CHECK(differ_d);
}

TEST_CASE("uniform and normal moments")
{
    RandomStream rng(1, 0);
    const int n = 400000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sre2 = 0, sim2 = 0;
    double umin = 1, umax = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        su2 += u * u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        const auto c = rng.complex_normal();
        sre2 += c.real() * c.real();
        sim2 += c.imag() * c.imag();
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.005));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(sre2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sim2 / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_pos never returns zero")
{
    RandomStream rng(5, 5);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_pos();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}
