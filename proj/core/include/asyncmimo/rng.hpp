// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace asyncmimo {

// Philox4x32-10 block function (Salmon et al., SC'11). Counter based, so any
// (seed, stream, position) triple can be reached without stepping through the
// sequence. Stateless.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// One independent substream of a seeded Philox generator. A Monte Carlo trial
// owns exactly one of these, derived from (seed, trial index).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double uniform();      // [0, 1), 53 random bits
    double uniform_pos();  // (0, 1]
    double normal();       // N(0, 1), Box-Muller
    std::complex<double> complex_normal(); // CN(0, 1): each part has variance 1/2

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace asyncmimo
