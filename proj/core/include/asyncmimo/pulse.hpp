// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/delay.hpp"

#include <memory>
#include <string>
#include <vector>

namespace asyncmimo {

enum class PulseFamily { rectangular, root_raised_cosine };

std::string to_string(PulseFamily f);
PulseFamily parse_pulse_family(const std::string& s);

namespace detail {
struct ConvTable;
}

// Transmit pulse p(t) and its matched-filter response g(t) = (p*p)(t).
// Time is measured in symbol periods (T_s = 1). p lives on [0, T], g on
// [0, 2T] with g(T) = 1.
//
// The rectangle is exact. The truncated root-raised-cosine is renormalised to
// unit energy after truncation; its g is tabulated once by numeric
// self-convolution on a 1e-3 grid and interpolated with cubic Hermite pieces.
class Pulse {
public:
    Pulse(); // rectangular
    static Pulse rectangular();
    static Pulse root_raised_cosine(double rolloff, int sidelobes);

    PulseFamily family() const { return family_; }
    double rolloff() const { return rolloff_; }
    int sidelobes() const { return sidelobes_; }
    double support() const { return support_; } // T
    int max_lag() const { return max_lag_; }    // taps a_i with |i| > max_lag are 0
    std::string describe() const;

    double p(double t) const;
    double g(double t) const;

    // Sample of user's pulse seen at origin e when the user is delayed by tau:
    // a_i(e, tau) = g(e + T + i - tau).
    double tap(double e, int lag, double tau) const { return g(e + support_ + lag - tau); }
    // All taps i = -L..L into out[i + L].
    void taps(double e, double tau, double* out) const;
    int num_taps() const { return 2 * max_lag_ + 1; }

    // tau values in [0, 1] where some tap at origin e has a kink.
    std::vector<double> tap_breaks(double e) const;

private:
    PulseFamily family_ = PulseFamily::rectangular;
    double rolloff_ = 0.0;
    int sidelobes_ = 0;
    double support_ = 1.0;
    int max_lag_ = 1;
    std::shared_ptr<const detail::ConvTable> table_;
};

// E[g_lag^power] at sampling origin e over the delay distribution
// (power 1 or 2).
double pulse_moment(const Pulse& pulse, const DelayDist& dist, double e, int lag, int power,
                    const QuadOptions& opt = {});

// All first and second tap moments for lags -L..L at once.
struct TapMoments {
    int max_lag = 0;
    std::vector<double> mean;   // E[a_i],   index i + L
    std::vector<double> power;  // E[a_i^2], index i + L
    std::vector<double> cross;  // E[a_i a_j], row-major (2L+1)^2
    double Eg(int i) const { return std::abs(i) <= max_lag ? mean[i + max_lag] : 0.0; }
    double Eg2(int i) const { return std::abs(i) <= max_lag ? power[i + max_lag] : 0.0; }
};
TapMoments tap_moments(const Pulse& pulse, const DelayDist& dist, double e, const QuadOptions& opt = {});

// Closed-form moments of the rectangular pulse under the standard K-user
// mixture (first and second moments at lags -1, 0, 1). Independent of the
// quadrature path; used as a cross-check.
double rect_mixture_moment(int K, double e, int lag, int power);

} // namespace asyncmimo
