// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/pulse.hpp"
#include "asyncmimo/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace asyncmimo {

namespace detail {

struct ConvTable {
    double rolloff = 0.0;
    double support = 0.0;
    double scale = 1.0; // unit-energy factor applied to the RRC formula
    double step = 1e-3;
    int half = 0;       // grid index of t = T
    std::vector<double> g;

    double rrc(double u) const; // untruncated, unnormalised, centred at 0
    double eval_g(double t) const;
};

double ConvTable::rrc(double u) const
{
    const double b = rolloff;
    const double pi = std::numbers::pi;
    if (std::abs(u) < 1e-10)
        return 1.0 - b + 4.0 * b / pi;
    if (b > 0.0 && std::abs(std::abs(u) - 1.0 / (4.0 * b)) < 1e-10) {
        return b / std::numbers::sqrt2 *
               ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
    }
    const double num = std::sin(pi * u * (1.0 - b)) + 4.0 * b * u * std::cos(pi * u * (1.0 + b));
    const double den = pi * u * (1.0 - 16.0 * b * b * u * u);
    return num / den;
}

double ConvTable::eval_g(double t) const
{
    const int last = 2 * half;
    if (t <= 0.0 || t >= 2.0 * support)
        return 0.0;
    const double x = t / step;
    int k = static_cast<int>(x);
    if (k >= last)
        k = last - 1;
    const double s = x - k;

    // Node derivatives; one-sided at the kinks 0, T, 2T so the interpolant
    // never smears across them.
    auto is_kink = [&](int n) { return n == 0 || n == half || n == last; };
    const double g0 = g[k], g1 = g[k + 1];
    double m0, m1;
    if (is_kink(k) || k == 0)
        m0 = (-3.0 * g[k] + 4.0 * g[k + 1] - g[k + 2]) * 0.5;
    else
        m0 = (g[k + 1] - g[k - 1]) * 0.5;
    if (is_kink(k + 1) || k + 1 == last)
        m1 = (3.0 * g[k + 1] - 4.0 * g[k] + g[k - 1]) * 0.5;
    else
        m1 = (g[k + 2] - g[k]) * 0.5;

    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * m1;
}

} // namespace detail

std::string to_string(PulseFamily f)
{
    return f == PulseFamily::rectangular ? "rect" : "rrc";
}

PulseFamily parse_pulse_family(const std::string& s)
{
    if (s == "rect" || s == "rectangular")
        return PulseFamily::rectangular;
    if (s == "rrc" || s == "root-raised-cosine" || s == "root_raised_cosine")
        return PulseFamily::root_raised_cosine;
    throw ConfigError("unknown pulse family '" + s + "' (expected rect or rrc)");
}

Pulse::Pulse() = default;

Pulse Pulse::rectangular()
{
    return Pulse{};
}

Pulse Pulse::root_raised_cosine(double rolloff, int sidelobes)
{
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw ConfigError("RRC rolloff must lie in [0, 1]");
    if (sidelobes < 1 || sidelobes > 32)
        throw ConfigError("RRC sidelobe count must lie in [1, 32]");

    Pulse out;
    out.family_ = PulseFamily::root_raised_cosine;
    out.rolloff_ = rolloff;
    out.sidelobes_ = sidelobes;
    out.support_ = 2.0 * (sidelobes + 1);
    out.max_lag_ = static_cast<int>(out.support_);

    auto tab = std::make_shared<detail::ConvTable>();
    tab->rolloff = rolloff;
    tab->support = out.support_;
    tab->half = static_cast<int>(std::lround(out.support_ / tab->step));
    const double T = out.support_;

    // Unit energy after truncation, from an accurate integral of the formula.
    std::vector<double> breaks;
    for (int i = 1; i < static_cast<int>(T); ++i)
        breaks.push_back(i);
    if (rolloff > 0.0) {
        breaks.push_back(T / 2 - 1.0 / (4.0 * rolloff));
        breaks.push_back(T / 2 + 1.0 / (4.0 * rolloff));
    }
    QuadOptions tight;
    tight.abs_tol = 1e-14;
    const double energy = integrate_scalar(
        [&](double t) {
            const double v = tab->rrc(t - T / 2);
            return v * v;
        },
        0.0, T, breaks, tight);
    tab->scale = 1.0 / std::sqrt(energy);

    // Trapezoidal self-convolution on the grid, then pin g(T) = 1.
    const int n = tab->half;
    std::vector<double> pg(n + 1);
    for (int j = 0; j <= n; ++j)
        pg[j] = tab->scale * tab->rrc(j * tab->step - T / 2);
    tab->g.assign(2 * n + 1, 0.0);
    for (int k = 0; k <= 2 * n; ++k) {
        const int lo = std::max(0, k - n), hi = std::min(k, n);
        if (hi <= lo)
            continue;
        double acc = 0.5 * (pg[lo] * pg[k - lo] + pg[hi] * pg[k - hi]);
        for (int j = lo + 1; j < hi; ++j)
            acc += pg[j] * pg[k - j];
        tab->g[k] = acc * tab->step;
    }
    const double peak = tab->g[n];
    for (auto& v : tab->g)
        v /= peak;
    out.table_ = std::move(tab);
    return out;
}

std::string Pulse::describe() const
{
    if (family_ == PulseFamily::rectangular)
        return "rect";
    std::ostringstream os;
    os << "rrc(rolloff=" << rolloff_ << ",sidelobes=" << sidelobes_ << ')';
    return os.str();
}

double Pulse::p(double t) const
{
    if (t < 0.0 || t > support_)
        return 0.0;
    if (family_ == PulseFamily::rectangular)
        return 1.0;
    return table_->scale * table_->rrc(t - support_ / 2);
}

double Pulse::g(double t) const
{
    if (family_ == PulseFamily::rectangular) {
        if (t <= 0.0 || t >= 2.0)
            return 0.0;
        return t <= 1.0 ? t : 2.0 - t;
    }
    return table_->eval_g(t);
}

void Pulse::taps(double e, double tau, double* out) const
{
    const double base = e + support_ - tau;
    for (int i = -max_lag_; i <= max_lag_; ++i)
        out[i + max_lag_] = g(base + i);
}

std::vector<double> Pulse::tap_breaks(double e) const
{
    // T and all kinks of g sit on integers, so every tap kinks at tau = frac(e).
    const double f = e - std::floor(e);
    if (f > 0.0 && f < 1.0)
        return {f};
    return {};
}

double pulse_moment(const Pulse& pulse, const DelayDist& dist, double e, int lag, int power,
                    const QuadOptions& opt)
{
    if (power != 1 && power != 2)
        throw ConfigError("pulse_moment: power must be 1 or 2");
    if (!(e >= 0.0 && e <= 1.0))
        throw ConfigError("sampling origin e must lie in [0, 1]");
    if (std::abs(lag) > pulse.max_lag())
        return 0.0;
    const auto breaks = pulse.tap_breaks(e);
    return dist.expect(
        [&](double tau) {
            const double v = pulse.tap(e, lag, tau);
            return power == 1 ? v : v * v;
        },
        breaks, opt);
}

TapMoments tap_moments(const Pulse& pulse, const DelayDist& dist, double e, const QuadOptions& opt)
{
    if (!(e >= 0.0 && e <= 1.0))
        throw ConfigError("sampling origin e must lie in [0, 1]");
    const int L = pulse.max_lag();
    const int n = 2 * L + 1;
    const std::size_t dim = static_cast<std::size_t>(n + n * n);
    std::vector<double> a(n);
    auto fn = [&](double tau, double* out) {
        pulse.taps(e, tau, a.data());
        for (int i = 0; i < n; ++i) {
            out[i] = a[i];
            for (int j = 0; j < n; ++j)
                out[n + i * n + j] = a[i] * a[j];
        }
    };
    const auto breaks = pulse.tap_breaks(e);
    const auto v = dist.expect_vec(fn, dim, breaks, opt);

    TapMoments tm;
    tm.max_lag = L;
    tm.mean.assign(v.begin(), v.begin() + n);
    tm.cross.assign(v.begin() + n, v.end());
    tm.power.resize(n);
    for (int i = 0; i < n; ++i)
        tm.power[i] = tm.cross[i * n + i];
    return tm;
}

double rect_mixture_moment(int K, double e, int lag, int power)
{
    const double w0 = 1.0 / K, wu = (K - 1.0) / K;
    const double f = 1.0 - e;
    if (power == 1) {
        switch (lag) {
        case 0: return w0 * f + wu * (0.5 + e - e * e);
        case -1: return w0 * e + wu * e * e / 2.0;
        case 1: return wu * f * f / 2.0;
        default: return 0.0;
        }
    }
    if (power == 2) {
        switch (lag) {
        case 0: return w0 * f * f + wu * (1.0 / 3.0 + e - e * e);
        case -1: return w0 * e * e + wu * e * e * e / 3.0;
        case 1: return wu * f * f * f / 3.0;
        default: return 0.0;
        }
    }
    throw ConfigError("rect_mixture_moment: power must be 1 or 2");
}

} // namespace asyncmimo
