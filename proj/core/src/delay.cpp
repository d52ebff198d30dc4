// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/delay.hpp"
#include "asyncmimo/errors.hpp"

#include <cmath>
#include <sstream>

namespace asyncmimo {

DelayDist::DelayDist() : comps_{{1.0, PointMass{0.0}}} {}

DelayDist::DelayDist(std::vector<DelayComponent> components) : comps_(std::move(components))
{
    if (comps_.empty())
        throw ConfigError("delay distribution has no components");
    double total = 0.0;
    for (const auto& c : comps_) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw ConfigError("delay component weight must be finite and nonnegative");
        total += c.weight;
        if (const auto* pm = std::get_if<PointMass>(&c.shape)) {
            if (!(pm->at >= 0.0 && pm->at <= 1.0))
                throw ConfigError("point-mass delay must lie in [0, 1]");
        } else {
            const auto& u = std::get<UniformRange>(c.shape);
            if (!(u.lo >= 0.0 && u.hi <= 1.0 && u.lo < u.hi))
                throw ConfigError("uniform delay range must satisfy 0 <= lo < hi <= 1");
        }
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("delay mixture weights sum to " + std::to_string(total) + ", expected 1");
}

DelayDist DelayDist::standard_mixture(int K)
{
    if (K < 1)
        throw ConfigError("standard delay mixture needs K >= 1");
    if (K == 1)
        return point(0.0);
    const double w0 = 1.0 / K;
    return DelayDist({{w0, PointMass{0.0}}, {1.0 - w0, UniformRange{0.0, 1.0}}});
}

DelayDist DelayDist::point(double tau0)
{
    return DelayDist({{1.0, PointMass{tau0}}});
}

DelayDist DelayDist::uniform(double lo, double hi)
{
    return DelayDist({{1.0, UniformRange{lo, hi}}});
}

double DelayDist::mean() const
{
    double m = 0.0;
    for (const auto& c : comps_) {
        if (const auto* pm = std::get_if<PointMass>(&c.shape))
            m += c.weight * pm->at;
        else {
            const auto& u = std::get<UniformRange>(c.shape);
            m += c.weight * 0.5 * (u.lo + u.hi);
        }
    }
    return m;
}

std::string DelayDist::describe() const
{
    std::ostringstream os;
    os.precision(9);
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (i)
            os << " + ";
        const auto& c = comps_[i];
        os << c.weight << '*';
        if (const auto* pm = std::get_if<PointMass>(&c.shape))
            os << "delta(" << pm->at << ')';
        else {
            const auto& u = std::get<UniformRange>(c.shape);
            os << "U(" << u.lo << ',' << u.hi << ')';
        }
    }
    return os.str();
}

double DelayDist::sample(RandomStream& rng) const
{
    double pick = rng.uniform();
    const DelayComponent* chosen = &comps_.back();
    for (const auto& c : comps_) {
        if (pick < c.weight) {
            chosen = &c;
            break;
        }
        pick -= c.weight;
    }
    if (const auto* pm = std::get_if<PointMass>(&chosen->shape))
        return pm->at;
    const auto& u = std::get<UniformRange>(chosen->shape);
    return u.lo + (u.hi - u.lo) * rng.uniform();
}

std::vector<double> DelayDist::sample(std::size_t count, RandomStream& rng) const
{
    std::vector<double> out(count);
    for (auto& t : out)
        t = sample(rng);
    return out;
}

double DelayDist::expect(const std::function<double(double)>& fn, std::span<const double> breaks,
                         const QuadOptions& opt) const
{
    auto wrapped = [&fn](double t, double* out) { out[0] = fn(t); };
    return expect_vec(wrapped, 1, breaks, opt)[0];
}

} // namespace asyncmimo
