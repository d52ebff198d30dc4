// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/quadrature.hpp"
#include "asyncmimo/rng.hpp"

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace asyncmimo {

struct PointMass {
    double at = 0.0;
};

struct UniformRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct DelayComponent {
    double weight = 1.0;
    std::variant<PointMass, UniformRange> shape;
};

// Distribution of a symbol-level delay tau (in symbol periods). A finite
// mixture of point masses and uniform ranges, all supported on [0, 1].
// Delays of different users and antennas are i.i.d. draws from it.
class DelayDist {
public:
    DelayDist(); // point mass at 0
    explicit DelayDist(std::vector<DelayComponent> components);

    // (1/K) delta(tau) + ((K-1)/K) U(0, 1)
    static DelayDist standard_mixture(int K);
    static DelayDist point(double tau0);
    static DelayDist uniform(double lo, double hi);

    const std::vector<DelayComponent>& components() const { return comps_; }
    double mean() const;
    std::string describe() const;

    double sample(RandomStream& rng) const;
    std::vector<double> sample(std::size_t count, RandomStream& rng) const;

    // E[fn(tau)]. `breaks` lists tau values where fn may have kinks; uniform
    // components are split there before adaptive quadrature.
    double expect(const std::function<double(double)>& fn, std::span<const double> breaks = {},
                  const QuadOptions& opt = {}) const;

    // Vector-valued expectation, fn(tau, out[dim]).
    template <class F>
    std::vector<double> expect_vec(F&& fn, std::size_t dim, std::span<const double> breaks = {},
                                   const QuadOptions& opt = {}) const
    {
        std::vector<double> acc(dim, 0.0), tmp(dim);
        for (const auto& c : comps_) {
            if (c.weight == 0.0)
                continue;
            if (const auto* pm = std::get_if<PointMass>(&c.shape)) {
                fn(pm->at, tmp.data());
                for (std::size_t d = 0; d < dim; ++d)
                    acc[d] += c.weight * tmp[d];
            } else {
                const auto& u = std::get<UniformRange>(c.shape);
                const double w = c.weight / (u.hi - u.lo);
                QuadOptions o = opt;
                o.abs_tol = opt.abs_tol / c.weight * (u.hi - u.lo);
                const auto r = integrate(fn, dim, u.lo, u.hi, breaks, o);
                for (std::size_t d = 0; d < dim; ++d)
                    acc[d] += w * r.value[d];
            }
        }
        return acc;
    }

private:
    std::vector<DelayComponent> comps_;
};

} // namespace asyncmimo
