// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace asyncmimo {

struct QuadOptions {
    double abs_tol = 1e-9;
    int max_intervals = 20000;
};

struct QuadResult {
    std::vector<double> value;
    double error = 0.0; // sum over subintervals of the max-norm |K15 - G7|
    int intervals = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct QuadPiece {
    double a, b;
    double err;
    std::vector<double> value;
};

template <class F>
QuadPiece gk15(F& f, std::size_t dim, double a, double b, std::vector<double>& f1,
               std::vector<double>& f2)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::vector<double> kron(dim, 0.0), gauss(dim, 0.0);

    f(c, f1.data());
    for (std::size_t d = 0; d < dim; ++d) {
        kron[d] = kWgk[7] * f1[d];
        gauss[d] = kWg[3] * f1[d];
    }
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        f(c - dx, f1.data());
        f(c + dx, f2.data());
        for (std::size_t d = 0; d < dim; ++d) {
            const double s = f1[d] + f2[d];
            kron[d] += kWgk[j] * s;
            if (j % 2 == 1)
                gauss[d] += kWg[j / 2] * s;
        }
    }
    QuadPiece piece{a, b, 0.0, std::move(kron)};
    for (std::size_t d = 0; d < dim; ++d) {
        piece.value[d] *= h;
        piece.err = std::max(piece.err, std::abs(piece.value[d] - h * gauss[d]));
    }
    return piece;
}

} // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of a vector-valued
// integrand f(x, out[dim]) over [a, b]. The interval is first split at every
// breakpoint strictly inside (a, b); the piece with the largest error is then
// bisected until the summed error falls below opt.abs_tol.
template <class F>
QuadResult integrate(F&& f, std::size_t dim, double a, double b, std::span<const double> breaks = {},
                     const QuadOptions& opt = {})
{
    QuadResult res;
    res.value.assign(dim, 0.0);
    if (!(b > a))
        return res;

    std::vector<double> knots{a};
    for (double x : breaks)
        if (x > a && x < b)
            knots.push_back(x);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> f1(dim), f2(dim);
    std::vector<detail::QuadPiece> heap;
    auto by_err = [](const detail::QuadPiece& x, const detail::QuadPiece& y) { return x.err < y.err; };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        heap.push_back(detail::gk15(f, dim, knots[i], knots[i + 1], f1, f2));
        total += heap.back().err;
    }
    std::make_heap(heap.begin(), heap.end(), by_err);

    while (total > opt.abs_tol && static_cast<int>(heap.size()) < opt.max_intervals) {
        std::pop_heap(heap.begin(), heap.end(), by_err);
        detail::QuadPiece worst = std::move(heap.back());
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) { // cannot split further
            heap.push_back(std::move(worst));
            std::push_heap(heap.begin(), heap.end(), by_err);
            break;
        }
        total -= worst.err;
        for (auto piece : {detail::gk15(f, dim, worst.a, mid, f1, f2), detail::gk15(f, dim, mid, worst.b, f1, f2)}) {
            total += piece.err;
            heap.push_back(std::move(piece));
            std::push_heap(heap.begin(), heap.end(), by_err);
        }
    }

    // Sum in interval order so the result does not depend on heap layout.
    std::sort(heap.begin(), heap.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    for (const auto& piece : heap)
        for (std::size_t d = 0; d < dim; ++d)
            res.value[d] += piece.value[d];
    res.error = std::max(total, 0.0);
    res.intervals = static_cast<int>(heap.size());
    res.converged = total <= opt.abs_tol;
    return res;
}

// Scalar convenience wrapper.
template <class F>
double integrate_scalar(F&& f, double a, double b, std::span<const double> breaks = {},
                        const QuadOptions& opt = {})
{
    auto wrapped = [&f](double x, double* out) { out[0] = f(x); };
    return integrate(wrapped, 1, a, b, breaks, opt).value[0];
}

} // namespace asyncmimo
