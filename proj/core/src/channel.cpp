// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include "asyncmimo/channel.hpp"
#include "asyncmimo/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace asyncmimo {

std::string to_string(PilotKind k)
{
    return k == PilotKind::hadamard ? "hadamard" : "zadoff-chu";
}

PilotKind parse_pilot_kind(const std::string& s)
{
    if (s == "hadamard")
        return PilotKind::hadamard;
    if (s == "zadoff-chu" || s == "zc" || s == "zadoff_chu")
        return PilotKind::zadoff_chu;
    throw ConfigError("unknown pilot kind '" + s + "' (expected hadamard or zadoff-chu)");
}

bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

int default_pilot_length(PilotKind kind, int K, bool cyclic_guard, int max_lag)
{
    if (kind == PilotKind::hadamard) {
        int n = 1;
        while (n < K)
            n *= 2;
        return n;
    }
    // Zadoff-Chu with guard: users spaced by 2L+1 cyclic shifts must not wrap.
    int n = cyclic_guard ? K * (2 * max_lag + 1) : K;
    while (!is_prime(n))
        ++n;
    return n;
}

void LinkConfig::resolve_defaults(int max_lag)
{
    if (N_p == 0)
        N_p = default_pilot_length(pilot_kind, K, zc_cyclic_guard, max_lag);
    if (e_s < 0.0)
        e_s = e;
    if (e_t.empty() && K >= 1) {
        e_t.resize(K);
        for (int t = 1; t <= K; ++t)
            e_t[t - 1] = static_cast<double>(t) / (K + 1);
    }
    if (beta.empty())
        beta.assign(std::max(K, 0), 1.0);
}

void LinkConfig::validate() const
{
    if (K < 1)
        throw ConfigError("link.K must be >= 1");
    if (M < 1)
        throw ConfigError("link.M must be >= 1");
    if (N < 1)
        throw ConfigError("link.N must be >= 1");
    if (N_p < K)
        throw ConfigError("link.Np must be >= link.K (got " + std::to_string(N_p) + ")");
    if (N_p >= N)
        throw ConfigError("link.Np must be smaller than link.N");
    if (!(rho_d >= 0.0) || !std::isfinite(rho_d))
        throw ConfigError("link.rho_d must be finite and >= 0");
    if (!(E_d >= 0.0) || !std::isfinite(E_d))
        throw ConfigError("link.E_d must be finite and >= 0");
    if (static_cast<int>(beta.size()) != K)
        throw ConfigError("link.beta must have K entries");
    for (double b : beta)
        if (!(b > 0.0) || !std::isfinite(b))
            throw ConfigError("link.beta entries must be finite and > 0");
    if (!(e >= 0.0 && e <= 1.0))
        throw ConfigError("link.e must lie in [0, 1]");
    if (!(e_s >= 0.0 && e_s <= 1.0))
        throw ConfigError("link.e_s must lie in [0, 1]");
    if (static_cast<int>(e_t.size()) != K)
        throw ConfigError("link.e_t must have K entries");
    for (std::size_t i = 0; i < e_t.size(); ++i) {
        if (!(e_t[i] >= 0.0 && e_t[i] < 1.0))
            throw ConfigError("link.e_t entries must lie in [0, 1)");
        for (std::size_t j = 0; j < i; ++j)
            if (e_t[i] == e_t[j])
                throw ConfigError("link.e_t entries must be distinct");
    }
}

std::vector<double> gen_pathloss(int K, const Geometry& geo, RandomStream& rng)
{
    if (!(geo.r_h > 0.0 && geo.r_h < geo.R))
        throw ConfigError("geometry requires 0 < r_h < R");
    if (!(geo.v > 0.0))
        throw ConfigError("geometry requires v > 0");
    if (!(geo.sigma_db >= 0.0))
        throw ConfigError("geometry requires sigma >= 0");
    std::vector<double> beta(K);
    for (int k = 0; k < K; ++k) {
        const double r = geo.r_h + (geo.R - geo.r_h) * rng.uniform();
        const double z = std::pow(10.0, geo.sigma_db * rng.normal() / 10.0);
        beta[k] = z / std::pow(r / geo.r_h, geo.v);
    }
    return beta;
}

Eigen::MatrixXcd gen_fading(int K, int M, RandomStream& rng)
{
    Eigen::MatrixXcd H(M, K);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
            H(m, k) = rng.complex_normal();
    return H;
}

Eigen::MatrixXcd shift_corr(const Eigen::MatrixXcd& Phi, int i, bool cyclic)
{
    const int K = static_cast<int>(Phi.rows());
    const int Np = static_cast<int>(Phi.cols());
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(K, K);
    if (!cyclic && std::abs(i) >= Np)
        return U;
    for (int j = 0; j < K; ++j)
        for (int l = 0; l < K; ++l) {
            std::complex<double> acc = 0.0;
            for (int n = 0; n < Np; ++n) {
                int src = n - i;
                if (cyclic)
                    src = ((src % Np) + Np) % Np;
                else if (src < 0 || src >= Np)
                    continue;
                acc += Phi(j, src) * std::conj(Phi(l, n));
            }
            U(j, l) = acc;
        }
    return U;
}

const Eigen::MatrixXcd& PilotSet::shift(int i) const
{
    if (std::abs(i) > span)
        return upsilon.back(); // last stored entry is the zero matrix
    return upsilon[i + span];
}

std::complex<double> PilotSet::transmitted(int k, int n) const
{
    const int Np = N_p();
    if (n >= 0 && n < Np)
        return Phi(k, n);
    if (cyclic && n >= -guard && n < Np + guard)
        return Phi(k, ((n % Np) + Np) % Np);
    return 0.0;
}

PilotSet make_pilots(PilotKind kind, int K, int N_p, const PilotOptions& opt)
{
    if (K < 1 || N_p < K)
        throw ConfigError("pilots need 1 <= K <= N_p");
    PilotSet ps;
    ps.kind = kind;
    ps.Phi.resize(K, N_p);

    if (kind == PilotKind::hadamard) {
        if (opt.cyclic_guard)
            throw ConfigError("cyclic guard is only defined for Zadoff-Chu pilots");
        if ((N_p & (N_p - 1)) != 0)
            throw ConfigError("Hadamard pilots need N_p to be a power of two (got " + std::to_string(N_p) + ")");
        // Sylvester construction: H(r, c) = (-1)^popcount(r & c).
        const double s = 1.0 / std::sqrt(static_cast<double>(N_p));
        for (int r = 0; r < K; ++r)
            for (int c = 0; c < N_p; ++c)
                ps.Phi(r, c) = (std::popcount(static_cast<unsigned>(r & c)) % 2 ? -s : s);
    } else {
        if (!is_prime(N_p))
            throw ConfigError("Zadoff-Chu pilots need a prime N_p (got " + std::to_string(N_p) + ")");
        ps.cyclic = opt.cyclic_guard;
        ps.guard = opt.cyclic_guard ? opt.guard : 0;
        ps.shift_step = opt.shift_step > 0 ? opt.shift_step : (opt.cyclic_guard ? 2 * opt.guard + 1 : 1);
        if (static_cast<long>(ps.shift_step) * (K - 1) >= N_p)
            throw ConfigError("Zadoff-Chu cyclic shifts wrap around: need (K-1)*step < N_p");
        if (ps.cyclic && ps.shift_step * K > N_p)
            throw ConfigError("Zadoff-Chu guard: shifted users overlap, need K*step <= N_p");
        // Root-1 sequence, odd length: x(n) = exp(-j pi n (n+1) / N_p).
        std::vector<std::complex<double>> root(N_p);
        for (int n = 0; n < N_p; ++n) {
            const double ph = -std::numbers::pi * static_cast<double>(n) * (n + 1) / N_p;
            root[n] = std::polar(1.0 / std::sqrt(static_cast<double>(N_p)), ph);
        }
        if (N_p == 2) // even length uses n^2
            for (int n = 0; n < N_p; ++n)
                root[n] = std::polar(1.0 / std::sqrt(2.0), -std::numbers::pi * n * n / 2.0);
        for (int k = 0; k < K; ++k) {
            const int shift = k * ps.shift_step;
            for (int n = 0; n < N_p; ++n)
                ps.Phi(k, n) = root[((n - shift) % N_p + N_p) % N_p];
        }
    }

    ps.span = ps.cyclic ? ps.guard : N_p - 1;
    ps.upsilon.reserve(2 * ps.span + 2);
    for (int i = -ps.span; i <= ps.span; ++i)
        ps.upsilon.push_back(shift_corr(ps.Phi, i, ps.cyclic));
    ps.upsilon.push_back(Eigen::MatrixXcd::Zero(K, K));
    return ps;
}

} // namespace asyncmimo
