// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace asyncmimo {

enum class PilotKind { hadamard, zadoff_chu };

std::string to_string(PilotKind k);
PilotKind parse_pilot_kind(const std::string& s);

struct Geometry {
    double v = 1.8;        // path-loss exponent
    double sigma_db = 8.0; // log-normal shadowing std, dB
    double r_h = 100.0;    // reference / minimum distance
    double R = 1000.0;     // cell radius
};

// All link-level parameters. Optional fields (N_p, e_s, e_t) are resolved by
// resolve_defaults() once the pulse is known.
struct LinkConfig {
    int K = 5;
    int M = 64;
    int N = 64;
    int N_p = 0;          // 0: pick the smallest valid length for the pilot kind
    double rho_d = 100.0; // data SNR, linear
    double E_d = 10.0;    // unscaled power for power-scaling sweeps
    std::vector<double> beta;
    double e = 0.5;
    double e_s = -1.0;    // < 0: use e
    std::vector<double> e_t; // empty: t/(K+1)
    PilotKind pilot_kind = PilotKind::hadamard;
    bool zc_cyclic_guard = true;
    std::uint64_t seed = 1;

    double rho_p() const { return N_p * rho_d; }
    double kappa() const { return static_cast<double>(N - N_p) / N; }
    int reference_symbol() const { return N / 2; }

    // Fill defaults that depend on the pulse's tap range L.
    void resolve_defaults(int max_lag);
    // Throws ConfigError on any violated invariant.
    void validate() const;
};

// beta_k = z_k / (r_k / r_h)^v with r_k ~ U[r_h, R], z_k log-normal(sigma dB).
std::vector<double> gen_pathloss(int K, const Geometry& geo, RandomStream& rng);

// M x K i.i.d. CN(0, 1).
Eigen::MatrixXcd gen_fading(int K, int M, RandomStream& rng);

// Orthonormal pilot rows and the matrices Upsilon^i(j, l) = <p_j shifted by i, p_l>.
// With cyclic = true the transmitted block carries a cyclic prefix/suffix of
// `guard` symbols so every delay up to `guard` acts as a cyclic shift.
struct PilotSet {
    PilotKind kind = PilotKind::hadamard;
    Eigen::MatrixXcd Phi; // K x N_p
    bool cyclic = false;
    int guard = 0;
    int shift_step = 1;   // ZC: user k uses cyclic shift (k-1)*shift_step
    std::vector<Eigen::MatrixXcd> upsilon; // index i + guard_span, |i| <= guard_span
    int span = 0;

    int K() const { return static_cast<int>(Phi.rows()); }
    int N_p() const { return static_cast<int>(Phi.cols()); }
    const Eigen::MatrixXcd& shift(int i) const; // zero matrix beyond span
    // Pilot symbol of user k at (possibly out-of-window) time index n.
    std::complex<double> transmitted(int k, int n) const;
};

struct PilotOptions {
    bool cyclic_guard = false;
    int guard = 0;      // symbols of cyclic extension on each side
    int shift_step = 0; // ZC only; 0: 1 without guard, 2*guard+1 with guard
};

PilotSet make_pilots(PilotKind kind, int K, int N_p, const PilotOptions& opt = {});

// Upsilon^i = Phi^i Phi^H with linear (zero-padded) or cyclic shifts.
Eigen::MatrixXcd shift_corr(const Eigen::MatrixXcd& Phi, int i, bool cyclic = false);

// Smallest valid pilot length for the given kind and guard.
int default_pilot_length(PilotKind kind, int K, bool cyclic_guard, int max_lag);

bool is_prime(int n);

} // namespace asyncmimo
