// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include "asyncmimo/channel.hpp"
#include "asyncmimo/delay.hpp"
#include "asyncmimo/moments.hpp"
#include "asyncmimo/pulse.hpp"
#include "asyncmimo/rates.hpp"
#include "asyncmimo/receivers.hpp"

#include <optional>
#include <vector>

namespace asyncmimo {

// A fully resolved link: configuration with defaults filled in, pulse, delay
// distribution and (when needed) the pilot set.
struct Scenario {
    LinkConfig cfg;
    Pulse pulse;
    DelayDist dist;
    std::optional<PilotSet> pilots;

    static Scenario make(LinkConfig cfg, Pulse pulse, DelayDist dist);
    MomentTable moments(const MomentRequest& req) const;
    MomentTable moments(ReceiverKind kind) const { return moments(moment_request_for(kind)); }
};

PilotSet make_link_pilots(const LinkConfig& cfg, int max_lag);

struct McOptions {
    int trials = 10000;
    int threads = 0; // 0: default_thread_count()
};

// Monte Carlo evaluation of one receiver. Every trial draws delays, fading,
// pilot noise (imperfect CSI) and builds the effective channel row of the
// reference symbol explicitly.
//
// `rate` is the worst-case-noise rate evaluated with sample moments of the
// simulated effective channel; its standard error comes from the delta
// method. `genie` is the per-realisation rate with the realised coefficients
// treated as known, averaged over trials.
struct McReport {
    ReceiverKind kind = ReceiverKind::mrc_perfect;
    int M = 0;
    int trials = 0;
    std::vector<double> rate, rate_se;
    std::vector<double> genie, genie_se;
    double sum_rate = 0.0, sum_rate_se = 0.0;
    double genie_sum = 0.0, genie_sum_se = 0.0;
    SecondOrderStats sample; // sample moments in the same layout as the closed forms
};

McReport run_monte_carlo(const Scenario& sc, const MomentTable& mt, ReceiverKind kind, const McOptions& opt);

struct OriginSearch {
    double e_star = 0.0;
    double objective_star = 0.0;
    std::vector<double> grid;
    std::vector<double> objective;
};

// Maximises the large-array saturation objective over the sampling origin e:
// the SIR limit for mrc-perfect, and the sum over users of log2(1 + SIR_l)
// (unit path loss, e_s = e) for mrc-imperfect. Grid search then golden-section
// refinement around the best grid point.
OriginSearch optimize_sampling_origin(ReceiverKind kind, int K, const Pulse& pulse, const DelayDist& dist,
                                      double grid_step = 0.005, PilotKind pilots = PilotKind::hadamard);

struct ScalingPoint {
    int M = 0;
    double rho_d = 0.0;
    std::vector<double> rate;
    double sum_rate = 0.0;
};

struct ScalingCurve {
    ReceiverKind kind = ReceiverKind::mrc_perfect;
    PowerScaling scaling = PowerScaling::power_over_M;
    double E_d = 0.0;
    std::vector<ScalingPoint> points;
    std::vector<double> limit; // per user, M -> infinity
};

ScalingCurve power_scaling_sweep(const Scenario& sc, const MomentTable& mt, ReceiverKind kind, double E_d,
                                 const std::vector<int>& M_list, PowerScaling scaling);

} // namespace asyncmimo
