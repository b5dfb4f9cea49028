// Copyright 2026 the evup authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evup/trajectory.hpp"

namespace evup {

/// Self-exciting process with conditional intensity
///   lambda(t) = mu + alpha * sum over {t_i < t} of exp(-(t - t_i)),
/// the sum running over conditioning history and already-generated events.
/// The decay rate of the kernel is fixed at 1/second.
struct HawkesParams {
  double mu = 0.0;     // base intensity, events/second; >= 0
  double alpha = 0.5;  // excitation weight; 0 <= alpha < 1 keeps the process subcritical
};

/// Self-inhibiting process with conditional intensity
///   lambda(t) = exp(mu * (t - t0) - beta * N(t)),
/// where N(t) counts conditioning and generated events before t. Time is
/// re-based to the simulation start, so the intensity begins at 1 event/s
/// and each event divides it by exp(beta).
struct SelfCorrectingParams {
  double mu = 0.0;    // drift rate, 1/second; >= 0
  double beta = 1.0;  // inhibition jump per event; >= 0
};

/// A per-trajectory base rate along with how it was derived, so the
/// parameterization can be audited per trajectory.
struct TrajectoryIntensity {
  double lambda = 0.0;       // events/second; positive and finite
  double lambda0 = 0.0;      // mean input rate per trajectory, (N/k)/T
  std::size_t n_k = 0;       // events on this trajectory
  double ratio = 0.0;        // window-level main/noise event ratio (guarded)
  double r = 0.0;            // configured up-sampling rate
  double min_gap = 0.0;      // smallest inter-member gap used, seconds
  double denominator = 1.0;  // max(1, log1p(1/min_gap))
};

/// Window-level statistics entering the intensity derivation.
struct MapStats {
  std::size_t total_events = 0;  // N: input events in the window
  std::size_t k = 0;             // trajectory count
  double duration = 0.0;         // T: window span, seconds
};

/// Base rate for one trajectory:
///   lambda = lambda0 * n_k * (n_main/n_noise + r) / max(1, log1p(1/min_gap))
/// with lambda0 = (N/k)/T. Guards: n_noise enters as max(n_noise, 1); a
/// trajectory without two distinct member times uses denominator 1; a zero
/// min gap is clamped to 1 ps so lambda stays finite; lambda is capped at
/// 690/T so lambda * T stays inside the exp() range both generators need.
/// pre: total_events >= 1, k >= 1, duration > 0, n_k >= 1, r > 0.
TrajectoryIntensity trajectory_intensity(const MapStats& stats, const Trajectory& traj,
                                         std::size_t n_main, std::size_t n_noise,
                                         double r);

/// Simulate the self-exciting process on (t0, t1] conditioned on `history`
/// (sorted, may interleave with the simulation interval; events join the
/// conditioning set as time passes them). Ogata thinning: between events the
/// intensity only decays, so lambda just after the current time bounds the
/// interval up to the next history event. The excitation sum is maintained
/// by decay-and-add recursion, never re-summed. Returned times are strictly
/// increasing. Deterministic per seed.
/// pre: history sorted ascending; t0 <= t1; params valid.
std::vector<double> simulate_hawkes(std::span<const double> history,
                                    const HawkesParams& params, double t0, double t1,
                                    std::uint64_t seed);

/// Simulate the self-inhibiting process on (t0, t1], same conditioning
/// rules. The intensity grows between events, so the thinning bound is the
/// intensity at the end of a short lookahead (factor-2 growth horizon),
/// refreshed after every accept, reject, or passed history event.
/// pre: as simulate_hawkes; additionally mu * (t1 - t0) <= 690 so the drift
/// exponential stays within double range.
std::vector<double> simulate_self_correcting(std::span<const double> history,
                                             const SelfCorrectingParams& params,
                                             double t0, double t1, std::uint64_t seed);

}  // namespace evup
