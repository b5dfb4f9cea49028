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

#include "evup/point_process.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "evup/rng.hpp"

namespace evup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest admissible inter-event gap; keeps log1p(1/gap) finite when a
// trajectory carries duplicate timestamps.
constexpr double kMinGapFloor = 1e-12;

// exp() argument cap; beyond this the drift intensity exceeds double range.
constexpr double kMaxExpArg = 690.0;

void check_history(std::span<const double> history, double t0, double t1) {
  if (!(t0 <= t1)) {
    throw std::invalid_argument("simulate: t0 must not exceed t1");
  }
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i] < history[i - 1]) {
      throw std::invalid_argument("simulate: history must be sorted ascending");
    }
  }
}

}  // namespace

TrajectoryIntensity trajectory_intensity(const MapStats& stats, const Trajectory& traj,
                                         std::size_t n_main, std::size_t n_noise,
                                         double r) {
  if (stats.total_events < 1 || stats.k < 1) {
    throw std::invalid_argument("trajectory_intensity: empty window statistics");
  }
  if (!(stats.duration > 0.0)) {
    throw std::invalid_argument("trajectory_intensity: duration must be positive");
  }
  if (traj.member_count() < 1) {
    throw std::invalid_argument("trajectory_intensity: trajectory has no members");
  }
  if (!(r > 0.0)) {
    throw std::invalid_argument("trajectory_intensity: r must be positive");
  }

  TrajectoryIntensity out;
  out.n_k = traj.member_count();
  out.r = r;
  out.lambda0 = (static_cast<double>(stats.total_events) / static_cast<double>(stats.k)) /
                stats.duration;
  out.ratio = static_cast<double>(n_main) /
              static_cast<double>(n_noise > 0 ? n_noise : std::size_t{1});
  // Trajectories without two distinct member times carry no gap information;
  // their denominator falls back to the clamp value 1.
  if (std::isfinite(traj.min_gap)) {
    out.min_gap = std::max(traj.min_gap, kMinGapFloor);
    out.denominator = std::max(1.0, std::log1p(1.0 / out.min_gap));
  } else {
    out.min_gap = kInf;
    out.denominator = 1.0;
  }
  out.lambda = out.lambda0 * static_cast<double>(out.n_k) * (out.ratio + r) / out.denominator;
  // Cap the drift lambda * duration at the exp() argument bound so the
  // resulting rate is always admissible to both generators. Degenerate maps
  // (few anchors, no noise events) can otherwise push the raw product far
  // beyond double range.
  out.lambda = std::min(out.lambda, kMaxExpArg / stats.duration);
  return out;
}

std::vector<double> simulate_hawkes(std::span<const double> history,
                                    const HawkesParams& params, double t0, double t1,
                                    std::uint64_t seed) {
  if (!(params.mu >= 0.0)) {
    throw std::invalid_argument("simulate_hawkes: mu must be >= 0");
  }
  if (!(params.alpha >= 0.0) || !(params.alpha < 1.0)) {
    throw std::invalid_argument("simulate_hawkes: alpha must be in [0, 1)");
  }
  check_history(history, t0, t1);

  std::vector<double> out;
  if (t0 == t1) return out;
  RngStream rng(seed);

  // S tracks sum of exp(-(s - t_i)) over conditioning events with t_i <= s.
  // Events at exactly t0 condition everything after t0.
  std::size_t next = 0;
  double excitation = 0.0;
  while (next < history.size() && history[next] <= t0) {
    excitation += std::exp(-(t0 - history[next]));
    ++next;
  }

  double s = t0;
  while (true) {
    const double bound = params.mu + params.alpha * excitation;
    const double next_h = next < history.size() ? history[next] : kInf;
    if (bound <= 0.0) {
      // Dead process (mu = 0, nothing exciting); only a future history
      // event can revive it.
      if (next_h >= t1) break;
      excitation = 1.0;  // prior sum is exactly zero here
      s = next_h;
      ++next;
      continue;
    }
    const double candidate = s + rng.exponential(bound);
    if (next_h <= candidate) {
      // A known event fires before the candidate: the bound was only valid
      // up to it. Advance, add its kernel, redraw.
      if (next_h > t1) break;
      excitation = excitation * std::exp(-(next_h - s)) + 1.0;
      s = next_h;
      ++next;
      continue;
    }
    if (candidate > t1) break;
    const double decayed = excitation * std::exp(-(candidate - s));
    const double lambda = params.mu + params.alpha * decayed;
    if (rng.uniform01() * bound <= lambda) {
      out.push_back(candidate);
      excitation = decayed + 1.0;
    } else {
      // Rejected: the intensity only decays until the next event, so the
      // refreshed bound at `candidate` stays valid.
      excitation = decayed;
    }
    s = candidate;
  }
  return out;
}

std::vector<double> simulate_self_correcting(std::span<const double> history,
                                             const SelfCorrectingParams& params,
                                             double t0, double t1, std::uint64_t seed) {
  if (!(params.mu >= 0.0)) {
    throw std::invalid_argument("simulate_self_correcting: mu must be >= 0");
  }
  if (!(params.beta >= 0.0)) {
    throw std::invalid_argument("simulate_self_correcting: beta must be >= 0");
  }
  check_history(history, t0, t1);
  if (params.mu * (t1 - t0) > kMaxExpArg) {
    throw std::invalid_argument(
        "simulate_self_correcting: mu * (t1 - t0) too large for double-range intensity");
  }

  std::vector<double> out;
  if (t0 == t1) return out;
  RngStream rng(seed);

  std::size_t next = 0;
  double n_before = 0.0;  // N(t): conditioning + generated events before t
  while (next < history.size() && history[next] <= t0) {
    n_before += 1.0;
    ++next;
  }

  // The intensity grows like exp(mu * dt) between events, so a bound is
  // only trusted over a horizon where it at most doubles.
  const double lookahead = params.mu > 0.0 ? std::log(2.0) / params.mu : kInf;
  double s = t0;
  while (s < t1) {
    const double next_h = next < history.size() ? history[next] : kInf;
    const double horizon = std::min(std::min(s + lookahead, t1), next_h);
    const double log_bound = params.mu * (horizon - t0) - params.beta * n_before;
    const double bound = std::exp(std::min(log_bound, kMaxExpArg));
    const double candidate = s + rng.exponential(bound);
    if (candidate >= horizon) {
      if (horizon == next_h) {
        // Pass the known event: intensity drops by a factor exp(beta).
        n_before += 1.0;
        ++next;
      }
      s = horizon;
      continue;
    }
    const double log_lambda = params.mu * (candidate - t0) - params.beta * n_before;
    if (rng.uniform01() * bound <= std::exp(std::min(log_lambda, kMaxExpArg))) {
      out.push_back(candidate);
      n_before += 1.0;
    }
    s = candidate;
  }
  return out;
}

}  // namespace evup
