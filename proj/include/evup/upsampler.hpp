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
#include <iosfwd>
#include <utility>
#include <vector>

#include "evup/event.hpp"
#include "evup/optimizer.hpp"
#include "evup/point_process.hpp"
#include "evup/trajectory.hpp"

namespace evup {

/// Settings for one up-sampling pass over a window.
struct UpsampleConfig {
  OptimizerConfig optimizer;
  int phi = 1;            // Main iff member count > phi
  double r = 2.0;         // target up-sampling rate in the intensity law
  double alpha = 0.5;     // excitation weight for Main trajectories
  double beta = 1.0;      // inhibition jump for Noise trajectories
  std::uint64_t seed = 0;
  bool include_originals = true;   // emit input events alongside generated ones
  bool signed_accumulation = true; // objective on signed vs. raw counts

  void validate() const;
};

/// Per-trajectory outcome row; kept counts refer to events that survived
/// the out-of-bounds drop and appear in the output stream.
struct TrajectoryRecord {
  PixelCoord anchor;
  TrajectoryKind kind = TrajectoryKind::Noise;
  std::size_t members_on = 0;
  std::size_t members_off = 0;
  std::size_t generated_on = 0;    // kept
  std::size_t generated_off = 0;   // kept
  std::size_t generated_total = 0; // simulated, incl. later-dropped
  TrajectoryIntensity intensity;

  std::size_t members() const { return members_on + members_off; }
  std::size_t generated_kept() const { return generated_on + generated_off; }
};

struct UpsampleCounts {
  std::size_t original = 0;
  std::size_t generated_main = 0;        // simulated on Main trajectories
  std::size_t generated_noise = 0;       // simulated on Noise trajectories
  std::size_t dropped_out_of_bounds = 0; // generated events that left the sensor
};

/// What one up-sampling pass did: the estimated velocity, trajectory
/// statistics, and per-trajectory generation counts.
struct UpsampleReport {
  Velocity theta_star;
  double f_star = 0.0;
  bool optimizer_converged = false;
  std::size_t k = 0;                 // trajectory count
  std::size_t k_main = 0;
  std::size_t original_out_of_bounds = 0;  // originals whose warp left the sensor
  UpsampleCounts counts;
  std::vector<TrajectoryRecord> per_trajectory;
};

/// Polarity for a generated event: On with probability
/// on_count / (on_count + off_count) of its trajectory. A pure function of
/// (trajectory anchor, t, seed), so the draw is independent of evaluation
/// order. pre: the trajectory has at least one member.
Polarity assign_polarity(const Trajectory& traj, double t, std::uint64_t seed);

/// Densify a window: estimate the dominant velocity, group events into
/// trajectories, then simulate Main trajectories with the self-exciting
/// process and Noise trajectories with the self-inhibiting process, both
/// conditioned on the trajectory's own events and using the derived
/// per-trajectory base rate. Generated events are placed on their
/// trajectory at the sampled time, binned to the nearest pixel, and dropped
/// (tallied) if they leave the sensor. Each trajectory consumes an
/// independent stream seeded as seed ^ hash(anchor), so results do not
/// depend on trajectory evaluation order. The output window is the
/// time-sorted merge (originals first among timestamp ties) on the input
/// bounds and geometry.
/// pre: window has >= 2 events spanning a nonzero interval.
std::pair<EventWindow, UpsampleReport> upsample(const EventWindow& window,
                                                const UpsampleConfig& config);

/// Diagnostic dump, one CSV line per trajectory, with the full intensity
/// derivation (lambda0, n_k, ratio, r, min gap, denominator, lambda).
void write_intensity_csv(const UpsampleReport& report, std::ostream& out);

}  // namespace evup
