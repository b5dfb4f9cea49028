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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "evup/event.hpp"
#include "evup/warp.hpp"

namespace evup {

/// Main trajectories carry repeated structure; Noise trajectories have too
/// few supporting events (member count <= phi).
enum class TrajectoryKind : std::uint8_t { Noise = 0, Main = 1 };

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord& a, const PixelCoord& b) {
    return a.x == b.x && a.y == b.y;
  }
};

/// One spatiotemporal line: the set of events that land on the same pixel
/// when shifted along theta to t_ref. Members are ordered by timestamp.
struct Trajectory {
  PixelCoord anchor;                        // landing pixel at t_ref
  double t_ref = 0.0;
  Velocity theta;
  std::vector<std::size_t> member_indices;  // into the source window
  int on_count = 0;
  int off_count = 0;
  TrajectoryKind kind = TrajectoryKind::Noise;
  double min_gap = std::numeric_limits<double>::infinity();  // smallest inter-member gap, s
  double t_start = 0.0;                     // parent window bounds
  double t_end = 0.0;

  std::size_t member_count() const { return member_indices.size(); }
};

/// All trajectories of one window under one velocity, plus the bookkeeping
/// needed downstream (counts, bounds, events whose warp left the sensor).
struct TrajectoryMap {
  std::vector<Trajectory> trajectories;     // sorted by anchor, row-major
  Velocity theta;
  double t_ref = 0.0;
  int width = 0;
  int height = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t total_events = 0;             // window size incl. out-of-bounds
  std::vector<std::size_t> out_of_bounds_indices;

  std::size_t k() const { return trajectories.size(); }
  double duration() const { return t_end - t_start; }
};

/// Group events by warped landing pixel (same binning as accumulate).
/// Every in-bounds event index appears in exactly one trajectory; the rest
/// are recorded in out_of_bounds_indices. Classification applies the
/// default threshold phi = 1.
TrajectoryMap build_trajectories(const EventWindow& window, const Velocity& theta,
                                 double t_ref);

/// Re-label every trajectory: Main iff member count > phi. pre: phi >= 0.
TrajectoryMap classify(TrajectoryMap map, int phi);

/// Sub-pixel position of a trajectory at time t, moving back from the
/// anchor: position = anchor - (t_ref - t) * theta.
/// pre: t inside the parent window's [t_start, t_end].
struct SubPixel {
  double x = 0.0;
  double y = 0.0;
};
SubPixel point_on_trajectory(const Trajectory& traj, double t);

/// Debug dump, one CSV line per trajectory: anchor, member counts, kind.
void write_trajectory_csv(const TrajectoryMap& map, std::ostream& out);

}  // namespace evup
