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

#include "evup/trajectory.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace evup {

TrajectoryMap build_trajectories(const EventWindow& window, const Velocity& theta,
                                 double t_ref) {
  TrajectoryMap map;
  map.theta = theta;
  map.t_ref = t_ref;
  map.width = window.width();
  map.height = window.height();
  map.t_start = window.t_start();
  map.t_end = window.t_end();
  map.total_events = window.size();

  std::unordered_map<std::int64_t, std::size_t> by_pixel;
  by_pixel.reserve(window.size());
  std::vector<double> last_member_t;

  for (std::size_t i = 0; i < window.size(); ++i) {
    const Event& e = window[i];
    const WarpedEvent we = warp_event(e, theta, t_ref, i);
    const int px = round_half_up(we.x);
    const int py = round_half_up(we.y);
    if (px < 0 || px >= map.width || py < 0 || py >= map.height) {
      map.out_of_bounds_indices.push_back(i);
      continue;
    }
    const std::int64_t key = static_cast<std::int64_t>(py) * map.width + px;
    auto [it, inserted] = by_pixel.try_emplace(key, map.trajectories.size());
    if (inserted) {
      Trajectory traj;
      traj.anchor = PixelCoord{px, py};
      traj.t_ref = t_ref;
      traj.theta = theta;
      traj.t_start = map.t_start;
      traj.t_end = map.t_end;
      map.trajectories.push_back(std::move(traj));
      last_member_t.push_back(e.t);
    } else {
      Trajectory& traj = map.trajectories[it->second];
      // Window order is time order, so gaps can be tracked incrementally.
      traj.min_gap = std::min(traj.min_gap, e.t - last_member_t[it->second]);
      last_member_t[it->second] = e.t;
    }
    Trajectory& traj = map.trajectories[it->second];
    traj.member_indices.push_back(i);
    if (e.polarity == Polarity::On) {
      ++traj.on_count;
    } else {
      ++traj.off_count;
    }
  }

  // Deterministic order independent of hash-map iteration.
  std::sort(map.trajectories.begin(), map.trajectories.end(),
            [](const Trajectory& a, const Trajectory& b) {
              return a.anchor.y != b.anchor.y ? a.anchor.y < b.anchor.y
                                              : a.anchor.x < b.anchor.x;
            });
  for (Trajectory& traj : map.trajectories) {
    traj.kind = traj.member_count() > 1 ? TrajectoryKind::Main : TrajectoryKind::Noise;
  }
  return map;
}

TrajectoryMap classify(TrajectoryMap map, int phi) {
  if (phi < 0) throw std::invalid_argument("classify: phi must be >= 0");
  for (Trajectory& traj : map.trajectories) {
    traj.kind = traj.member_count() > static_cast<std::size_t>(phi)
                    ? TrajectoryKind::Main
                    : TrajectoryKind::Noise;
  }
  return map;
}

SubPixel point_on_trajectory(const Trajectory& traj, double t) {
  if (t < traj.t_start || t > traj.t_end) {
    throw std::out_of_range("point_on_trajectory: t outside the parent window");
  }
  const double dt = traj.t_ref - t;
  return SubPixel{traj.anchor.x - dt * traj.theta.vx, traj.anchor.y - dt * traj.theta.vy};
}

void write_trajectory_csv(const TrajectoryMap& map, std::ostream& out) {
  out << "anchor_x,anchor_y,members,on,off,kind\n";
  for (const Trajectory& traj : map.trajectories) {
    out << traj.anchor.x << ',' << traj.anchor.y << ',' << traj.member_count() << ','
        << traj.on_count << ',' << traj.off_count << ','
        << (traj.kind == TrajectoryKind::Main ? "main" : "noise") << '\n';
  }
}

}  // namespace evup
