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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "evup/event.hpp"

namespace evup {

/// Per-axis image velocity in pixels/second. In optimization contexts the
/// admissible set is the box [-v_max, v_max] per axis.
struct Velocity {
  double vx = 0.0;
  double vy = 0.0;

  friend bool operator==(const Velocity& a, const Velocity& b) {
    return a.vx == b.vx && a.vy == b.vy;
  }
};

inline double norm2(const Velocity& v) { return v.vx * v.vx + v.vy * v.vy; }

/// An event shifted along a velocity to the reference time. Coordinates are
/// sub-pixel; source_index points back into the originating window.
struct WarpedEvent {
  double x = 0.0;
  double y = 0.0;
  int sign = +1;  // +1 = On, -1 = Off
  std::size_t source_index = 0;
};

/// Whether event polarities add signed (+1/-1) or as raw counts (+1 each).
enum class AccumulationMode { Signed, Unsigned };

/// Dense per-pixel sums of warped event contributions, row-major.
struct CountImage {
  int width = 0;
  int height = 0;
  double t_ref = 0.0;
  std::vector<double> values;      // size width * height
  std::size_t out_of_bounds = 0;   // warped events dropped at the border

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Nearest-pixel binning, ties rounded half up per axis.
inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

/// The timestamp of the last event in the window. pre: window non-empty.
double reference_time(const EventWindow& window);

/// Shift one event to t_ref assuming constant velocity theta:
/// position' = position + (t_ref - t) * theta.
inline WarpedEvent warp_event(const Event& e, const Velocity& theta, double t_ref,
                              std::size_t source_index = 0) {
  const double dt = t_ref - e.t;
  return WarpedEvent{e.x + dt * theta.vx, e.y + dt * theta.vy,
                     polarity_sign(e.polarity), source_index};
}

/// Warp every event to t_ref and bin into a count image on the window's
/// geometry. Out-of-bounds landings are dropped and tallied. Single linear
/// pass; accumulation order is the window's event order.
CountImage accumulate(const EventWindow& window, const Velocity& theta,
                      double t_ref, AccumulationMode mode = AccumulationMode::Signed);

/// Allocation-free variant for optimizer hot loops; reuses image.values.
void accumulate_into(const EventWindow& window, const Velocity& theta,
                     double t_ref, AccumulationMode mode, CountImage& image);

/// Population variance of all pixel values (zeros included). Higher values
/// mean sharper motion-compensated structure.
double variance_objective(const CountImage& image);

}  // namespace evup
