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

#include "evup/warp.hpp"

#include <stdexcept>

namespace evup {

double reference_time(const EventWindow& window) {
  if (window.empty()) {
    throw std::invalid_argument("reference_time: empty window");
  }
  return window.events().back().t;
}

void accumulate_into(const EventWindow& window, const Velocity& theta,
                     double t_ref, AccumulationMode mode, CountImage& image) {
  const int w = window.width();
  const int h = window.height();
  image.width = w;
  image.height = h;
  image.t_ref = t_ref;
  image.values.assign(static_cast<std::size_t>(w) * h, 0.0);
  image.out_of_bounds = 0;
  const bool signed_mode = mode == AccumulationMode::Signed;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const Event& e = window[i];
    const double dt = t_ref - e.t;
    const int px = round_half_up(e.x + dt * theta.vx);
    const int py = round_half_up(e.y + dt * theta.vy);
    if (px < 0 || px >= w || py < 0 || py >= h) {
      ++image.out_of_bounds;
      continue;
    }
    image.values[static_cast<std::size_t>(py) * w + px] +=
        signed_mode ? polarity_sign(e.polarity) : 1.0;
  }
}

CountImage accumulate(const EventWindow& window, const Velocity& theta,
                      double t_ref, AccumulationMode mode) {
  CountImage image;
  accumulate_into(window, theta, t_ref, mode, image);
  return image;
}

double variance_objective(const CountImage& image) {
  // Welford's one-pass recurrence; the reference two-pass computation lives
  // in the tests as an independent check.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : image.values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  return n == 0 ? 0.0 : m2 / static_cast<double>(n);
}

}  // namespace evup
