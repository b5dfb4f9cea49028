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

#include "evup/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "evup/rng.hpp"

namespace evup {

namespace {

struct AxisRange {
  int lo = 0;
  int hi = 0;  // inclusive; empty if hi < lo
};

// Integer start positions keeping [start, start + extent - 1] plus the
// drift span inside [0, size - 1] for the whole duration.
AxisRange feasible_start(int size, int extent, double drift) {
  const double lo = std::max(0.0, -drift);
  const double hi = static_cast<double>(size - extent) - std::max(0.0, drift);
  return AxisRange{static_cast<int>(std::ceil(lo)), static_cast<int>(std::floor(hi))};
}

int uniform_int(RngStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform01() * static_cast<double>(hi - lo + 1));
}

std::size_t poisson_count(RngStream& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> dist(mean);
  return static_cast<std::size_t>(dist(rng.engine()));
}

}  // namespace

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("SceneSpec: geometry must be positive");
  if (!(duration > 0.0)) throw std::invalid_argument("SceneSpec: duration must be positive");
  if (!(edge_rate >= 0.0) || !(noise_rate >= 0.0)) {
    throw std::invalid_argument("SceneSpec: rates must be non-negative");
  }
  if (bar_width < 1) throw std::invalid_argument("SceneSpec: bar_width must be >= 1");
  if (strip_width < 1) throw std::invalid_argument("SceneSpec: strip_width must be >= 1");
  if (texture_points < 1) throw std::invalid_argument("SceneSpec: texture_points must be >= 1");
}

EventWindow synth_scene(const SceneSpec& spec) {
  spec.validate();
  const double dx = spec.true_velocity.vx * spec.duration;
  const double dy = spec.true_velocity.vy * spec.duration;

  int extent = 1;
  switch (spec.pattern) {
    case ScenePattern::VerticalEdge: extent = 1; break;
    case ScenePattern::Bar: extent = spec.bar_width + 1; break;
    case ScenePattern::TexturedStrip: extent = spec.strip_width; break;
  }
  const AxisRange x_range = feasible_start(spec.width, extent, dx);
  const AxisRange y_range = feasible_start(spec.height, 1, dy);
  if (x_range.hi < x_range.lo || y_range.hi < y_range.lo) {
    throw std::invalid_argument("synth_scene: pattern cannot stay on the sensor for the duration");
  }

  RngStream rng(spec.seed);
  const int x0 = uniform_int(rng, x_range.lo, x_range.hi);

  // Structures sit at a sub-pixel offset in [-0.5, 0.5) so their rounding
  // thresholds are not phase-locked to the pixel grid; nearest-pixel binning
  // still lands on the drawn cell at the emission position.
  const double jitter_x = rng.uniform01() - 0.5;
  const double jitter_y = rng.uniform01() - 0.5;

  // Texture layout (strip only): distinct speckle cells, weight ramp 1..n,
  // each cell with its own sub-pixel offset.
  std::vector<PixelCoord> texture;
  std::vector<SubPixel> texture_offset;
  if (spec.pattern == ScenePattern::TexturedStrip) {
    const int rows = y_range.hi - y_range.lo + 1;
    const std::size_t cells = static_cast<std::size_t>(spec.strip_width) * rows;
    if (static_cast<std::size_t>(spec.texture_points) > cells) {
      throw std::invalid_argument("synth_scene: more texture points than strip cells");
    }
    std::vector<std::size_t> idx(cells);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (int j = 0; j < spec.texture_points; ++j) {
      const std::size_t pick = j + static_cast<std::size_t>(
          rng.uniform01() * static_cast<double>(cells - j));
      std::swap(idx[j], idx[pick]);
      texture.push_back(PixelCoord{x0 + static_cast<int>(idx[j] % spec.strip_width),
                                   y_range.lo + static_cast<int>(idx[j] / spec.strip_width)});
      texture_offset.push_back(SubPixel{rng.uniform01() - 0.5, rng.uniform01() - 0.5});
    }
  }

  double pattern_length = 0.0;
  switch (spec.pattern) {
    case ScenePattern::VerticalEdge: pattern_length = spec.height; break;
    case ScenePattern::Bar: pattern_length = 2.0 * spec.height; break;
    case ScenePattern::TexturedStrip: pattern_length = spec.texture_points; break;
  }

  std::vector<Event> events;
  const std::size_t n_pattern =
      poisson_count(rng, spec.edge_rate * pattern_length * spec.duration);
  for (std::size_t i = 0; i < n_pattern; ++i) {
    const double t = spec.duration * rng.uniform01();
    double bx = 0.0;
    double by = 0.0;
    Polarity polarity = Polarity::On;
    switch (spec.pattern) {
      case ScenePattern::VerticalEdge: {
        bx = x0 + jitter_x;
        by = uniform_int(rng, y_range.lo, y_range.hi) + jitter_y;
        if (spec.polarity == PolarityScheme::RandomBalanced) {
          polarity = rng.bernoulli(0.5) ? Polarity::On : Polarity::Off;
        }
        break;
      }
      case ScenePattern::Bar: {
        const bool right_edge = rng.bernoulli(0.5);
        bx = (right_edge ? x0 + spec.bar_width : x0) + jitter_x;
        by = uniform_int(rng, y_range.lo, y_range.hi) + jitter_y;
        if (spec.polarity == PolarityScheme::LeadingTrailing) {
          const bool leading = spec.true_velocity.vx >= 0.0 ? right_edge : !right_edge;
          polarity = leading ? Polarity::On : Polarity::Off;
        } else if (spec.polarity == PolarityScheme::RandomBalanced) {
          polarity = rng.bernoulli(0.5) ? Polarity::On : Polarity::Off;
        }
        break;
      }
      case ScenePattern::TexturedStrip: {
        // Ramped weights 1..n: cumulative j(j+1)/2, inverted in closed form.
        const double total = 0.5 * spec.texture_points * (spec.texture_points + 1);
        const double u = rng.uniform01() * total;
        int j = static_cast<int>(std::floor((std::sqrt(8.0 * u + 1.0) - 1.0) / 2.0));
        j = std::clamp(j, 0, spec.texture_points - 1);
        bx = texture[static_cast<std::size_t>(j)].x + texture_offset[static_cast<std::size_t>(j)].x;
        by = texture[static_cast<std::size_t>(j)].y + texture_offset[static_cast<std::size_t>(j)].y;
        if (spec.polarity == PolarityScheme::LeadingTrailing) {
          polarity = j % 2 == 0 ? Polarity::On : Polarity::Off;
        } else if (spec.polarity == PolarityScheme::RandomBalanced) {
          polarity = rng.bernoulli(0.5) ? Polarity::On : Polarity::Off;
        }
        break;
      }
    }
    const int ex = round_half_up(bx + spec.true_velocity.vx * t);
    const int ey = round_half_up(by + spec.true_velocity.vy * t);
    events.push_back(Event{ex, ey, t, polarity, Origin::Original});
  }

  const std::size_t n_noise = poisson_count(
      rng, spec.noise_rate * spec.width * spec.height * spec.duration);
  for (std::size_t i = 0; i < n_noise; ++i) {
    const double t = spec.duration * rng.uniform01();
    const int ex = uniform_int(rng, 0, spec.width - 1);
    const int ey = uniform_int(rng, 0, spec.height - 1);
    const Polarity polarity = rng.bernoulli(0.5) ? Polarity::On : Polarity::Off;
    events.push_back(Event{ex, ey, t, polarity, Origin::Original});
  }

  return EventWindow(std::move(events), spec.width, spec.height, 0.0, spec.duration);
}

MetricReport projected_metrics(const EventWindow& window, const Velocity& theta,
                               AccumulationMode mode, GradientOperator op) {
  if (window.empty()) {
    throw std::invalid_argument("projected_metrics: empty window");
  }
  const CountImage image = accumulate(window, theta, reference_time(window), mode);

  MetricReport report;
  report.theta = theta;
  report.events = window.size();
  report.out_of_bounds = image.out_of_bounds;
  report.variance = variance_objective(image);

  const int w = image.width;
  const int h = image.height;
  double total = 0.0;
  std::size_t interior = 0;
  if (w >= 3 && h >= 3) {
    for (int y = 1; y < h - 1; ++y) {
      for (int x = 1; x < w - 1; ++x) {
        double gx;
        double gy;
        if (op == GradientOperator::CentralDiff) {
          gx = (image.at(x + 1, y) - image.at(x - 1, y)) / 2.0;
          gy = (image.at(x, y + 1) - image.at(x, y - 1)) / 2.0;
        } else {
          gx = image.at(x + 1, y - 1) + 2.0 * image.at(x + 1, y) + image.at(x + 1, y + 1) -
               image.at(x - 1, y - 1) - 2.0 * image.at(x - 1, y) - image.at(x - 1, y + 1);
          gy = image.at(x - 1, y + 1) + 2.0 * image.at(x, y + 1) + image.at(x + 1, y + 1) -
               image.at(x - 1, y - 1) - 2.0 * image.at(x, y - 1) - image.at(x + 1, y - 1);
        }
        total += std::hypot(gx, gy);
        ++interior;
      }
    }
  }
  report.gradient = interior > 0 ? total / static_cast<double>(interior) : 0.0;
  report.variance_per_event = report.variance / static_cast<double>(report.events);
  report.gradient_per_event = report.gradient / static_cast<double>(report.events);
  return report;
}

namespace {

// Midranks: ties share the average of the ranks they occupy.
std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("spearman_rho: size mismatch");
  }
  if (xs.empty()) return 0.0;
  const std::vector<double> rx = midranks(xs);
  const std::vector<double> ry = midranks(ys);
  return pearson(rx, ry);
}

ConsistencyStats consistency_stats(const UpsampleReport& report) {
  const std::size_t n = report.per_trajectory.size();
  if (n < 3) {
    throw std::invalid_argument("consistency_stats: need at least 3 trajectories");
  }
  std::vector<double> orig(n);
  std::vector<double> gen(n);
  std::vector<double> orig_on(n);
  std::vector<double> gen_on(n);
  std::vector<double> orig_off(n);
  std::vector<double> gen_off(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TrajectoryRecord& rec = report.per_trajectory[i];
    orig[i] = static_cast<double>(rec.members());
    gen[i] = static_cast<double>(rec.generated_kept());
    orig_on[i] = static_cast<double>(rec.members_on);
    gen_on[i] = static_cast<double>(rec.generated_on);
    orig_off[i] = static_cast<double>(rec.members_off);
    gen_off[i] = static_cast<double>(rec.generated_off);
  }
  ConsistencyStats stats;
  stats.trajectories = n;
  stats.rho = spearman_rho(orig, gen);
  stats.rho_on = spearman_rho(orig_on, gen_on);
  stats.rho_off = spearman_rho(orig_off, gen_off);
  return stats;
}

}  // namespace evup
