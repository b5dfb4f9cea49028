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

#include "evup/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evup/rng.hpp"

namespace evup {

namespace {

constexpr double kReflection = 1.0;
constexpr double kExpansion = 2.0;
constexpr double kContraction = 0.5;
constexpr double kShrink = 0.5;

// Objective with a scratch image so repeated evaluations do not allocate.
// Proposals outside the admissible box score -inf and are never returned.
class Objective {
 public:
  Objective(const EventWindow& window, double t_ref, AccumulationMode mode, double v_max)
      : window_(window), t_ref_(t_ref), mode_(mode), v_max_(v_max) {}

  double operator()(const Velocity& v) {
    ++evaluations_;
    if (std::abs(v.vx) > v_max_ || std::abs(v.vy) > v_max_) {
      return -std::numeric_limits<double>::infinity();
    }
    accumulate_into(window_, v, t_ref_, mode_, scratch_);
    return variance_objective(scratch_);
  }

  long evaluations() const { return evaluations_; }

 private:
  const EventWindow& window_;
  double t_ref_;
  AccumulationMode mode_;
  double v_max_;
  CountImage scratch_;
  long evaluations_ = 0;
};

struct Vertex {
  Velocity v;
  double f;
};

void check_window(const EventWindow& window) {
  if (window.size() < 2) {
    throw std::invalid_argument("velocity estimation needs at least 2 events");
  }
  if (!(window.events().back().t > window.events().front().t)) {
    throw std::invalid_argument("velocity estimation needs a nonzero time span");
  }
}

struct RestartOutcome {
  Vertex best;
  int iterations = 0;
  int shrinks = 0;
  bool converged = false;
};

// One simplex descent (stated as ascent on f). Ordering places the best
// vertex first; the worst is replaced per the standard rules.
RestartOutcome nelder_mead(Objective& objective, Vertex simplex[3],
                           const OptimizerConfig& cfg) {
  RestartOutcome out;
  auto order = [&] {
    std::sort(simplex, simplex + 3, [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
  };
  order();
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // Convergence: objective spread (relative) or simplex extent (absolute).
    const double spread = simplex[0].f - simplex[2].f;
    const double f_scale = std::max(std::abs(simplex[0].f), std::abs(simplex[2].f));
    double diameter = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const double dx = simplex[a].v.vx - simplex[b].v.vx;
        const double dy = simplex[a].v.vy - simplex[b].v.vy;
        diameter = std::max(diameter, std::hypot(dx, dy));
      }
    }
    if (spread <= cfg.f_tol * f_scale || diameter < cfg.x_tol) {
      out.converged = true;
      break;
    }
    ++out.iterations;

    const Velocity centroid{(simplex[0].v.vx + simplex[1].v.vx) / 2.0,
                            (simplex[0].v.vy + simplex[1].v.vy) / 2.0};
    const Velocity& worst = simplex[2].v;
    const Velocity reflected{centroid.vx + kReflection * (centroid.vx - worst.vx),
                             centroid.vy + kReflection * (centroid.vy - worst.vy)};
    const double f_reflected = objective(reflected);

    if (f_reflected > simplex[0].f) {
      const Velocity expanded{centroid.vx + kExpansion * (reflected.vx - centroid.vx),
                              centroid.vy + kExpansion * (reflected.vy - centroid.vy)};
      const double f_expanded = objective(expanded);
      simplex[2] = f_expanded > f_reflected ? Vertex{expanded, f_expanded}
                                            : Vertex{reflected, f_reflected};
    } else if (f_reflected > simplex[1].f) {
      simplex[2] = Vertex{reflected, f_reflected};
    } else {
      bool shrink;
      if (f_reflected > simplex[2].f) {
        // Outside contraction, between centroid and the reflected point.
        const Velocity c{centroid.vx + kContraction * (reflected.vx - centroid.vx),
                         centroid.vy + kContraction * (reflected.vy - centroid.vy)};
        const double fc = objective(c);
        shrink = !(fc >= f_reflected);
        if (!shrink) simplex[2] = Vertex{c, fc};
      } else {
        // Inside contraction, between centroid and the worst vertex.
        const Velocity c{centroid.vx + kContraction * (worst.vx - centroid.vx),
                         centroid.vy + kContraction * (worst.vy - centroid.vy)};
        const double fc = objective(c);
        shrink = !(fc > simplex[2].f);
        if (!shrink) simplex[2] = Vertex{c, fc};
      }
      if (shrink) {
        for (int i = 1; i < 3; ++i) {
          simplex[i].v.vx = simplex[0].v.vx + kShrink * (simplex[i].v.vx - simplex[0].v.vx);
          simplex[i].v.vy = simplex[0].v.vy + kShrink * (simplex[i].v.vy - simplex[0].v.vy);
          simplex[i].f = objective(simplex[i].v);
        }
        ++out.shrinks;
      }
    }
    order();
  }
  out.best = simplex[0];
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(v_max > 0.0)) throw std::invalid_argument("OptimizerConfig: v_max must be positive");
  if (n_restarts < 1) throw std::invalid_argument("OptimizerConfig: n_restarts must be >= 1");
  if (!(simplex_init_scale > 0.0)) {
    throw std::invalid_argument("OptimizerConfig: simplex_init_scale must be positive");
  }
  if (!(f_tol >= 0.0) || !(x_tol >= 0.0)) {
    throw std::invalid_argument("OptimizerConfig: tolerances must be non-negative");
  }
  if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
}

OptimizationResult estimate_trajectory(const EventWindow& window,
                                       const OptimizerConfig& config,
                                       AccumulationMode mode) {
  config.validate();
  check_window(window);

  const double t_ref = reference_time(window);
  Objective objective(window, t_ref, mode, config.v_max);
  RngStream rng(config.seed);

  OptimizationResult result;
  bool have_best = false;
  bool best_converged = false;
  Vertex best{};

  const double scale = std::min(config.simplex_init_scale, config.v_max);
  for (int restart = 0; restart < config.n_restarts; ++restart) {
    // Anchor the simplex so all three vertices stay inside the box.
    const double span = 2.0 * config.v_max - scale;
    Velocity origin{-config.v_max + rng.uniform01() * span,
                    -config.v_max + rng.uniform01() * span};
    Vertex simplex[3];
    simplex[0].v = origin;
    simplex[1].v = Velocity{origin.vx + scale, origin.vy};
    simplex[2].v = Velocity{origin.vx, origin.vy + scale};
    for (Vertex& vert : simplex) vert.f = objective(vert.v);

    RestartOutcome outcome = nelder_mead(objective, simplex, config);
    result.iterations += outcome.iterations;
    result.shrink_iterations += outcome.shrinks;
    if (!have_best || outcome.best.f > best.f) {
      have_best = true;
      best = outcome.best;
      best_converged = outcome.converged;
    }
  }

  result.theta_star = best.v;
  result.f_star = best.f;
  result.restarts_used = config.n_restarts;
  result.converged = best_converged;
  result.evaluations = objective.evaluations();
  return result;
}

OptimizationResult grid_search(const EventWindow& window, double v_max,
                               int steps_per_axis, AccumulationMode mode) {
  if (!(v_max > 0.0)) throw std::invalid_argument("grid_search: v_max must be positive");
  if (steps_per_axis < 2) throw std::invalid_argument("grid_search: need >= 2 steps per axis");
  check_window(window);

  const double t_ref = reference_time(window);
  Objective objective(window, t_ref, mode, v_max);
  const double step = 2.0 * v_max / (steps_per_axis - 1);

  OptimizationResult result;
  bool have_best = false;
  Velocity best_v{};
  double best_f = 0.0;
  // Endpoints computed exactly so rounding never pushes a grid point
  // outside the admissible box.
  const auto coord = [&](int i) {
    return i == steps_per_axis - 1 ? v_max : -v_max + i * step;
  };
  for (int iy = 0; iy < steps_per_axis; ++iy) {
    for (int ix = 0; ix < steps_per_axis; ++ix) {
      const Velocity v{coord(ix), coord(iy)};
      const double f = objective(v);
      bool better = !have_best || f > best_f;
      if (!better && f == best_f) {
        // Deterministic ties: smaller magnitude, then lexicographic (vx, vy).
        const double n_new = norm2(v);
        const double n_old = norm2(best_v);
        better = n_new < n_old ||
                 (n_new == n_old &&
                  (v.vx < best_v.vx || (v.vx == best_v.vx && v.vy < best_v.vy)));
      }
      if (better) {
        have_best = true;
        best_v = v;
        best_f = f;
      }
    }
  }

  result.theta_star = best_v;
  result.f_star = best_f;
  result.iterations = steps_per_axis * steps_per_axis;
  result.evaluations = objective.evaluations();
  result.restarts_used = 0;
  result.converged = true;
  return result;
}

}  // namespace evup
