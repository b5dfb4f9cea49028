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

#include "evup/warp.hpp"

namespace evup {

/// Search settings for velocity estimation.
struct OptimizerConfig {
  double v_max = 500.0;             // admissible box [-v_max, v_max] per axis, px/s
  int n_restarts = 5;               // independent simplex starts
  double simplex_init_scale = 50.0; // initial simplex edge length, px/s
  double f_tol = 1e-6;              // relative objective spread convergence
  double x_tol = 0.01;              // simplex diameter convergence, px/s
  int max_iters = 200;              // per restart
  std::uint64_t seed = 0;

  void validate() const;
};

/// Outcome of a velocity search. f_star is the objective value actually
/// evaluated at theta_star (bit-identical to re-evaluation).
struct OptimizationResult {
  Velocity theta_star;
  double f_star = 0.0;
  int iterations = 0;         // summed over restarts
  int restarts_used = 0;
  bool converged = false;     // true if the winning restart converged
  long evaluations = 0;       // objective evaluations, all restarts
  int shrink_iterations = 0;  // iterations that ended in a simplex shrink
};

/// Maximize the variance of the motion-compensated count image over the
/// velocity box with multi-start Nelder-Mead (reflection 1.0, expansion 2.0,
/// contraction 0.5, shrink 0.5). Deterministic for a fixed (window, config).
/// Restarts are reduced in order; ties keep the earlier restart. Every
/// non-shrink iteration spends at most 2 objective evaluations.
/// pre: window has >= 2 events spanning a nonzero time interval.
OptimizationResult estimate_trajectory(const EventWindow& window,
                                       const OptimizerConfig& config,
                                       AccumulationMode mode = AccumulationMode::Signed);

/// Exhaustive objective evaluation on a uniform steps_per_axis^2 grid over
/// the same box. Ties prefer smaller |theta|, then lexicographic (vx, vy).
/// Independent of the simplex path; intended as a slow cross-check.
/// pre: as estimate_trajectory; steps_per_axis >= 2.
OptimizationResult grid_search(const EventWindow& window, double v_max,
                               int steps_per_axis,
                               AccumulationMode mode = AccumulationMode::Signed);

}  // namespace evup
