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

#include "evup/event.hpp"
#include "evup/upsampler.hpp"
#include "evup/warp.hpp"

namespace evup {

/// Sharpness statistics of a motion-compensated image.
struct MetricReport {
  Velocity theta;
  std::size_t events = 0;
  double variance = 0.0;            // population variance of pixel values
  double gradient = 0.0;            // mean gradient magnitude, interior pixels
  double variance_per_event = 0.0;  // variance / events
  double gradient_per_event = 0.0;
  std::size_t out_of_bounds = 0;
};

enum class GradientOperator {
  CentralDiff,  // default: half central differences per axis
  Sobel,        // 3x3 Sobel, for sensitivity checks
};

enum class ScenePattern {
  VerticalEdge,   // one moving column
  Bar,            // two moving columns bar_width apart (leading + trailing)
  TexturedStrip,  // speckle points inside a moving strip, ramped weights
};

enum class PolarityScheme {
  AllOn,            // every pattern event On
  LeadingTrailing,  // leading structure On, trailing Off (alternates on strips)
  RandomBalanced,   // independent fair coin per event
};

/// A synthetic rigidly-translating scene. Event counts are Poisson with
/// means edge_rate * pattern_length * duration (pattern) and
/// noise_rate * width * height * duration (uniform background noise).
/// pattern_length is height for an edge, 2 * height for a bar, and
/// texture_points for a strip. The pattern's start position is drawn so it
/// stays on the sensor for the whole duration.
struct SceneSpec {
  int width = 64;
  int height = 64;
  double duration = 1.0;           // seconds; events lie in [0, duration]
  ScenePattern pattern = ScenePattern::VerticalEdge;
  Velocity true_velocity;
  double edge_rate = 30.0;         // events per pattern-length-unit per second
  double noise_rate = 0.0;         // events per pixel per second
  PolarityScheme polarity = PolarityScheme::AllOn;
  std::uint64_t seed = 0;
  int bar_width = 6;               // Bar only
  int strip_width = 8;             // TexturedStrip only
  int texture_points = 32;         // TexturedStrip only; weights ramp 1..n

  void validate() const;
};

/// Generate events for the scene. Pattern events lie exactly on the moving
/// structure up to nearest-pixel rounding; the structure sits at a sub-pixel
/// offset drawn per scene (per texture point for strips), so rounding
/// thresholds are not phase-locked to the pixel grid. With zero noise,
/// shifting an event back to its emission time lands within half a pixel of
/// the structure. Deterministic per seed. Throws if the pattern cannot stay
/// on the sensor for the full duration.
EventWindow synth_scene(const SceneSpec& spec);

/// Warp the window along theta and report variance and mean gradient
/// magnitude of the count image, raw and per event. pre: window non-empty.
MetricReport projected_metrics(const EventWindow& window, const Velocity& theta,
                               AccumulationMode mode = AccumulationMode::Signed,
                               GradientOperator op = GradientOperator::CentralDiff);

/// Spearman rank correlation with midrank ties; 0 when either side has no
/// rank variation. pre: xs.size() == ys.size().
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

/// Original-vs-generated count agreement across trajectories of one
/// up-sampling report, total and split by polarity.
struct ConsistencyStats {
  double rho = 0.0;      // members vs. kept generated, totals
  double rho_on = 0.0;   // On members vs. On generated
  double rho_off = 0.0;
  std::size_t trajectories = 0;
};

/// pre: the report covers at least 3 trajectories.
ConsistencyStats consistency_stats(const UpsampleReport& report);

}  // namespace evup
