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

#include "evup/upsampler.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "evup/rng.hpp"

namespace evup {

namespace {

std::uint64_t anchor_hash(const PixelCoord& anchor) {
  return hash_combine(splitmix64(static_cast<std::uint64_t>(static_cast<std::int64_t>(anchor.x))),
                      static_cast<std::uint64_t>(static_cast<std::int64_t>(anchor.y)));
}

}  // namespace

void UpsampleConfig::validate() const {
  optimizer.validate();
  if (phi < 0) throw std::invalid_argument("UpsampleConfig: phi must be >= 0");
  if (!(r > 0.0)) throw std::invalid_argument("UpsampleConfig: r must be positive");
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("UpsampleConfig: alpha must be in [0, 1)");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("UpsampleConfig: beta must be >= 0");
}

Polarity assign_polarity(const Trajectory& traj, double t, std::uint64_t seed) {
  const std::size_t members = traj.member_count();
  if (members == 0) {
    throw std::invalid_argument("assign_polarity: trajectory has no members");
  }
  const double p_on = static_cast<double>(traj.on_count) / static_cast<double>(members);
  std::uint64_t h = hash_combine(seed, anchor_hash(traj.anchor));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(t));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < p_on ? Polarity::On : Polarity::Off;
}

std::pair<EventWindow, UpsampleReport> upsample(const EventWindow& window,
                                                const UpsampleConfig& config) {
  config.validate();

  const AccumulationMode mode = config.signed_accumulation ? AccumulationMode::Signed
                                                           : AccumulationMode::Unsigned;
  const OptimizationResult opt = estimate_trajectory(window, config.optimizer, mode);
  const double t_ref = reference_time(window);
  TrajectoryMap map = classify(build_trajectories(window, opt.theta_star, t_ref), config.phi);

  UpsampleReport report;
  report.theta_star = opt.theta_star;
  report.f_star = opt.f_star;
  report.optimizer_converged = opt.converged;
  report.k = map.k();
  report.original_out_of_bounds = map.out_of_bounds_indices.size();
  report.counts.original = window.size();

  std::size_t n_main = 0;
  std::size_t n_noise = 0;
  for (const Trajectory& traj : map.trajectories) {
    if (traj.kind == TrajectoryKind::Main) {
      n_main += traj.member_count();
      ++report.k_main;
    } else {
      n_noise += traj.member_count();
    }
  }

  const MapStats stats{window.size(), map.k(), map.duration()};
  std::vector<Event> output;
  if (config.include_originals) {
    output = window.events();
  }

  std::vector<double> history;
  for (const Trajectory& traj : map.trajectories) {
    TrajectoryRecord record;
    record.anchor = traj.anchor;
    record.kind = traj.kind;
    record.members_on = static_cast<std::size_t>(traj.on_count);
    record.members_off = static_cast<std::size_t>(traj.off_count);
    record.intensity = trajectory_intensity(stats, traj, n_main, n_noise, config.r);

    history.clear();
    for (std::size_t idx : traj.member_indices) history.push_back(window[idx].t);

    const std::uint64_t stream_seed = config.seed ^ anchor_hash(traj.anchor);
    std::vector<double> times;
    if (traj.kind == TrajectoryKind::Main) {
      times = simulate_hawkes(history, HawkesParams{record.intensity.lambda, config.alpha},
                              map.t_start, map.t_end, stream_seed);
      report.counts.generated_main += times.size();
    } else {
      times = simulate_self_correcting(
          history, SelfCorrectingParams{record.intensity.lambda, config.beta},
          map.t_start, map.t_end, stream_seed);
      report.counts.generated_noise += times.size();
    }
    record.generated_total = times.size();

    for (double t : times) {
      const SubPixel pos = point_on_trajectory(traj, t);
      const int px = round_half_up(pos.x);
      const int py = round_half_up(pos.y);
      if (px < 0 || px >= map.width || py < 0 || py >= map.height) {
        ++report.counts.dropped_out_of_bounds;
        continue;
      }
      const Polarity polarity = assign_polarity(traj, t, config.seed);
      if (polarity == Polarity::On) {
        ++record.generated_on;
      } else {
        ++record.generated_off;
      }
      output.push_back(Event{px, py, t, polarity, Origin::Generated});
    }
    report.per_trajectory.push_back(std::move(record));
  }

  EventWindow result(std::move(output), window.width(), window.height(),
                     window.t_start(), window.t_end());
  return {std::move(result), std::move(report)};
}

void write_intensity_csv(const UpsampleReport& report, std::ostream& out) {
  out << "anchor_x,anchor_y,kind,members,lambda0,n_k,ratio,r,min_gap,denominator,lambda,"
         "generated_total,generated_kept\n";
  char buf[64];
  const auto num = [&](double v) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.write(buf, len);
  };
  for (const TrajectoryRecord& rec : report.per_trajectory) {
    out << rec.anchor.x << ',' << rec.anchor.y << ','
        << (rec.kind == TrajectoryKind::Main ? "main" : "noise") << ',' << rec.members() << ',';
    num(rec.intensity.lambda0);
    out << ',' << rec.intensity.n_k << ',';
    num(rec.intensity.ratio);
    out << ',';
    num(rec.intensity.r);
    out << ',';
    num(rec.intensity.min_gap);
    out << ',';
    num(rec.intensity.denominator);
    out << ',';
    num(rec.intensity.lambda);
    out << ',' << rec.generated_total << ',' << rec.generated_kept() << '\n';
  }
}

}  // namespace evup
