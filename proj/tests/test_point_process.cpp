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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "evup/point_process.hpp"
#include "test_support.hpp"

using evup::HawkesParams;
using evup::MapStats;
using evup::SelfCorrectingParams;
using evup::Trajectory;
using evup::TrajectoryIntensity;

namespace {

Trajectory make_traj(std::size_t members, double min_gap) {
  Trajectory traj;
  traj.member_indices.resize(members);
  traj.min_gap = min_gap;
  return traj;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double var_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Per-trajectory intensity derivation
// ---------------------------------------------------------------------------

TEST_CASE("intensity: golden derivation with an uninformative gap") {
  // lambda0 = (100 events / 10 trajectories) / 1 s = 10.
  // A 1 s gap gives log1p(1) < 1, so the denominator clamps to 1.
  // lambda = 10 * 2 * (60/40 + 2) / 1 = 70, all terms exact in binary.
  MapStats stats{100, 10, 1.0};
  TrajectoryIntensity ti =
      evup::trajectory_intensity(stats, make_traj(2, 1.0), 60, 40, 2.0);
  CHECK(ti.lambda0 == 10.0);
  CHECK(ti.n_k == 2);
  CHECK(ti.ratio == 1.5);
  CHECK(ti.denominator == 1.0);
  CHECK(ti.lambda == 70.0);
}

TEST_CASE("intensity: tight gaps divide the rate") {
  // min_gap = 0.5 s: denominator = log1p(2) = ln 3 = 1.0986122886681098...
  MapStats stats{100, 10, 1.0};
  TrajectoryIntensity ti =
      evup::trajectory_intensity(stats, make_traj(2, 0.5), 60, 40, 2.0);
  CHECK(ti.denominator == doctest::Approx(1.0986122886681098).epsilon(1e-12));
  CHECK(ti.lambda == doctest::Approx(70.0 / 1.0986122886681098).epsilon(1e-12));
}

TEST_CASE("intensity: duplicate timestamps clamp the gap at 1 ps") {
  // log1p(1e12) = ln(1e12 + 1) ~ 12 * ln 10 = 27.631021115928548.
  MapStats stats{50, 5, 2.0};
  TrajectoryIntensity ti =
      evup::trajectory_intensity(stats, make_traj(3, 0.0), 10, 40, 2.0);
  CHECK(ti.min_gap == 1e-12);
  CHECK(ti.denominator == doctest::Approx(27.631021115928548).epsilon(1e-9));
}

TEST_CASE("intensity: singletons fall back to lambda0 * r") {
  // No second member: ratio uses the window counts, but with n_main = 0 the
  // whole excitation term is just r, and an infinite gap means denominator 1.
  MapStats stats{40, 8, 2.0};  // lambda0 = (40/8)/2 = 2.5
  TrajectoryIntensity ti = evup::trajectory_intensity(stats, make_traj(1, kInf), 0, 40, 2.0);
  CHECK(ti.lambda0 == 2.5);
  CHECK(ti.ratio == 0.0);
  CHECK(ti.denominator == 1.0);
  CHECK(ti.lambda == 2.5 * 2.0);
}

TEST_CASE("intensity: all-main windows guard the noise denominator") {
  MapStats stats{20, 10, 1.0};  // lambda0 = 2
  TrajectoryIntensity ti =
      evup::trajectory_intensity(stats, make_traj(2, 1.0), 20, 0, 2.0);
  CHECK(ti.ratio == 20.0);  // n_noise enters as max(n_noise, 1)
  CHECK(ti.lambda == 2.0 * 2.0 * 22.0);
}

TEST_CASE("intensity: rate is capped so lambda * duration stays exp-safe") {
  // Raw product: lambda0 = 10, n_k = 4, ratio + r = 102, denominator 1
  // -> 4080, far above 690 / duration; the returned rate must be the cap.
  MapStats stats{100, 10, 1.0};
  TrajectoryIntensity ti =
      evup::trajectory_intensity(stats, make_traj(4, 1.0), 100, 0, 2.0);
  CHECK(ti.lambda == 690.0);

  MapStats longer{100, 10, 2.0};
  TrajectoryIntensity ti2 =
      evup::trajectory_intensity(longer, make_traj(4, 1.0), 100, 0, 2.0);
  CHECK(ti2.lambda == 345.0);

  // The capped rate is always admissible to the inhibiting generator.
  CHECK_NOTHROW(evup::simulate_self_correcting({}, SelfCorrectingParams{ti.lambda, 1.0},
                                               0.0, stats.duration, 1));
}

TEST_CASE("intensity: grows with member count at fixed gap") {
  MapStats stats{100, 10, 1.0};
  double previous = 0.0;
  for (std::size_t n_k = 1; n_k <= 8; ++n_k) {
    TrajectoryIntensity ti =
        evup::trajectory_intensity(stats, make_traj(n_k, 0.25), 70, 30, 2.0);
    CHECK(ti.lambda > previous);
    previous = ti.lambda;
  }
}

TEST_CASE("intensity: validation") {
  MapStats good{100, 10, 1.0};
  CHECK_THROWS_AS(evup::trajectory_intensity(MapStats{0, 10, 1.0}, make_traj(2, 1.0), 1, 1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::trajectory_intensity(MapStats{100, 0, 1.0}, make_traj(2, 1.0), 1, 1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::trajectory_intensity(MapStats{100, 10, 0.0}, make_traj(2, 1.0), 1, 1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::trajectory_intensity(good, make_traj(0, kInf), 1, 1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::trajectory_intensity(good, make_traj(2, 1.0), 1, 1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("intensity: positive and finite across random inputs") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 1000; ++rep) {
    MapStats stats{1 + rng() % 5000, 1 + rng() % 400, 1e-3 + (rng() % 1000) * 1e-2};
    const std::size_t n_k = 1 + rng() % 50;
    const double gap_exp = -12.0 + 13.0 * (rng() % 1000) / 1000.0;
    const double min_gap = n_k > 1 ? std::pow(10.0, gap_exp) : kInf;
    const std::size_t n_main = rng() % 3000;
    const std::size_t n_noise = rng() % 3000;
    const double r = 0.1 + (rng() % 100) * 0.1;
    TrajectoryIntensity ti =
        evup::trajectory_intensity(stats, make_traj(n_k, min_gap), n_main, n_noise, r);
    CHECK(ti.lambda > 0.0);
    CHECK(std::isfinite(ti.lambda));
    CHECK(ti.denominator >= 1.0);
  }
}

// ---------------------------------------------------------------------------
// Self-exciting simulation
// ---------------------------------------------------------------------------

TEST_CASE("self-exciting: validation") {
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(evup::simulate_hawkes(unsorted, HawkesParams{1.0, 0.5}, 0.0, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::simulate_hawkes({}, HawkesParams{-1.0, 0.5}, 0.0, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::simulate_hawkes({}, HawkesParams{1.0, -0.1}, 0.0, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::simulate_hawkes({}, HawkesParams{1.0, 1.0}, 0.0, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(evup::simulate_hawkes({}, HawkesParams{1.0, 0.5}, 2.0, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("self-exciting: samples are strictly increasing inside (t0, t1]") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const double t0 = (rng() % 100) * 0.1;
    const double t1 = t0 + 0.1 + (rng() % 50) * 0.1;
    HawkesParams params{0.2 + (rng() % 40) * 0.1, (rng() % 10) * 0.1};
    std::vector<double> history;
    double h = t0 - 1.0;
    for (int i = 0; i < 5; ++i) {
      h += (rng() % 100) * 0.01;
      if (h >= 0.0) history.push_back(h);
    }
    const std::vector<double> out =
        evup::simulate_hawkes(history, params, t0, t1, rep);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] > t0);
      CHECK(out[i] <= t1);
      if (i > 0) CHECK(out[i] > out[i - 1]);
    }
  }
}

TEST_CASE("self-exciting: zero excitation reduces to a Poisson process") {
  // alpha = 0: counts over (0, 10] at mu = 2 are Poisson(20). With 3000
  // runs the sample mean has sigma = sqrt(20/3000) = 0.0816 and the sample
  // variance has sigma ~ sqrt((lam + 2 lam^2)/3000) = 0.523; both checked
  // at 4 sigma.
  const HawkesParams params{2.0, 0.0};
  std::vector<double> counts;
  counts.reserve(3000);
  for (int run = 0; run < 3000; ++run) {
    counts.push_back(static_cast<double>(
        evup::simulate_hawkes({}, params, 0.0, 10.0, 1000 + run).size()));
  }
  CHECK(std::abs(mean_of(counts) - 20.0) < 4.0 * 0.0816);
  CHECK(std::abs(var_of(counts) - 20.0) < 4.0 * 0.523);
}

TEST_CASE("self-exciting: event rate follows the renewal solution") {
  // For mu = 2, alpha = 0.5 (kernel decay 1/s) the expected intensity obeys
  // m'(t) = (alpha - 1) m(t) + mu with m(0) = mu, i.e.
  // m(t) = 4 - 2 exp(-t/2). Expected events per bin are its integrals.
  const HawkesParams params{2.0, 0.5};
  const double t1 = 4.0;
  const int n_bins = 16;
  const double bin_w = t1 / n_bins;
  const int runs = 20000;

  std::vector<double> observed(n_bins, 0.0);
  for (int run = 0; run < runs; ++run) {
    for (double t : evup::simulate_hawkes({}, params, 0.0, t1, 50000 + run)) {
      const int b = std::min(static_cast<int>(t / bin_w), n_bins - 1);
      observed[static_cast<std::size_t>(b)] += 1.0;
    }
  }
  for (int b = 0; b < n_bins; ++b) {
    const double a = b * bin_w;
    const double z = a + bin_w;
    const double expected =
        runs * (4.0 * (z - a) - 4.0 * (std::exp(-a / 2.0) - std::exp(-z / 2.0)));
    // Clustering overdisperses bin counts by roughly (1 - alpha)^-2 = 4.
    const double sigma = 2.0 * std::sqrt(expected);
    CAPTURE(b);
    CHECK(std::abs(observed[static_cast<std::size_t>(b)] - expected) < 5.0 * sigma);
  }
}

TEST_CASE("self-exciting: interleaved history excites per its own cluster rate") {
  // A known event at h < t adds alpha * exp((alpha-1)(t-h)) to the expected
  // event rate (its kernel plus all expected offspring). Two history events
  // land inside the simulated interval; the bin expectations must track the
  // jumps.
  const HawkesParams params{2.0, 0.5};
  const std::vector<double> history{1.0, 2.5};
  const double t1 = 4.0;
  const int n_bins = 16;
  const double bin_w = t1 / n_bins;
  const int runs = 20000;

  std::vector<double> observed(n_bins, 0.0);
  for (int run = 0; run < runs; ++run) {
    for (double t : evup::simulate_hawkes(history, params, 0.0, t1, 90000 + run)) {
      const int b = std::min(static_cast<int>(t / bin_w), n_bins - 1);
      observed[static_cast<std::size_t>(b)] += 1.0;
    }
  }
  for (int b = 0; b < n_bins; ++b) {
    const double a = b * bin_w;
    const double z = a + bin_w;
    double expected = 4.0 * (z - a) - 4.0 * (std::exp(-a / 2.0) - std::exp(-z / 2.0));
    for (double h : history) {
      if (h >= z) continue;
      const double lo = std::max(a, h);
      // integral of 0.5 * exp(-(s-h)/2) over [lo, z]
      expected += (std::exp(-(lo - h) / 2.0) - std::exp(-(z - h) / 2.0));
    }
    expected *= runs;
    const double sigma = 2.0 * std::sqrt(expected);
    CAPTURE(b);
    CHECK(std::abs(observed[static_cast<std::size_t>(b)] - expected) < 5.0 * sigma);
  }
}

TEST_CASE("self-exciting: a dead process revives at a future known event") {
  // mu = 0 and empty history: the intensity is identically zero.
  CHECK(evup::simulate_hawkes({}, HawkesParams{0.0, 0.9}, 0.0, 10.0, 3).empty());

  // mu = 0 with one known event at t = 5: nothing can fire before it.
  const std::vector<double> history{5.0};
  std::size_t total = 0;
  for (int run = 0; run < 500; ++run) {
    const std::vector<double> out =
        evup::simulate_hawkes(history, HawkesParams{0.0, 0.9}, 0.0, 10.0, run);
    for (double t : out) CHECK(t > 5.0);
    total += out.size();
  }
  // E[descendants of one event] = alpha/(1-alpha) = 9 per run, minus tail
  // truncation; hundreds of runs make zero totals impossible.
  CHECK(total > 500);
}

TEST_CASE("self-exciting: generated events feed back into the intensity") {
  // Near-critical excitation produces strongly clustered counts. If accepted
  // events did not excite, counts would be Poisson with variance == mean;
  // alpha = 0.9 pushes the Fano factor far above 3.
  const HawkesParams params{0.2, 0.9};
  std::vector<double> counts;
  for (int run = 0; run < 1500; ++run) {
    counts.push_back(static_cast<double>(
        evup::simulate_hawkes({}, params, 0.0, 30.0, 7000 + run).size()));
  }
  CHECK(var_of(counts) > 3.0 * mean_of(counts));
}

TEST_CASE("self-exciting: deterministic per seed") {
  const std::vector<double> history{0.5, 1.5};
  const HawkesParams params{3.0, 0.6};
  const std::vector<double> a = evup::simulate_hawkes(history, params, 0.0, 5.0, 99);
  const std::vector<double> b = evup::simulate_hawkes(history, params, 0.0, 5.0, 99);
  const std::vector<double> c = evup::simulate_hawkes(history, params, 0.0, 5.0, 100);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(evup::simulate_hawkes(history, params, 2.0, 2.0, 99).empty());
}

// ---------------------------------------------------------------------------
// Self-inhibiting simulation
// ---------------------------------------------------------------------------

TEST_CASE("self-inhibiting: validation") {
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(
      evup::simulate_self_correcting(unsorted, SelfCorrectingParams{1.0, 1.0}, 0.0, 1.0, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      evup::simulate_self_correcting({}, SelfCorrectingParams{-1.0, 1.0}, 0.0, 1.0, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      evup::simulate_self_correcting({}, SelfCorrectingParams{1.0, -0.1}, 0.0, 1.0, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      evup::simulate_self_correcting({}, SelfCorrectingParams{1.0, 1.0}, 2.0, 1.0, 1),
      std::invalid_argument);
  // The drift exponential would overflow doubles.
  CHECK_THROWS_AS(
      evup::simulate_self_correcting({}, SelfCorrectingParams{70.0, 1.0}, 0.0, 10.0, 1),
      std::invalid_argument);
  CHECK_NOTHROW(
      evup::simulate_self_correcting({}, SelfCorrectingParams{65.0, 1.0}, 0.0, 10.0, 1));
}

TEST_CASE("self-inhibiting: samples are strictly increasing inside (t0, t1]") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const double t0 = (rng() % 100) * 0.1;
    const double t1 = t0 + 0.1 + (rng() % 30) * 0.1;
    SelfCorrectingParams params{(rng() % 30) * 0.1, (rng() % 20) * 0.1};
    std::vector<double> history;
    double h = std::max(0.0, t0 - 1.0);
    for (int i = 0; i < 4; ++i) {
      h += (rng() % 100) * 0.01;
      history.push_back(h);
    }
    const std::vector<double> out =
        evup::simulate_self_correcting(history, params, t0, t1, rep);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] > t0);
      CHECK(out[i] <= t1);
      if (i > 0) CHECK(out[i] > out[i - 1]);
    }
  }
}

TEST_CASE("self-inhibiting: beta = 0 gives the exponential-drift Poisson mean") {
  // With no inhibition the process is inhomogeneous Poisson at rate
  // exp(mu (t - t0)); over (0, 3] at mu = 1 the mean count is e^3 - 1 =
  // 19.0855. Counts are Poisson, so 3000 runs give sigma_mean = 0.0798.
  const SelfCorrectingParams params{1.0, 0.0};
  std::vector<double> counts;
  for (int run = 0; run < 3000; ++run) {
    counts.push_back(static_cast<double>(
        evup::simulate_self_correcting({}, params, 0.0, 3.0, 400 + run).size()));
  }
  const double expected = std::exp(3.0) - 1.0;
  CHECK(std::abs(mean_of(counts) - expected) < 4.0 * std::sqrt(expected / 3000.0));
}

TEST_CASE("self-inhibiting: drift is measured from the simulation start") {
  // Same interval length but t0 = 5: the rate must restart at exp(0) = 1,
  // not exp(mu * 5). A mean near e^3 - 1 confirms re-based drift.
  const SelfCorrectingParams params{1.0, 0.0};
  std::vector<double> counts;
  for (int run = 0; run < 2000; ++run) {
    counts.push_back(static_cast<double>(
        evup::simulate_self_correcting({}, params, 5.0, 8.0, 800 + run).size()));
  }
  const double expected = std::exp(3.0) - 1.0;
  CHECK(std::abs(mean_of(counts) - expected) < 4.0 * std::sqrt(expected / 2000.0));
}

TEST_CASE("self-inhibiting: huge beta allows at most one event") {
  const SelfCorrectingParams params{2.0, 1e6};
  for (int run = 0; run < 100; ++run) {
    CHECK(evup::simulate_self_correcting({}, params, 0.0, 5.0, run).size() <= 1);
  }
}

TEST_CASE("self-inhibiting: counts are underdispersed (regularized)") {
  // Self-correction pins the count near mu*T/beta; the Fano factor drops
  // well below the Poisson value 1.
  const SelfCorrectingParams params{3.0, 1.0};
  std::vector<double> counts;
  for (int run = 0; run < 1500; ++run) {
    counts.push_back(static_cast<double>(
        evup::simulate_self_correcting({}, params, 0.0, 25.0, 3000 + run).size()));
  }
  const double mean = mean_of(counts);
  CHECK(mean > 40.0);  // sanity: the process is alive
  CHECK(var_of(counts) < 0.7 * mean);
}

TEST_CASE("self-inhibiting: conditioning history suppresses the start") {
  // Three known events before t0 multiply the initial intensity by
  // exp(-3 beta) = e^-3; with mu = 0 the rate never recovers.
  const SelfCorrectingParams params{0.0, 1.0};
  const std::vector<double> history{0.2, 0.5, 0.9};
  double with_h = 0.0, without_h = 0.0;
  for (int run = 0; run < 2000; ++run) {
    with_h += static_cast<double>(
        evup::simulate_self_correcting(history, params, 1.0, 2.0, run).size());
    without_h += static_cast<double>(
        evup::simulate_self_correcting({}, params, 1.0, 2.0, run).size());
  }
  with_h /= 2000.0;
  without_h /= 2000.0;
  CHECK(without_h > 0.4);   // rate starts at 1 and only drops on events
  CHECK(with_h < 0.15);     // rate starts at e^-3 ~ 0.05
  CHECK(with_h < without_h - 0.2);
}

TEST_CASE("self-inhibiting: an interleaved known event dampens the tail") {
  const SelfCorrectingParams params{0.0, 2.0};
  const std::vector<double> mid{0.5};
  double with_h = 0.0, without_h = 0.0;
  for (int run = 0; run < 2000; ++run) {
    with_h += static_cast<double>(
        evup::simulate_self_correcting(mid, params, 0.0, 1.0, 500 + run).size());
    without_h += static_cast<double>(
        evup::simulate_self_correcting({}, params, 0.0, 1.0, 500 + run).size());
  }
  with_h /= 2000.0;
  without_h /= 2000.0;
  CHECK(with_h < without_h - 0.1);
}

TEST_CASE("self-inhibiting: deterministic per seed") {
  const std::vector<double> history{0.3};
  const SelfCorrectingParams params{2.0, 0.5};
  const std::vector<double> a = evup::simulate_self_correcting(history, params, 0.0, 6.0, 5);
  const std::vector<double> b = evup::simulate_self_correcting(history, params, 0.0, 6.0, 5);
  const std::vector<double> c = evup::simulate_self_correcting(history, params, 0.0, 6.0, 6);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(evup::simulate_self_correcting(history, params, 3.0, 3.0, 5).empty());
}
