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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evup/eval.hpp"
#include "evup/image_io.hpp"
#include "evup/stream_io.hpp"
#include "evup/upsampler.hpp"

namespace {

using nlohmann::ordered_json;

struct StreamOpts {
  std::string input = "-";
  int width = 0;
  int height = 0;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  double window_ms = 0.0;  // 0 = single window
};

void add_stream_opts(CLI::App* cmd, StreamOpts& opts) {
  cmd->add_option("-i,--input", opts.input, "Input event stream (TextV1), '-' for stdin");
  cmd->add_option("--width", opts.width, "Sensor width in pixels")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--height", opts.height, "Sensor height in pixels")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--t0", opts.t0, "Keep events with t >= t0 (seconds)");
  cmd->add_option("--t1", opts.t1, "Keep events with t < t1 (seconds)");
  cmd->add_option("--window-ms", opts.window_ms, "Process in consecutive windows of this length")
      ->check(CLI::PositiveNumber);
}

void add_optimizer_opts(CLI::App* cmd, evup::OptimizerConfig& cfg) {
  cmd->add_option("--v-max", cfg.v_max, "Velocity search box half-width, px/s")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", cfg.n_restarts, "Simplex restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--simplex-scale", cfg.simplex_init_scale, "Initial simplex edge, px/s")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--f-tol", cfg.f_tol, "Relative objective tolerance");
  cmd->add_option("--x-tol", cfg.x_tol, "Simplex diameter tolerance, px/s");
  cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap per restart")
      ->check(CLI::PositiveNumber);
}

evup::EventWindow load_events(const StreamOpts& opts) {
  evup::EventWindow window = [&] {
    if (opts.input == "-") {
      return evup::read_events(std::cin, evup::StreamFormat::TextV1, opts.width, opts.height);
    }
    std::ifstream file(opts.input);
    if (!file) throw std::runtime_error("cannot open input '" + opts.input + "'");
    return evup::read_events(file, evup::StreamFormat::TextV1, opts.width, opts.height);
  }();
  if (std::isfinite(opts.t0) || std::isfinite(opts.t1)) {
    const double lo = std::isfinite(opts.t0) ? opts.t0 : window.t_start();
    const double hi = std::isfinite(opts.t1)
                          ? opts.t1
                          : std::nextafter(window.t_end(), std::numeric_limits<double>::infinity());
    window = evup::slice_window(window, lo, hi);
  }
  return window;
}

// Consecutive [t, t + B) slices; the final slice is widened one ulp so an
// event exactly at t_end is not lost to the half-open bound.
std::vector<evup::EventWindow> batch_windows(const evup::EventWindow& window, double window_ms) {
  std::vector<evup::EventWindow> out;
  if (window_ms <= 0.0) {
    out.push_back(window);
    return out;
  }
  const double step = window_ms / 1000.0;
  double t = window.t_start();
  while (true) {
    const double hi = t + step;
    const bool last = hi >= window.t_end();
    out.push_back(evup::slice_window(
        window, t,
        last ? std::nextafter(window.t_end(), std::numeric_limits<double>::infinity()) : hi));
    if (last) break;
    t = hi;
  }
  return out;
}

bool degenerate(const evup::EventWindow& window) {
  return window.size() < 2 || !(window.events().back().t > window.events().front().t);
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream file(path, mode);
  if (!file) throw std::runtime_error("cannot open output '" + path + "'");
  return file;
}

ordered_json estimate_json(const evup::OptimizationResult& result) {
  ordered_json j;
  j["vx"] = result.theta_star.vx;
  j["vy"] = result.theta_star.vy;
  j["f"] = result.f_star;
  j["converged"] = result.converged;
  return j;
}

ordered_json report_json(const evup::UpsampleReport& report) {
  ordered_json j;
  j["vx"] = report.theta_star.vx;
  j["vy"] = report.theta_star.vy;
  j["f"] = report.f_star;
  j["converged"] = report.optimizer_converged;
  j["k"] = report.k;
  j["k_main"] = report.k_main;
  j["original"] = report.counts.original;
  j["generated_main"] = report.counts.generated_main;
  j["generated_noise"] = report.counts.generated_noise;
  j["dropped_out_of_bounds"] = report.counts.dropped_out_of_bounds;
  j["original_out_of_bounds"] = report.original_out_of_bounds;
  return j;
}

int run_estimate(const StreamOpts& stream, const evup::OptimizerConfig& optimizer,
                 bool unsigned_mode) {
  const auto mode =
      unsigned_mode ? evup::AccumulationMode::Unsigned : evup::AccumulationMode::Signed;
  const evup::EventWindow whole = load_events(stream);
  const std::vector<evup::EventWindow> windows = batch_windows(whole, stream.window_ms);
  const bool batch = stream.window_ms > 0.0;
  for (const evup::EventWindow& window : windows) {
    if (batch && degenerate(window)) {
      std::cerr << "estimate: window [" << window.t_start() << ", " << window.t_end()
                << ") has too few events; emitting converged=false\n";
      std::cout << ordered_json{{"vx", 0.0}, {"vy", 0.0}, {"f", 0.0}, {"converged", false}}.dump()
                << "\n";
      continue;
    }
    std::cout << estimate_json(evup::estimate_trajectory(window, optimizer, mode)).dump() << "\n";
  }
  return 0;
}

struct UpsampleOpts {
  std::string output = "-";
  std::string report_path;
  std::string trajectory_csv_path;
  bool emit_origin = false;
};

int run_upsample(const StreamOpts& stream, const evup::UpsampleConfig& config,
                 const UpsampleOpts& opts) {
  const evup::EventWindow whole = load_events(stream);
  const std::vector<evup::EventWindow> windows = batch_windows(whole, stream.window_ms);
  const bool batch = stream.window_ms > 0.0;

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (opts.output != "-") {
    out_file = open_out(opts.output);
    out = &out_file;
  }

  std::vector<ordered_json> reports;
  std::ofstream csv;
  if (!opts.trajectory_csv_path.empty()) csv = open_out(opts.trajectory_csv_path);

  for (const evup::EventWindow& window : windows) {
    if (batch && degenerate(window)) {
      std::cerr << "upsample: window [" << window.t_start() << ", " << window.t_end()
                << ") has too few events; passing originals through\n";
      if (config.include_originals) {
        evup::write_events(window, *out, evup::StreamFormat::TextV1, opts.emit_origin);
      }
      continue;
    }
    auto [result, report] = evup::upsample(window, config);
    evup::write_events(result, *out, evup::StreamFormat::TextV1, opts.emit_origin);
    reports.push_back(report_json(report));
    if (csv.is_open()) evup::write_intensity_csv(report, csv);
  }

  if (!opts.report_path.empty()) {
    std::ofstream report_file = open_out(opts.report_path);
    if (batch) {
      report_file << ordered_json(reports).dump(2) << "\n";
    } else if (!reports.empty()) {
      report_file << reports.front().dump(2) << "\n";
    }
  }
  return 0;
}

struct MetricsOpts {
  double vx = 0.0;
  double vy = 0.0;
  bool estimate = false;
  bool sobel = false;
  std::string pgm_path;
  std::string csv_path;
};

int run_metrics(const StreamOpts& stream, const evup::OptimizerConfig& optimizer,
                bool unsigned_mode, const MetricsOpts& opts) {
  const auto mode =
      unsigned_mode ? evup::AccumulationMode::Unsigned : evup::AccumulationMode::Signed;
  const auto op = opts.sobel ? evup::GradientOperator::Sobel : evup::GradientOperator::CentralDiff;
  const evup::EventWindow whole = load_events(stream);
  const std::vector<evup::EventWindow> windows = batch_windows(whole, stream.window_ms);
  const bool batch = stream.window_ms > 0.0;
  for (const evup::EventWindow& window : windows) {
    if (batch && window.empty()) {
      std::cerr << "metrics: window [" << window.t_start() << ", " << window.t_end()
                << ") is empty; emitting zeros\n";
      std::cout << ordered_json{{"variance", 0.0}, {"gradient", 0.0},
                                {"variance_per_event", 0.0}, {"gradient_per_event", 0.0},
                                {"events", 0},     {"vx", 0.0},
                                {"vy", 0.0}}
                       .dump()
                << "\n";
      continue;
    }
    evup::Velocity theta{opts.vx, opts.vy};
    if (opts.estimate) {
      if (batch && degenerate(window)) {
        std::cerr << "metrics: window [" << window.t_start() << ", " << window.t_end()
                  << ") has too few events to estimate; using (0, 0)\n";
        theta = evup::Velocity{0.0, 0.0};
      } else {
        theta = evup::estimate_trajectory(window, optimizer, mode).theta_star;
      }
    }
    const evup::MetricReport report = evup::projected_metrics(window, theta, mode, op);
    ordered_json j;
    j["variance"] = report.variance;
    j["gradient"] = report.gradient;
    j["variance_per_event"] = report.variance_per_event;
    j["gradient_per_event"] = report.gradient_per_event;
    j["events"] = report.events;
    j["vx"] = theta.vx;
    j["vy"] = theta.vy;
    std::cout << j.dump() << "\n";
    if (!opts.pgm_path.empty()) {
      std::ofstream pgm = open_out(opts.pgm_path, std::ios::out | std::ios::binary);
      const evup::CountImage image =
          evup::accumulate(window, theta, evup::reference_time(window), mode);
      evup::write_pgm(image, pgm);
    }
    if (!opts.csv_path.empty()) {
      std::ofstream csv = open_out(opts.csv_path);
      const evup::CountImage image =
          evup::accumulate(window, theta, evup::reference_time(window), mode);
      evup::write_csv(image, csv);
    }
  }
  return 0;
}

struct SynthOpts {
  evup::SceneSpec spec;
  std::string pattern = "edge";
  std::string polarity = "on";
  std::string output = "-";
};

int run_synth(SynthOpts& opts) {
  if (opts.pattern == "edge") {
    opts.spec.pattern = evup::ScenePattern::VerticalEdge;
  } else if (opts.pattern == "bar") {
    opts.spec.pattern = evup::ScenePattern::Bar;
  } else if (opts.pattern == "strip") {
    opts.spec.pattern = evup::ScenePattern::TexturedStrip;
  } else {
    throw std::runtime_error("unknown pattern '" + opts.pattern + "'");
  }
  if (opts.polarity == "on") {
    opts.spec.polarity = evup::PolarityScheme::AllOn;
  } else if (opts.polarity == "leading-trailing") {
    opts.spec.polarity = evup::PolarityScheme::LeadingTrailing;
  } else if (opts.polarity == "random") {
    opts.spec.polarity = evup::PolarityScheme::RandomBalanced;
  } else {
    throw std::runtime_error("unknown polarity scheme '" + opts.polarity + "'");
  }
  const evup::EventWindow window = evup::synth_scene(opts.spec);
  if (opts.output == "-") {
    evup::write_events(window, std::cout, evup::StreamFormat::TextV1);
  } else {
    std::ofstream file = open_out(opts.output);
    evup::write_events(window, file, evup::StreamFormat::TextV1);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal up-sampling of event camera streams"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file; flags take precedence");

  int exit_code = 0;

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the dominant image velocity");
  static StreamOpts est_stream;
  static evup::OptimizerConfig est_optimizer;
  static bool est_unsigned = false;
  add_stream_opts(est, est_stream);
  add_optimizer_opts(est, est_optimizer);
  est->add_option("--seed", est_optimizer.seed, "Random seed");
  est->add_flag("--unsigned-accumulation", est_unsigned, "Accumulate raw counts, not signed");
  est->callback([&] { exit_code = run_estimate(est_stream, est_optimizer, est_unsigned); });

  // upsample
  auto* ups = app.add_subcommand("upsample", "Densify a stream along its trajectories");
  static StreamOpts ups_stream;
  static evup::UpsampleConfig ups_config;
  static UpsampleOpts ups_opts;
  static bool ups_no_originals = false;
  static bool ups_unsigned = false;
  add_stream_opts(ups, ups_stream);
  add_optimizer_opts(ups, ups_config.optimizer);
  ups->add_option("--seed", ups_config.seed, "Random seed");
  ups->add_option("--phi", ups_config.phi, "Main/noise member-count threshold")
      ->check(CLI::NonNegativeNumber);
  ups->add_option("--r", ups_config.r, "Up-sampling rate in the intensity law")
      ->check(CLI::PositiveNumber);
  ups->add_option("--alpha", ups_config.alpha, "Self-excitation weight (Main)");
  ups->add_option("--beta", ups_config.beta, "Self-inhibition jump (Noise)")
      ->check(CLI::NonNegativeNumber);
  ups->add_flag("--no-include-originals", ups_no_originals, "Emit only generated events");
  ups->add_flag("--unsigned-accumulation", ups_unsigned, "Accumulate raw counts, not signed");
  ups->add_flag("--emit-origin-column", ups_opts.emit_origin,
                "Append a 5th column: 0=original, 1=generated");
  ups->add_option("-o,--output", ups_opts.output, "Output stream path, '-' for stdout");
  ups->add_option("--report", ups_opts.report_path, "Write a JSON run report here");
  ups->add_option("--dump-trajectories", ups_opts.trajectory_csv_path,
                  "Write per-trajectory intensity derivations as CSV");
  ups->callback([&] {
    ups_config.include_originals = !ups_no_originals;
    ups_config.signed_accumulation = !ups_unsigned;
    exit_code = run_upsample(ups_stream, ups_config, ups_opts);
  });

  // metrics
  auto* met = app.add_subcommand("metrics", "Sharpness of the motion-compensated image");
  static StreamOpts met_stream;
  static evup::OptimizerConfig met_optimizer;
  static MetricsOpts met_opts;
  static bool met_unsigned = false;
  add_stream_opts(met, met_stream);
  add_optimizer_opts(met, met_optimizer);
  met->add_option("--seed", met_optimizer.seed, "Random seed");
  met->add_option("--vx", met_opts.vx, "Projection velocity x, px/s");
  met->add_option("--vy", met_opts.vy, "Projection velocity y, px/s");
  met->add_flag("--estimate", met_opts.estimate, "Estimate the velocity instead of --vx/--vy");
  met->add_flag("--sobel", met_opts.sobel, "Sobel gradient instead of central differences");
  met->add_flag("--unsigned-accumulation", met_unsigned, "Accumulate raw counts, not signed");
  met->add_option("--dump-pgm", met_opts.pgm_path, "Write the count image as 8-bit PGM");
  met->add_option("--dump-csv", met_opts.csv_path, "Write the count image as CSV");
  met->callback(
      [&] { exit_code = run_metrics(met_stream, met_optimizer, met_unsigned, met_opts); });

  // synth
  auto* syn = app.add_subcommand("synth", "Generate a synthetic translating scene");
  static SynthOpts syn_opts;
  syn->add_option("--pattern", syn_opts.pattern, "edge | bar | strip");
  syn->add_option("--width", syn_opts.spec.width, "Sensor width")->check(CLI::PositiveNumber);
  syn->add_option("--height", syn_opts.spec.height, "Sensor height")->check(CLI::PositiveNumber);
  syn->add_option("--duration", syn_opts.spec.duration, "Scene length, seconds")
      ->check(CLI::PositiveNumber);
  syn->add_option("--vx", syn_opts.spec.true_velocity.vx, "True velocity x, px/s");
  syn->add_option("--vy", syn_opts.spec.true_velocity.vy, "True velocity y, px/s");
  syn->add_option("--edge-rate", syn_opts.spec.edge_rate,
                  "Pattern events per length-unit per second")
      ->check(CLI::NonNegativeNumber);
  syn->add_option("--noise-rate", syn_opts.spec.noise_rate, "Noise events per pixel per second")
      ->check(CLI::NonNegativeNumber);
  syn->add_option("--polarity", syn_opts.polarity, "on | leading-trailing | random");
  syn->add_option("--bar-width", syn_opts.spec.bar_width, "Bar pattern width, px")
      ->check(CLI::PositiveNumber);
  syn->add_option("--strip-width", syn_opts.spec.strip_width, "Strip pattern width, px")
      ->check(CLI::PositiveNumber);
  syn->add_option("--texture-points", syn_opts.spec.texture_points, "Speckle count in the strip")
      ->check(CLI::PositiveNumber);
  syn->add_option("--seed", syn_opts.spec.seed, "Random seed");
  syn->add_option("-o,--output", syn_opts.output, "Output stream path, '-' for stdout");
  syn->callback([&] { exit_code = run_synth(syn_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version are success; anything else is usage
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
