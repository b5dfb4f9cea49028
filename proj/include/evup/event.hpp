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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evup {

/// Sign of a brightness change. On disk this is 0/1; in arithmetic
/// (count images) On maps to +1 and Off to -1.
enum class Polarity : std::uint8_t { Off = 0, On = 1 };

/// Whether an event was observed by the sensor or produced by up-sampling.
enum class Origin : std::uint8_t { Original = 0, Generated = 1 };

inline int polarity_sign(Polarity p) { return p == Polarity::On ? +1 : -1; }

/// A single sensor event: integer pixel, seconds timestamp, polarity.
struct Event {
  std::int32_t x = 0;
  std::int32_t y = 0;
  double t = 0.0;  // seconds, finite, non-negative
  Polarity polarity = Polarity::On;
  Origin origin = Origin::Original;

  friend bool operator==(const Event& a, const Event& b) {
    return a.x == b.x && a.y == b.y && a.t == b.t &&
           a.polarity == b.polarity && a.origin == b.origin;
  }
};

/// An immutable, time-sorted batch of events on a fixed sensor geometry.
/// Sorting is stable, so events with equal timestamps keep construction
/// order. Original events must lie inside the geometry; timestamps must be
/// finite, non-negative and inside [t_start, t_end].
class EventWindow {
 public:
  EventWindow() = default;

  /// Bounds derived from the data: t_start/t_end = min/max timestamp
  /// (0/0 when empty).
  EventWindow(std::vector<Event> events, int width, int height)
      : EventWindow(std::move(events), width, height, 0.0, 0.0, true) {}

  /// Explicit bounds; throws if any event falls outside them.
  EventWindow(std::vector<Event> events, int width, int height,
              double t_start, double t_end)
      : EventWindow(std::move(events), width, height, t_start, t_end, false) {}

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  int width() const { return width_; }
  int height() const { return height_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double duration() const { return t_end_ - t_start_; }

  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }

 private:
  EventWindow(std::vector<Event> events, int width, int height,
              double t_start, double t_end, bool derive_bounds)
      : events_(std::move(events)),
        width_(width),
        height_(height),
        t_start_(t_start),
        t_end_(t_end) {
    if (width_ <= 0 || height_ <= 0) {
      throw std::invalid_argument("EventWindow: geometry must be positive");
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    if (derive_bounds) {
      t_start_ = events_.empty() ? 0.0 : events_.front().t;
      t_end_ = events_.empty() ? 0.0 : events_.back().t;
    }
    if (!(t_start_ <= t_end_)) {
      throw std::invalid_argument("EventWindow: t_start must not exceed t_end");
    }
    for (const Event& e : events_) {
      if (!std::isfinite(e.t) || e.t < 0.0) {
        throw std::invalid_argument("EventWindow: timestamps must be finite and non-negative");
      }
      if (e.t < t_start_ || e.t > t_end_) {
        throw std::invalid_argument("EventWindow: event timestamp outside [t_start, t_end]");
      }
      if (e.origin == Origin::Original &&
          (e.x < 0 || e.x >= width_ || e.y < 0 || e.y >= height_)) {
        throw std::invalid_argument("EventWindow: original event outside geometry");
      }
    }
  }

  std::vector<Event> events_;
  int width_ = 1;
  int height_ = 1;
  double t_start_ = 0.0;
  double t_end_ = 0.0;
};

/// Events with t0 <= t < t1 (half-open), geometry preserved. The result's
/// bounds are [t0, t1]; a slice covering [t_start, t_end + eps) reproduces
/// the source event sequence.
inline EventWindow slice_window(const EventWindow& window, double t0, double t1) {
  if (!(t0 <= t1)) {
    throw std::invalid_argument("slice_window: t0 must not exceed t1");
  }
  std::vector<Event> kept;
  for (const Event& e : window) {
    if (e.t >= t0 && e.t < t1) kept.push_back(e);
  }
  return EventWindow(std::move(kept), window.width(), window.height(), t0, t1);
}

}  // namespace evup
