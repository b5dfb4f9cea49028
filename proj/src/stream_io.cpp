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

#include "evup/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace evup {

namespace {

// Splits a line into whitespace-separated tokens; at most max_tokens + 1 are
// collected so an overlong line is detectable without unbounded work.
std::size_t tokenize(std::string_view line, std::string_view* tokens,
                     std::size_t max_tokens) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (count < max_tokens) tokens[count] = line.substr(start, i - start);
    ++count;
    if (count > max_tokens) break;
  }
  return count;
}

double parse_double(std::string_view s, std::size_t line_no, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line_no, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

long parse_int(std::string_view s, std::size_t line_no, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line_no, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

EventWindow read_events(std::istream& in, StreamFormat format, int width, int height) {
  if (format != StreamFormat::TextV1) {
    throw std::invalid_argument("read_events: unsupported stream format");
  }
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("read_events: geometry must be positive");
  }
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  std::string_view tokens[5];
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    std::size_t first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;  // blank
    if (view[first] == '#') continue;               // comment
    std::size_t n = tokenize(view, tokens, 5);
    if (n != 4 && n != 5) {
      throw ParseError(line_no, "expected 4 or 5 columns, got " + std::to_string(n > 5 ? 6 : n));
    }
    Event e;
    e.t = parse_double(tokens[0], line_no, "timestamp");
    if (!std::isfinite(e.t)) throw ParseError(line_no, "non-finite timestamp");
    if (e.t < 0.0) throw ParseError(line_no, "negative timestamp");
    long x = parse_int(tokens[1], line_no, "x coordinate");
    long y = parse_int(tokens[2], line_no, "y coordinate");
    if (x < 0 || x >= width || y < 0 || y >= height) {
      throw ParseError(line_no, "coordinate (" + std::to_string(x) + ", " + std::to_string(y) +
                                    ") outside " + std::to_string(width) + "x" + std::to_string(height));
    }
    e.x = static_cast<std::int32_t>(x);
    e.y = static_cast<std::int32_t>(y);
    long p = parse_int(tokens[3], line_no, "polarity");
    if (p != 0 && p != 1) throw ParseError(line_no, "polarity must be 0 or 1");
    e.polarity = p == 1 ? Polarity::On : Polarity::Off;
    if (n == 5) {
      long origin = parse_int(tokens[4], line_no, "origin");
      if (origin != 0 && origin != 1) throw ParseError(line_no, "origin must be 0 or 1");
      e.origin = origin == 1 ? Origin::Generated : Origin::Original;
    }
    events.push_back(e);
  }
  return EventWindow(std::move(events), width, height);
}

void write_events(const EventWindow& window, std::ostream& out,
                  StreamFormat format, bool emit_origin) {
  if (format != StreamFormat::TextV1) {
    throw std::invalid_argument("write_events: unsupported stream format");
  }
  char buf[96];
  for (const Event& e : window) {
    int len;
    if (emit_origin) {
      len = std::snprintf(buf, sizeof buf, "%.9f %d %d %d %d\n", e.t, e.x, e.y,
                          e.polarity == Polarity::On ? 1 : 0,
                          e.origin == Origin::Generated ? 1 : 0);
    } else {
      len = std::snprintf(buf, sizeof buf, "%.9f %d %d %d\n", e.t, e.x, e.y,
                          e.polarity == Polarity::On ? 1 : 0);
    }
    out.write(buf, len);
  }
}

}  // namespace evup
