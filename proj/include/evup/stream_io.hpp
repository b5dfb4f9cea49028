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

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "evup/event.hpp"

namespace evup {

/// On-disk encodings of an event stream.
enum class StreamFormat {
  /// Plain text, one event per line: "t x y p" with whitespace separators,
  /// t in seconds, integer pixel coordinates, p in {0, 1} (1 = brightness
  /// increase). Lines starting with '#' and blank lines are skipped. An
  /// optional 5th column carries provenance (0 = original, 1 = generated).
  TextV1,
};

/// Parse failure with a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Read a whole stream into a window on the given geometry. Events need not
/// be time-sorted on disk; the window sorts them (stable). Bounds become
/// min/max timestamp. Throws ParseError on malformed lines, polarity outside
/// {0, 1}, coordinates outside the geometry, or non-finite/negative
/// timestamps.
EventWindow read_events(std::istream& in, StreamFormat format, int width, int height);

/// Write events in timestamp order, timestamps fixed at 9 decimal places
/// (nanosecond resolution). With emit_origin a 5th provenance column is
/// appended to every line.
void write_events(const EventWindow& window, std::ostream& out,
                  StreamFormat format, bool emit_origin = false);

}  // namespace evup
