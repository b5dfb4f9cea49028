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

#include <iosfwd>

#include "evup/warp.hpp"

namespace evup {

/// Binary 8-bit PGM (P5), min-max normalized; a constant image maps to 0.
void write_pgm(const CountImage& image, std::ostream& out);

/// Exact values as CSV, one row per image row, shortest round-trip doubles.
void write_csv(const CountImage& image, std::ostream& out);

}  // namespace evup
