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

#include "evup/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace evup {

void write_pgm(const CountImage& image, std::ostream& out) {
  if (image.width <= 0 || image.height <= 0 ||
      image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw std::invalid_argument("write_pgm: inconsistent image dimensions");
  }
  const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double span = hi - lo;
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::string row(static_cast<std::size_t>(image.width), '\0');
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const double v = image.at(x, y);
      const int gray = span > 0.0 ? static_cast<int>(std::lround((v - lo) / span * 255.0)) : 0;
      row[static_cast<std::size_t>(x)] = static_cast<char>(static_cast<unsigned char>(gray));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_csv(const CountImage& image, std::ostream& out) {
  if (image.width <= 0 || image.height <= 0 ||
      image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw std::invalid_argument("write_csv: inconsistent image dimensions");
  }
  char buf[64];
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, image.at(x, y));
      (void)ec;
      if (x > 0) out.put(',');
      out.write(buf, ptr - buf);
    }
    out.put('\n');
  }
}

}  // namespace evup
