// mvplda/rng.cc

// Copyright 2026  The mvplda Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "mvplda/rng.h"

#include <cmath>

namespace mvplda {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, Stream stream) {
  return splitmix64(master_seed ^
                    splitmix64(static_cast<std::uint64_t>(stream)));
}

NormalSampler::NormalSampler(std::uint64_t master_seed, Stream stream)
    : gen_(substream_seed(master_seed, stream)) {}

double NormalSampler::next() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // Uniforms in (0,1] from the top 53 bits, then Box-Muller.
  const double u1 =
      (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 =
      (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = radius * std::sin(angle);
  have_cached_ = true;
  return radius * std::cos(angle);
}

Vector NormalSampler::vector(Index n) {
  Vector out(n);
  for (Index i = 0; i < n; ++i) out[i] = next();
  return out;
}

Matrix NormalSampler::matrix(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) out(r, c) = next();
  return out;
}

}  // namespace mvplda
