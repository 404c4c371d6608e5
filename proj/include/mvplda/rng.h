// mvplda/rng.h

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

#ifndef MVPLDA_RNG_H_
#define MVPLDA_RNG_H_

#include <cstdint>
#include <random>

#include "mvplda/common.h"

namespace mvplda {

// Stream-splitting scheme: every category of random draw gets its own
// substream, seeded as splitmix64(master ^ splitmix64(stream id)).  The
// generator behind each substream is std::mt19937_64 (bit-exact across
// implementations); normals come from an explicit Box-Muller over the raw
// 64-bit outputs, so a given (seed, stream) pair replays the same draws
// everywhere.
enum class Stream : std::uint64_t {
  kTruthMu = 1,
  kTruthS = 2,
  kTruthT = 3,
  kLatentU = 4,
  kLatentV = 5,
  kNoise = 6,
  kInitS = 7,   // also the plda B init stream
  kInitT = 8,
  kTrials = 9,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t substream_seed(std::uint64_t master_seed, Stream stream);

/// Standard-normal sampler over one substream.  Matrices fill row major.
class NormalSampler {
 public:
  NormalSampler(std::uint64_t master_seed, Stream stream);

  double next();
  Vector vector(Index n);
  Matrix matrix(Index rows, Index cols);

 private:
  std::mt19937_64 gen_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace mvplda

#endif  // MVPLDA_RNG_H_
