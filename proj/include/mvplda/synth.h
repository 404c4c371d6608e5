// mvplda/synth.h

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

#ifndef MVPLDA_SYNTH_H_
#define MVPLDA_SYNTH_H_

#include <cstdint>
#include <vector>

#include "mvplda/dataset.h"
#include "mvplda/jplda.h"

namespace mvplda {

/// Ground-truth generation plan: I x J label grid with H samples per cell
/// (or an explicit per-cell table, row major over (i, j)).
struct SynthConfig {
  Index dim = 20;
  Index nu = 2;
  Index nv = 2;
  int num_a = 30;          // I
  int num_b = 8;           // J
  int samples_per_cell = 5;
  std::vector<int> per_cell_counts;  // optional, I*J row major
  double noise_scale = 1.0;
  std::uint64_t seed = 0;
};

/// A random truth model, fully determined by config.seed: mu standard
/// normal (stream kTruthMu), S and T standard normal row-major fills
/// (kTruthS / kTruthT), Sigma = noise_scale^2 on the diagonal.
JointPldaModel make_truth(const SynthConfig &config);

/// Draws u_i per A label (stream kLatentU), v_j per B label (kLatentV) and
/// per-sample noise (kNoise), then emits x_ijk = mu + S u_i + T v_j + eps in
/// (i, j, k) order.  Byte-identical replay per seed.
Dataset sample_dataset(const JointPldaModel &truth, const SynthConfig &config);

/// Rotation-invariant recovery metrics: relative Frobenius error of the
/// identifiable Gram products, plus the diagonal noise error.
struct SubspaceError {
  double err_s = 0.0;
  double err_t = 0.0;
  double err_sigma = 0.0;
};

SubspaceError subspace_error(const JointPldaModel &truth,
                             const JointPldaModel &estimate);

}  // namespace mvplda

#endif  // MVPLDA_SYNTH_H_
