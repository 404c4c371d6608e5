// mvplda/synth.cc

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

#include "mvplda/synth.h"

#include <string>

#include "mvplda/rng.h"

namespace mvplda {

namespace {

void check_config(const SynthConfig &config) {
  if (config.dim < 1 || config.num_a < 1 || config.num_b < 1 ||
      config.nu < 0 || config.nv < 0)
    throw DimensionMismatch("synth config wants dim/I/J >= 1 and N_u/N_v >= 0");
  if (config.per_cell_counts.empty()) {
    if (config.samples_per_cell < 1)
      throw DimensionMismatch("synth config wants samples per cell >= 1");
  } else {
    const size_t expected = static_cast<size_t>(config.num_a) *
                            static_cast<size_t>(config.num_b);
    if (config.per_cell_counts.size() != expected)
      throw DimensionMismatch("per-cell table must have I*J entries");
    for (int h : config.per_cell_counts)
      if (h < 1) throw DimensionMismatch("per-cell counts must be >= 1");
  }
}

int cell_count(const SynthConfig &config, int i, int j) {
  if (config.per_cell_counts.empty()) return config.samples_per_cell;
  return config.per_cell_counts[static_cast<size_t>(i) * config.num_b + j];
}

double frobenius_relative(const Matrix &truth, const Matrix &estimate) {
  const double denom = truth.norm();
  const double num = (truth - estimate).norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

}  // namespace

JointPldaModel make_truth(const SynthConfig &config) {
  check_config(config);
  NormalSampler mu_draw(config.seed, Stream::kTruthMu);
  NormalSampler s_draw(config.seed, Stream::kTruthS);
  NormalSampler t_draw(config.seed, Stream::kTruthT);
  return JointPldaModel(
      mu_draw.vector(config.dim),
      FactorMatrix(s_draw.matrix(config.dim, config.nu)),
      FactorMatrix(t_draw.matrix(config.dim, config.nv)),
      DiagMatrix::Constant(config.dim,
                           config.noise_scale * config.noise_scale));
}

Dataset sample_dataset(const JointPldaModel &truth, const SynthConfig &config) {
  check_config(config);
  if (truth.dim() != config.dim || truth.nu() != config.nu ||
      truth.nv() != config.nv)
    throw DimensionMismatch("truth model dims disagree with synth config");

  NormalSampler u_draw(config.seed, Stream::kLatentU);
  NormalSampler v_draw(config.seed, Stream::kLatentV);
  NormalSampler noise_draw(config.seed, Stream::kNoise);

  std::vector<Vector> u_effect(config.num_a);
  for (int i = 0; i < config.num_a; ++i)
    u_effect[i] = truth.s.dense() * u_draw.vector(config.nu);
  std::vector<Vector> v_effect(config.num_b);
  for (int j = 0; j < config.num_b; ++j)
    v_effect[j] = truth.t.dense() * v_draw.vector(config.nv);

  const Vector noise_std = truth.sigma.entries().cwiseSqrt();
  Dataset out;
  out.dim = config.dim;
  for (int i = 0; i < config.num_a; ++i)
    for (int j = 0; j < config.num_b; ++j)
      for (int k = 0; k < cell_count(config, i, j); ++k) {
        LabeledVector item;
        item.label_a = i;
        item.label_b = j;
        item.features = truth.mu + u_effect[i] + v_effect[j] +
                        noise_std.cwiseProduct(noise_draw.vector(config.dim));
        out.items.push_back(std::move(item));
      }
  return out;
}

SubspaceError subspace_error(const JointPldaModel &truth,
                             const JointPldaModel &estimate) {
  if (truth.dim() != estimate.dim())
    throw DimensionMismatch("subspace_error: feature dims " +
                            std::to_string(truth.dim()) + " vs " +
                            std::to_string(estimate.dim()));
  SubspaceError out;
  out.err_s = frobenius_relative(truth.s.gram().dense(),
                                 estimate.s.gram().dense());
  out.err_t = frobenius_relative(truth.t.gram().dense(),
                                 estimate.t.gram().dense());
  out.err_sigma = frobenius_relative(Matrix(truth.sigma.entries().asDiagonal()),
                                     Matrix(estimate.sigma.entries().asDiagonal()));
  return out;
}

}  // namespace mvplda
