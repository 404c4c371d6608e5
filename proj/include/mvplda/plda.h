// mvplda/plda.h

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

#ifndef MVPLDA_PLDA_H_
#define MVPLDA_PLDA_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mvplda/dataset.h"
#include "mvplda/gaussmath.h"

namespace mvplda {

/// Classical PLDA: x_ij = mu + B z_i + eps_ij with z ~ N(0,I) and diagonal
/// noise.  The training class is the joint (label_a, label_b) cell, which is
/// how the baseline treats multi-task labels.
struct PldaModel {
  Vector mu;
  FactorMatrix b;
  DiagMatrix sigma;

  PldaModel(Vector mu_in, FactorMatrix b_in, DiagMatrix sigma_in);

  Index dim() const { return mu.size(); }
  Index subspace_dim() const { return b.cols(); }
};

/// Posterior moments of one class's tied latent variable.
struct ClassStats {
  long label_a = 0;
  long label_b = 0;
  int count = 0;             // H_i
  Vector z_mean;             // E[z_i]
  SymMatrix z_moment;        // E[z_i z_i^T]
};

/// Dataset log likelihood after each M step.  EM over {B, Sigma} with mu
/// frozen at the global mean is an exact ascent, so the trace must be
/// non-decreasing up to solver round-off.
struct LLTrace {
  std::vector<double> values;
};

struct PldaConfig {
  int iterations = 10;
  int subspace_dim = 40;
  std::uint64_t seed = 0;
};

std::vector<ClassStats> plda_estep(const PldaModel &model,
                                   const Dataset &dataset,
                                   const std::vector<SampleGroup> &groups);

/// One M step.  B from the accumulated first/second posterior moments, then
/// Sigma from the residual diagonal using the fresh B; mu is held at the
/// precomputed global mean.
PldaModel plda_mstep(const std::vector<ClassStats> &stats,
                     const Dataset &dataset,
                     const std::vector<SampleGroup> &groups, const Vector &mu);

/// EM training.  Without an explicit `init`, B starts at 0.1 x per-coordinate
/// std random entries (stream kInitS of config.seed) and Sigma at the
/// empirical diagonal covariance.
std::pair<PldaModel, LLTrace> plda_train(
    const Dataset &dataset, const PldaConfig &config,
    const std::optional<PldaModel> &init = std::nullopt);

/// Same-class vs different-class log likelihood ratio through the stacked
/// 2d-dimensional Gaussians.
double plda_llr_naive(const PldaModel &model, const Vector &xt,
                      const Vector &xs);

/// Precomputed quadratic-form scorer: 1/2 [x_t^T Q x_t + 2 x_t^T P x_s +
/// x_s^T Q x_s] + constant over centered inputs, built via the Woodbury
/// identity so only subspace-sized systems are factorized.
struct FastScorer {
  SymMatrix q;
  SymMatrix p;
  double constant = 0.0;
  Vector mu;
};

FastScorer plda_scorer_precompute(const PldaModel &model);

double plda_llr_fast(const FastScorer &scorer, const Vector &xt,
                     const Vector &xs);

}  // namespace mvplda

#endif  // MVPLDA_PLDA_H_
