// mvplda/posterior.h  (internal, not installed)

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

#ifndef MVPLDA_SRC_POSTERIOR_H_
#define MVPLDA_SRC_POSTERIOR_H_

#include <vector>

#include "mvplda/dataset.h"
#include "mvplda/gaussmath.h"

namespace mvplda::detail {

// Per-group posterior of the tied latent z under x_k = mu + B z + eps:
//   G = I + H B^T Sigma^{-1} B,  mean = G^{-1} B^T Sigma^{-1} sum_k(x_k - mu),
//   moment = G^{-1} + mean mean^T.
struct GroupPosterior {
  long label_a = 0;
  long label_b = 0;
  int count = 0;
  Vector mean;
  Matrix moment;
};

std::vector<GroupPosterior> latent_posteriors(
    const FactorMatrix &b, const DiagMatrix &sigma, const Vector &mu,
    const Dataset &dataset, const std::vector<SampleGroup> &groups);

// Group-factorized dataset log likelihood: the H*d-dimensional stacked
// Gaussian of each group, evaluated with the matrix inversion lemma so only
// cols(B) x cols(B) systems are factorized:
//   -H d/2 log 2pi - H/2 log|Sigma| - 1/2 sum_k r_k^T Sigma^{-1} r_k
//   - 1/2 log|G| + 1/2 b^T G^{-1} b.
double grouped_loglik(const FactorMatrix &b, const DiagMatrix &sigma,
                      const Vector &mu, const Dataset &dataset,
                      const std::vector<SampleGroup> &groups);

}  // namespace mvplda::detail

#endif  // MVPLDA_SRC_POSTERIOR_H_
