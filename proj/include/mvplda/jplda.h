// mvplda/jplda.h

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

#ifndef MVPLDA_JPLDA_H_
#define MVPLDA_JPLDA_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mvplda/dataset.h"
#include "mvplda/gaussmath.h"
#include "mvplda/plda.h"

namespace mvplda {

/// Multi-view (joint) PLDA: x_ijk = mu + S u_i + T v_j + eps_ijk with
/// independent standard-normal latents per label and diagonal noise.
/// Either subspace may be empty; with N_v = 0 the model *is* classical PLDA
/// with B = S.
struct JointPldaModel {
  Vector mu;
  FactorMatrix s;
  FactorMatrix t;
  DiagMatrix sigma;

  JointPldaModel(Vector mu_in, FactorMatrix s_in, FactorMatrix t_in,
                 DiagMatrix sigma_in);

  Index dim() const { return mu.size(); }
  Index nu() const { return s.cols(); }
  Index nv() const { return t.cols(); }

  /// The stacked loading [S T] the EM works in.
  FactorMatrix stacked_factor() const;
};

/// Posterior moments of one cell's tied latent z_ij = [u_i; v_j], with the
/// partitioned views the M step consumes.  Partition accessors are plain
/// block reads of the stored joint moment.
struct CellStats {
  long label_a = 0;
  long label_b = 0;
  int count = 0;  // H_ij
  Index nu = 0;
  Index nv = 0;
  Vector z_mean;
  SymMatrix z_moment;

  Vector u_mean() const { return z_mean.head(nu); }
  Vector v_mean() const { return z_mean.tail(nv); }
  Matrix uu_moment() const { return z_moment.dense().topLeftCorner(nu, nu); }
  Matrix vv_moment() const { return z_moment.dense().bottomRightCorner(nv, nv); }
  Matrix uv_moment() const { return z_moment.dense().topRightCorner(nu, nv); }
};

/// Which latent variables a pair of vectors shares under a hypothesis.
/// H0 = {true, true}; M1 = {false, true}; M2 = {true, false};
/// M3 = {false, false}.
struct ShareSpec {
  bool share_u = false;
  bool share_v = false;
};

/// Priors of the three alternative models under H1 in the joint test.
struct JointPriors {
  double p1, p2, p3;
  JointPriors(double p1_in, double p2_in, double p3_in);
  static JointPriors Uniform() { return {1.0 / 3, 1.0 / 3, 1.0 / 3}; }
};

/// Priors of the single-view test: (p0, p1) weight the numerator pair and
/// (p2, p3) the denominator pair; each pair sums to one.
struct ViewPriors {
  double p0, p1, p2, p3;
  ViewPriors(double p0_in, double p1_in, double p2_in, double p3_in);
  static ViewPriors Uniform() { return {0.5, 0.5, 0.5, 0.5}; }
};

enum class View { kA, kB };

struct JointPldaConfig {
  int iterations = 10;
  int nu = 20;
  int nv = 20;
  std::uint64_t seed = 0;
};

/// Per-cell posteriors.  Each cell conditions on its own samples only; a
/// speaker's u_i is not coupled across cells.
std::vector<CellStats> jplda_estep(const JointPldaModel &model,
                                   const Dataset &dataset,
                                   const std::vector<SampleGroup> &groups);

/// One M step, sequential block updates: S from the previous T, T from the
/// fresh S, Sigma from both fresh values; mu frozen at the global mean.
JointPldaModel jplda_mstep(const JointPldaModel &previous,
                           const std::vector<CellStats> &stats,
                           const Dataset &dataset,
                           const std::vector<SampleGroup> &groups,
                           const Vector &mu);

/// EM training.  The default init seeds S from the between-A-class scatter
/// and T from the between-B-class scatter (top eigenvectors scaled by sqrt
/// eigenvalues, ranks beyond the scatter padded with 0.1 x std random
/// entries).  The per-cell E step never sees which cells share a label, so
/// the label-aware init is what pins the S/T split to the intended views; a
/// random init would leave the split arbitrary.
std::pair<JointPldaModel, LLTrace> jplda_train(
    const Dataset &dataset, const JointPldaConfig &config,
    const std::optional<JointPldaModel> &init = std::nullopt);

/// Cell-factorized dataset log likelihood: product over cells of the
/// H_ij-sample stacked density under shared (u_i, v_j).
double loglik_dataset(const JointPldaModel &model, const Dataset &dataset);

/// Log density of [xt; xs] under the hypothesis that the pair shares the
/// latents named in `spec`: diagonal blocks SS^T + TT^T + Sigma, off-diagonal
/// block share_u * SS^T + share_v * TT^T, as implied by the generative model.
double pair_loglik(const JointPldaModel &model, const Vector &xt,
                   const Vector &xs, const ShareSpec &spec);

/// Joint-test log likelihood ratio: H0 (all shared) against the prior
/// mixture of M1/M2/M3, combined by log-sum-exp.
double jplda_llr(const JointPldaModel &model, const JointPriors &priors,
                 const Vector &xt, const Vector &xs);

/// Single-view test of u (view A) or v (view B): both hypotheses are
/// two-component mixtures over the unshared other-view latent.
double jplda_llr_view(const JointPldaModel &model, const ViewPriors &priors,
                      const Vector &xt, const Vector &xs, View view);

}  // namespace mvplda

#endif  // MVPLDA_JPLDA_H_
