// mvplda/plda.cc

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

#include "mvplda/plda.h"

#include <string>

#include "mvplda/rng.h"
#include "posterior.h"

namespace mvplda {

PldaModel::PldaModel(Vector mu_in, FactorMatrix b_in, DiagMatrix sigma_in)
    : mu(std::move(mu_in)), b(std::move(b_in)), sigma(std::move(sigma_in)) {
  if (b.rows() != mu.size() || sigma.dim() != mu.size())
    throw DimensionMismatch("PldaModel blocks disagree on feature dim");
  if (b.cols() < 1)
    throw DimensionMismatch("PldaModel needs subspace dim >= 1");
  if (!mu.allFinite()) throw DimensionMismatch("PldaModel mu must be finite");
}

std::vector<ClassStats> plda_estep(const PldaModel &model,
                                   const Dataset &dataset,
                                   const std::vector<SampleGroup> &groups) {
  auto posteriors =
      detail::latent_posteriors(model.b, model.sigma, model.mu, dataset, groups);
  std::vector<ClassStats> out;
  out.reserve(posteriors.size());
  for (auto &p : posteriors)
    out.push_back(ClassStats{p.label_a, p.label_b, p.count, std::move(p.mean),
                             SymMatrix(std::move(p.moment))});
  return out;
}

PldaModel plda_mstep(const std::vector<ClassStats> &stats,
                     const Dataset &dataset,
                     const std::vector<SampleGroup> &groups, const Vector &mu) {
  if (stats.size() != groups.size())
    throw DimensionMismatch("stats do not cover the grouped classes");
  const Index d = dataset.dim;
  const Index latent = stats.front().z_mean.size();

  Matrix first = Matrix::Zero(d, latent);   // sum (x - mu) E[z]^T
  Matrix second = Matrix::Zero(latent, latent);  // sum H E[z z^T]
  double n = 0.0;
  std::vector<Vector> centered_sums;
  centered_sums.reserve(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    const auto &stat = stats[g];
    const auto &group = groups[g];
    if (stat.label_a != group.label_a || stat.label_b != group.label_b ||
        stat.count != static_cast<int>(group.rows.size()))
      throw DimensionMismatch("stats misaligned with class grouping");
    Vector centered_sum = Vector::Zero(d);
    for (int r : group.rows) centered_sum += dataset.items[r].features - mu;
    first += centered_sum * stat.z_mean.transpose();
    second += static_cast<double>(stat.count) * stat.z_moment.dense();
    n += static_cast<double>(stat.count);
    centered_sums.push_back(std::move(centered_sum));
  }

  Eigen::LLT<Matrix> llt(second);
  if (llt.info() != Eigen::Success)
    throw SingularAccumulator("sum of second moments, dim " +
                              std::to_string(latent));
  const Matrix b_new = llt.solve(first.transpose()).transpose();

  Vector sigma_new = Vector::Zero(d);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int r : groups[g].rows)
      sigma_new += (dataset.items[r].features - mu).cwiseAbs2();
    sigma_new -= centered_sums[g].cwiseProduct(b_new * stats[g].z_mean);
  }
  sigma_new /= n;
  return PldaModel(mu, FactorMatrix(b_new), DiagMatrix(sigma_new));
}

std::pair<PldaModel, LLTrace> plda_train(const Dataset &dataset,
                                         const PldaConfig &config,
                                         const std::optional<PldaModel> &init) {
  if (dataset.items.empty()) throw EmptyDataset("plda_train");
  if (config.iterations < 0 || config.subspace_dim < 1)
    throw DimensionMismatch("plda config wants iterations >= 0, subspace >= 1");
  const auto groups = group_rows(dataset, GroupBy::kCell);
  if (groups.size() < 2) throw EmptyDataset("plda_train needs >= 2 classes");
  const Vector mu = grouped_mean(dataset, groups);
  const Vector variance = grouped_variance(dataset, groups, mu);

  PldaModel model = [&]() {
    if (init) {
      if (init->dim() != dataset.dim)
        throw DimensionMismatch("initial model dim vs dataset");
      return *init;
    }
    NormalSampler sampler(config.seed, Stream::kInitS);
    const Vector scale = 0.1 * variance.cwiseSqrt();
    Matrix b0 = sampler.matrix(dataset.dim, config.subspace_dim);
    b0 = scale.asDiagonal() * b0;
    return PldaModel(mu, FactorMatrix(std::move(b0)), DiagMatrix(variance));
  }();

  LLTrace trace;
  trace.values.reserve(static_cast<size_t>(config.iterations));
  for (int it = 0; it < config.iterations; ++it) {
    const auto stats = plda_estep(model, dataset, groups);
    model = plda_mstep(stats, dataset, groups, model.mu);
    trace.values.push_back(
        detail::grouped_loglik(model.b, model.sigma, model.mu, dataset, groups));
  }
  return {std::move(model), std::move(trace)};
}

double plda_llr_naive(const PldaModel &model, const Vector &xt,
                      const Vector &xs) {
  const SymMatrix between = model.b.gram();
  const SymMatrix total(between.dense() +
                        Matrix(model.sigma.entries().asDiagonal()));
  const double joint = pair_gauss_logpdf(xt, xs, model.mu, total, between);
  const double marginals = gauss_logpdf(xt, model.mu, total) +
                           gauss_logpdf(xs, model.mu, total);
  return joint - marginals;
}

FastScorer plda_scorer_precompute(const PldaModel &model) {
  const Matrix &b = model.b.dense();
  const Vector isig = model.sigma.inverse_entries();

  const SymMatrix sigma1_inv = lowrank_inverse(model.sigma, model.b);

  // X = I - B^T Sigma1^{-1} B; then Sigma1 - Sigma2 Sigma1^{-1} Sigma2 =
  // Sigma + (B chol(X)) (B chol(X))^T, one more Woodbury pass.
  Matrix x = -b.transpose() * sigma1_inv.dense() * b;
  x = 0.5 * (x + x.transpose());
  x.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt_x(x);
  if (llt_x.info() != Eigen::Success)
    throw NotPositiveDefinite("scorer inner matrix X");
  const FactorMatrix bc(b * Matrix(llt_x.matrixL()));
  const SymMatrix y = lowrank_inverse(model.sigma, bc);

  Matrix p = sigma1_inv.dense() * (b * (b.transpose() * y.dense()));
  p = 0.5 * (p + p.transpose());

  // constant = 1/2 log|Sigma1| - 1/2 log|Sigma1 - Sigma2 Sigma1^{-1} Sigma2|;
  // the |Sigma| parts cancel, leaving the two Woodbury inner determinants.
  Matrix inner1 = b.transpose() * isig.asDiagonal() * b;
  inner1 = 0.5 * (inner1 + inner1.transpose());
  inner1.diagonal().array() += 1.0;
  Matrix inner2 = bc.dense().transpose() * isig.asDiagonal() * bc.dense();
  inner2 = 0.5 * (inner2 + inner2.transpose());
  inner2.diagonal().array() += 1.0;
  const double constant = 0.5 * (chol_logdet(SymMatrix(inner1)).logdet -
                                 chol_logdet(SymMatrix(inner2)).logdet);

  return FastScorer{SymMatrix(sigma1_inv.dense() - y.dense()), SymMatrix(p),
                    constant, model.mu};
}

double plda_llr_fast(const FastScorer &scorer, const Vector &xt,
                     const Vector &xs) {
  if (xt.size() != scorer.mu.size() || xs.size() != scorer.mu.size())
    throw DimensionMismatch("plda_llr_fast operand dims");
  // Sum/difference evaluation of the symmetric quadratic form; swapping xt
  // and xs negates `dif` only, so the score is bit-identical under the swap.
  const Vector sum = (xt - scorer.mu) + (xs - scorer.mu);
  const Vector dif = (xt - scorer.mu) - (xs - scorer.mu);
  const Matrix qp_sum = scorer.q.dense() + scorer.p.dense();
  const Matrix qp_dif = scorer.q.dense() - scorer.p.dense();
  return 0.25 * (sum.dot(qp_sum * sum) + dif.dot(qp_dif * dif)) +
         scorer.constant;
}

}  // namespace mvplda
