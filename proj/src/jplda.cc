// mvplda/jplda.cc

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

#include "mvplda/jplda.h"

#include <array>
#include <string>

#include "mvplda/rng.h"
#include "posterior.h"

namespace mvplda {

namespace {

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Between-class scatter init for one view: eigenvectors of the scatter of
// class means about mu, scaled by sqrt eigenvalues.  Directions beyond the
// scatter rank fall back to random 0.1 x std columns.
FactorMatrix scatter_factor(const Dataset &dataset, GroupBy key, Index cols,
                            const Vector &mu, const Vector &variance,
                            std::uint64_t seed, Stream stream) {
  const Index d = dataset.dim;
  if (cols == 0) return FactorMatrix::Zero(d, 0);
  const auto groups = group_rows(dataset, key);
  Matrix scatter = Matrix::Zero(d, d);
  for (const auto &g : groups) {
    Vector mean = Vector::Zero(d);
    for (int r : g.rows) mean += dataset.items[r].features;
    mean = mean / static_cast<double>(g.rows.size()) - mu;
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(mean);
  }
  scatter /= static_cast<double>(groups.size());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(scatter);
  if (eig.info() != Eigen::Success)
    throw NotPositiveDefinite("between-class scatter eigensolve");

  NormalSampler sampler(seed, stream);
  const Vector pad_scale = 0.1 * variance.cwiseSqrt();
  Matrix factor(d, cols);
  const Index rank_limit = static_cast<Index>(groups.size());
  const double lambda_floor =
      1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  for (Index k = 0; k < cols; ++k) {
    const Index idx = d - 1 - k;  // eigenvalues ascend in Eigen
    const double lambda = idx >= 0 ? eig.eigenvalues()[idx] : 0.0;
    if (k < rank_limit && lambda > lambda_floor) {
      factor.col(k) = eig.eigenvectors().col(idx) * std::sqrt(lambda);
    } else {
      factor.col(k) = pad_scale.cwiseProduct(sampler.vector(d));
    }
  }
  return FactorMatrix(std::move(factor));
}

}  // namespace

JointPldaModel::JointPldaModel(Vector mu_in, FactorMatrix s_in,
                               FactorMatrix t_in, DiagMatrix sigma_in)
    : mu(std::move(mu_in)),
      s(std::move(s_in)),
      t(std::move(t_in)),
      sigma(std::move(sigma_in)) {
  if (s.rows() != mu.size() || t.rows() != mu.size() ||
      sigma.dim() != mu.size())
    throw DimensionMismatch("JointPldaModel blocks disagree on feature dim");
  if (!mu.allFinite())
    throw DimensionMismatch("JointPldaModel mu must be finite");
}

FactorMatrix JointPldaModel::stacked_factor() const {
  Matrix b(dim(), nu() + nv());
  b.leftCols(nu()) = s.dense();
  b.rightCols(nv()) = t.dense();
  return FactorMatrix(std::move(b));
}

JointPriors::JointPriors(double p1_in, double p2_in, double p3_in)
    : p1(p1_in), p2(p2_in), p3(p3_in) {
  if (!valid_probability(p1) || !valid_probability(p2) ||
      !valid_probability(p3))
    throw InvalidPriors("joint-test priors must lie in [0,1]");
  if (std::abs(p1 + p2 + p3 - 1.0) > 1e-12)
    throw InvalidPriors("joint-test priors must sum to 1");
}

ViewPriors::ViewPriors(double p0_in, double p1_in, double p2_in, double p3_in)
    : p0(p0_in), p1(p1_in), p2(p2_in), p3(p3_in) {
  if (!valid_probability(p0) || !valid_probability(p1) ||
      !valid_probability(p2) || !valid_probability(p3))
    throw InvalidPriors("view-test priors must lie in [0,1]");
  if (std::abs(p0 + p1 - 1.0) > 1e-12 || std::abs(p2 + p3 - 1.0) > 1e-12)
    throw InvalidPriors("view-test prior pairs must each sum to 1");
}

std::vector<CellStats> jplda_estep(const JointPldaModel &model,
                                   const Dataset &dataset,
                                   const std::vector<SampleGroup> &groups) {
  auto posteriors = detail::latent_posteriors(model.stacked_factor(),
                                              model.sigma, model.mu, dataset,
                                              groups);
  std::vector<CellStats> out;
  out.reserve(posteriors.size());
  for (auto &p : posteriors)
    out.push_back(CellStats{p.label_a, p.label_b, p.count, model.nu(),
                            model.nv(), std::move(p.mean),
                            SymMatrix(std::move(p.moment))});
  return out;
}

JointPldaModel jplda_mstep(const JointPldaModel &previous,
                           const std::vector<CellStats> &stats,
                           const Dataset &dataset,
                           const std::vector<SampleGroup> &groups,
                           const Vector &mu) {
  if (stats.size() != groups.size())
    throw DimensionMismatch("stats do not cover the grouped cells");
  const Index d = dataset.dim;
  const Index nu = previous.nu();
  const Index nv = previous.nv();

  Matrix first_u = Matrix::Zero(d, nu);   // sum (x - mu) E[u]^T
  Matrix first_v = Matrix::Zero(d, nv);   // sum (x - mu) E[v]^T
  Matrix moment_uu = Matrix::Zero(nu, nu);
  Matrix moment_vv = Matrix::Zero(nv, nv);
  Matrix moment_uv = Matrix::Zero(nu, nv);
  double n = 0.0;
  std::vector<Vector> centered_sums;
  centered_sums.reserve(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    const auto &stat = stats[g];
    const auto &group = groups[g];
    if (stat.label_a != group.label_a || stat.label_b != group.label_b ||
        stat.count != static_cast<int>(group.rows.size()) || stat.nu != nu ||
        stat.nv != nv)
      throw DimensionMismatch("stats misaligned with cell grouping");
    Vector centered_sum = Vector::Zero(d);
    for (int r : group.rows) centered_sum += dataset.items[r].features - mu;
    const double count = static_cast<double>(stat.count);
    first_u += centered_sum * stat.u_mean().transpose();
    first_v += centered_sum * stat.v_mean().transpose();
    moment_uu += count * stat.uu_moment();
    moment_vv += count * stat.vv_moment();
    moment_uv += count * stat.uv_moment();
    n += count;
    centered_sums.push_back(std::move(centered_sum));
  }

  // S against the previous T, then T against the fresh S.  The paper's two
  // formulas are mutually circular; this is the resolved order.
  Matrix s_new = Matrix::Zero(d, nu);
  if (nu > 0) {
    Eigen::LLT<Matrix> llt(moment_uu);
    if (llt.info() != Eigen::Success)
      throw SingularAccumulator("sum of E[u u^T]");
    const Matrix rhs = first_u - previous.t.dense() * moment_uv.transpose();
    s_new = llt.solve(rhs.transpose()).transpose();
  }
  Matrix t_new = Matrix::Zero(d, nv);
  if (nv > 0) {
    Eigen::LLT<Matrix> llt(moment_vv);
    if (llt.info() != Eigen::Success)
      throw SingularAccumulator("sum of E[v v^T]");
    const Matrix rhs = first_v - s_new * moment_uv;
    t_new = llt.solve(rhs.transpose()).transpose();
  }

  Vector sigma_new = Vector::Zero(d);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int r : groups[g].rows)
      sigma_new += (dataset.items[r].features - mu).cwiseAbs2();
    sigma_new -= centered_sums[g].cwiseProduct(s_new * stats[g].u_mean() +
                                               t_new * stats[g].v_mean());
  }
  sigma_new /= n;
  return JointPldaModel(mu, FactorMatrix(std::move(s_new)),
                        FactorMatrix(std::move(t_new)),
                        DiagMatrix(std::move(sigma_new)));
}

std::pair<JointPldaModel, LLTrace> jplda_train(
    const Dataset &dataset, const JointPldaConfig &config,
    const std::optional<JointPldaModel> &init) {
  if (dataset.items.empty()) throw EmptyDataset("jplda_train");
  if (config.iterations < 0 || config.nu < 0 || config.nv < 0 ||
      config.nu + config.nv < 1)
    throw DimensionMismatch(
        "jplda config wants iterations >= 0 and N_u + N_v >= 1");
  const auto groups = group_rows(dataset, GroupBy::kCell);
  if (dataset.num_labels_a() < 2 || dataset.num_labels_b() < 2)
    throw EmptyDataset("jplda_train needs >= 2 labels in each view");
  const Vector mu = grouped_mean(dataset, groups);
  const Vector variance = grouped_variance(dataset, groups, mu);

  JointPldaModel model = [&]() {
    if (init) {
      if (init->dim() != dataset.dim)
        throw DimensionMismatch("initial model dim vs dataset");
      return *init;
    }
    return JointPldaModel(
        mu,
        scatter_factor(dataset, GroupBy::kLabelA, config.nu, mu, variance,
                       config.seed, Stream::kInitS),
        scatter_factor(dataset, GroupBy::kLabelB, config.nv, mu, variance,
                       config.seed, Stream::kInitT),
        DiagMatrix(variance));
  }();

  LLTrace trace;
  trace.values.reserve(static_cast<size_t>(config.iterations));
  for (int it = 0; it < config.iterations; ++it) {
    const auto stats = jplda_estep(model, dataset, groups);
    model = jplda_mstep(model, stats, dataset, groups, model.mu);
    trace.values.push_back(detail::grouped_loglik(
        model.stacked_factor(), model.sigma, model.mu, dataset, groups));
  }
  return {std::move(model), std::move(trace)};
}

double loglik_dataset(const JointPldaModel &model, const Dataset &dataset) {
  const auto groups = group_rows(dataset, GroupBy::kCell);
  return detail::grouped_loglik(model.stacked_factor(), model.sigma, model.mu,
                                dataset, groups);
}

double pair_loglik(const JointPldaModel &model, const Vector &xt,
                   const Vector &xs, const ShareSpec &spec) {
  const SymMatrix s_gram = model.s.gram();
  const SymMatrix t_gram = model.t.gram();
  const SymMatrix total(s_gram.dense() + t_gram.dense() +
                        Matrix(model.sigma.entries().asDiagonal()));
  Matrix off = Matrix::Zero(model.dim(), model.dim());
  if (spec.share_u) off += s_gram.dense();
  if (spec.share_v) off += t_gram.dense();
  return pair_gauss_logpdf(xt, xs, model.mu, total, SymMatrix(std::move(off)));
}

double jplda_llr(const JointPldaModel &model, const JointPriors &priors,
                 const Vector &xt, const Vector &xs) {
  const double same = pair_loglik(model, xt, xs, {true, true});
  const std::array<std::pair<double, double>, 3> mixture = {{
      {priors.p1, pair_loglik(model, xt, xs, {false, true})},
      {priors.p2, pair_loglik(model, xt, xs, {true, false})},
      {priors.p3, pair_loglik(model, xt, xs, {false, false})},
  }};
  return same - log_sum_exp_weighted(mixture);
}

double jplda_llr_view(const JointPldaModel &model, const ViewPriors &priors,
                      const Vector &xt, const Vector &xs, View view) {
  const bool testing_u = view == View::kA;
  const auto with_shares = [&](bool tested_shared, bool other_shared) {
    const bool share_u = testing_u ? tested_shared : other_shared;
    const bool share_v = testing_u ? other_shared : tested_shared;
    return pair_loglik(model, xt, xs, {share_u, share_v});
  };
  const std::array<std::pair<double, double>, 2> numerator = {{
      {priors.p0, with_shares(true, true)},
      {priors.p1, with_shares(true, false)},
  }};
  const std::array<std::pair<double, double>, 2> denominator = {{
      {priors.p2, with_shares(false, true)},
      {priors.p3, with_shares(false, false)},
  }};
  return log_sum_exp_weighted(numerator) - log_sum_exp_weighted(denominator);
}

}  // namespace mvplda
