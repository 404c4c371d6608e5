// mvplda/posterior.cc

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

#include "posterior.h"

#include <string>

namespace mvplda::detail {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_dims(const FactorMatrix &b, const DiagMatrix &sigma,
                const Vector &mu, const Dataset &dataset) {
  if (b.rows() != dataset.dim || sigma.dim() != dataset.dim ||
      mu.size() != dataset.dim)
    throw DimensionMismatch("model dim vs dataset dim " +
                            std::to_string(dataset.dim));
}

}  // namespace

std::vector<GroupPosterior> latent_posteriors(
    const FactorMatrix &b, const DiagMatrix &sigma, const Vector &mu,
    const Dataset &dataset, const std::vector<SampleGroup> &groups) {
  check_dims(b, sigma, mu, dataset);
  const Index latent = b.cols();
  const Vector isig = sigma.inverse_entries();
  const Matrix bt_isig = b.dense().transpose() * isig.asDiagonal();
  Matrix g0 = bt_isig * b.dense();
  g0 = 0.5 * (g0 + g0.transpose());

  std::vector<GroupPosterior> out;
  out.reserve(groups.size());
  for (const auto &g : groups) {
    if (g.rows.empty()) throw EmptyDataset("group with no rows");
    Vector centered_sum = Vector::Zero(dataset.dim);
    for (int r : g.rows) centered_sum += dataset.items[r].features - mu;

    GroupPosterior p;
    p.label_a = g.label_a;
    p.label_b = g.label_b;
    p.count = static_cast<int>(g.rows.size());
    if (latent == 0) {
      p.mean = Vector(0);
      p.moment = Matrix(0, 0);
      out.push_back(std::move(p));
      continue;
    }
    Matrix gram = static_cast<double>(p.count) * g0;
    gram.diagonal().array() += 1.0;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefinite("posterior precision of group (" +
                                std::to_string(g.label_a) + "," +
                                std::to_string(g.label_b) + ")");
    const Vector rhs = bt_isig * centered_sum;
    p.mean = llt.solve(rhs);
    Matrix cov = llt.solve(Matrix::Identity(latent, latent));
    cov = 0.5 * (cov + cov.transpose());
    p.moment = cov + p.mean * p.mean.transpose();
    out.push_back(std::move(p));
  }
  return out;
}

double grouped_loglik(const FactorMatrix &b, const DiagMatrix &sigma,
                      const Vector &mu, const Dataset &dataset,
                      const std::vector<SampleGroup> &groups) {
  check_dims(b, sigma, mu, dataset);
  const Index d = dataset.dim;
  const Index latent = b.cols();
  const Vector isig = sigma.inverse_entries();
  const double log_det_sigma = sigma.entries().array().log().sum();
  const Matrix bt_isig = b.dense().transpose() * isig.asDiagonal();
  Matrix g0 = bt_isig * b.dense();
  g0 = 0.5 * (g0 + g0.transpose());

  double total = 0.0;
  for (const auto &g : groups) {
    const double count = static_cast<double>(g.rows.size());
    Vector centered_sum = Vector::Zero(d);
    double residual_quad = 0.0;
    for (int r : g.rows) {
      const Vector centered = dataset.items[r].features - mu;
      centered_sum += centered;
      residual_quad += centered.cwiseAbs2().dot(isig);
    }
    double correction = 0.0;
    if (latent > 0) {
      Matrix gram = count * g0;
      gram.diagonal().array() += 1.0;
      Eigen::LLT<Matrix> llt(gram);
      if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("stacked covariance of group (" +
                                  std::to_string(g.label_a) + "," +
                                  std::to_string(g.label_b) + ")");
      const Matrix lower = llt.matrixL();
      const double logdet_g = 2.0 * lower.diagonal().array().log().sum();
      const Vector rhs = bt_isig * centered_sum;
      correction = -0.5 * logdet_g + 0.5 * rhs.dot(llt.solve(rhs));
    }
    total += -0.5 * count * static_cast<double>(d) * kLog2Pi -
             0.5 * count * log_det_sigma - 0.5 * residual_quad + correction;
  }
  return total;
}

}  // namespace mvplda::detail
