// mvplda/gaussmath.cc

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

#include "mvplda/gaussmath.h"

#include <cmath>
#include <string>

namespace mvplda {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

SymMatrix::SymMatrix(Matrix m) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw DimensionMismatch("SymMatrix wants a square matrix of dim > 0, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  if (!m.allFinite())
    throw DimensionMismatch("SymMatrix entries must be finite");
  const double scale = m.cwiseAbs().maxCoeff();
  const double skew = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (skew > kSymmetryTol * std::max(scale, 1.0))
    throw DimensionMismatch("matrix is not symmetric (relative skew " +
                            std::to_string(skew / std::max(scale, 1.0)) + ")");
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Identity(Index dim) {
  return SymMatrix(Matrix::Identity(dim, dim));
}

SymMatrix SymMatrix::Zero(Index dim) { return SymMatrix(Matrix::Zero(dim, dim)); }

DiagMatrix::DiagMatrix(Vector entries) {
  if (entries.size() == 0)
    throw DimensionMismatch("DiagMatrix wants dim > 0");
  if (!entries.allFinite())
    throw DimensionMismatch("DiagMatrix entries must be finite");
  entries_ = entries.cwiseMax(kVarianceFloor);
}

DiagMatrix DiagMatrix::Constant(Index dim, double value) {
  return DiagMatrix(Vector::Constant(dim, value));
}

FactorMatrix::FactorMatrix(Matrix m) {
  if (m.rows() == 0)
    throw DimensionMismatch("FactorMatrix wants rows > 0");
  if (!m.allFinite())
    throw DimensionMismatch("FactorMatrix entries must be finite");
  mat_ = std::move(m);
}

FactorMatrix FactorMatrix::Zero(Index rows, Index cols) {
  return FactorMatrix(Matrix::Zero(rows, cols));
}

SymMatrix FactorMatrix::gram() const {
  Matrix g = Matrix::Zero(mat_.rows(), mat_.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(mat_);
  g.triangularView<Eigen::StrictlyUpper>() =
      g.transpose().triangularView<Eigen::StrictlyUpper>();
  return SymMatrix(std::move(g));
}

double CholeskyFactor::inverse_quadratic(const Vector &x) const {
  Vector y = lower.triangularView<Eigen::Lower>().solve(x);
  return y.squaredNorm();
}

CholeskyFactor chol_logdet(const SymMatrix &m) {
  Eigen::LLT<Matrix> llt(m.dense());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("Cholesky pivot failure at dim " +
                              std::to_string(m.dim()));
  CholeskyFactor out;
  out.lower = llt.matrixL();
  out.logdet = 2.0 * out.lower.diagonal().array().log().sum();
  return out;
}

SymMatrix lowrank_inverse(const DiagMatrix &sigma, const FactorMatrix &b) {
  if (sigma.dim() != b.rows())
    throw DimensionMismatch("lowrank_inverse: sigma dim " +
                            std::to_string(sigma.dim()) + " vs factor rows " +
                            std::to_string(b.rows()));
  const Vector isig = sigma.inverse_entries();
  if (b.cols() == 0) return SymMatrix(Matrix(isig.asDiagonal()));

  // W = B^T Sigma^{-1}; inner = I + W B is the only matrix factorized.
  const Matrix w = b.dense().transpose() * isig.asDiagonal();
  Matrix inner = w * b.dense();
  inner = 0.5 * (inner + inner.transpose());
  inner.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(inner);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("Woodbury inner system, rank " +
                              std::to_string(b.cols()));
  const Matrix v = Matrix(llt.matrixL()).triangularView<Eigen::Lower>().solve(w);
  Matrix out = -v.transpose() * v;
  out += Matrix(isig.asDiagonal());
  return SymMatrix(0.5 * (out + out.transpose()));
}

double gauss_logpdf(const Vector &x, const Vector &mu, const SymMatrix &cov) {
  if (x.size() != mu.size() || x.size() != cov.dim())
    throw DimensionMismatch("gauss_logpdf operand dims disagree");
  const CholeskyFactor chol = chol_logdet(cov);
  const double quad = chol.inverse_quadratic(x - mu);
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + chol.logdet + quad);
}

double pair_gauss_logpdf(const Vector &xt, const Vector &xs, const Vector &mu,
                         const SymMatrix &diag_block,
                         const SymMatrix &off_block) {
  const Index d = mu.size();
  if (xt.size() != d || xs.size() != d || diag_block.dim() != d ||
      off_block.dim() != d)
    throw DimensionMismatch("pair_gauss_logpdf operand dims disagree");

  // [[D,O],[O,D]] is SPD iff both D+O and D-O are, and the orthogonal
  // sum/difference transform block diagonalizes it into exactly those.
  const SymMatrix sum_block(diag_block.dense() + off_block.dense());
  const SymMatrix dif_block(diag_block.dense() - off_block.dense());
  const CholeskyFactor chol_sum = chol_logdet(sum_block);
  const CholeskyFactor chol_dif = chol_logdet(dif_block);

  const Vector a = xt - mu;
  const Vector b = xs - mu;
  const double quad = chol_sum.inverse_quadratic(a + b) +
                      chol_dif.inverse_quadratic(a - b);
  return -static_cast<double>(d) * kLog2Pi -
         0.5 * (chol_sum.logdet + chol_dif.logdet) - 0.25 * quad;
}

double log_sum_exp_weighted(std::span<const std::pair<double, double>> terms) {
  double max_ll = -std::numeric_limits<double>::infinity();
  for (const auto &[weight, ll] : terms) {
    if (weight < 0.0) throw InvalidPriors("negative mixture weight");
    if (weight > 0.0 && ll > max_ll) max_ll = ll;
  }
  if (!std::isfinite(max_ll))
    throw InvalidPriors("mixture has no positive-weight component");
  double acc = 0.0;
  for (const auto &[weight, ll] : terms)
    if (weight > 0.0) acc += weight * std::exp(ll - max_ll);
  return max_ll + std::log(acc);
}

}  // namespace mvplda
