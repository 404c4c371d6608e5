// mvplda/gaussmath.h

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

#ifndef MVPLDA_GAUSSMATH_H_
#define MVPLDA_GAUSSMATH_H_

#include <span>
#include <utility>

#include "mvplda/common.h"

namespace mvplda {

/// Dense symmetric matrix.  Construction rejects input whose asymmetry
/// exceeds kSymmetryTol (relative) and stores the symmetrized half-sum, so
/// downstream block algebra sees exactly symmetric data.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m);
  static SymMatrix Identity(Index dim);
  static SymMatrix Zero(Index dim);

  Index dim() const { return mat_.rows(); }
  const Matrix &dense() const { return mat_; }

 private:
  Matrix mat_;
};

/// Diagonal covariance.  Entries are clamped to kVarianceFloor on
/// construction; the floor is the only defense the E-step has against a
/// collapsed noise model, so it is not optional.
class DiagMatrix {
 public:
  explicit DiagMatrix(Vector entries);
  static DiagMatrix Constant(Index dim, double value);

  Index dim() const { return entries_.size(); }
  const Vector &entries() const { return entries_; }
  Vector inverse_entries() const { return entries_.cwiseInverse(); }

 private:
  Vector entries_;
};

/// Rectangular factor loading matrix (B, S or T).  Zero columns are legal;
/// a zero-column factor is how a model degenerates to fewer latent views.
class FactorMatrix {
 public:
  explicit FactorMatrix(Matrix m);
  static FactorMatrix Zero(Index rows, Index cols);

  Index rows() const { return mat_.rows(); }
  Index cols() const { return mat_.cols(); }
  const Matrix &dense() const { return mat_; }

  /// This factor's low-rank Gram product, as an exactly symmetric matrix.
  SymMatrix gram() const;

 private:
  Matrix mat_;
};

/// Cholesky factorization of an SPD matrix together with its log
/// determinant.  One factorization serves both density normalization and
/// quadratic-form solves.
struct CholeskyFactor {
  Matrix lower;
  double logdet = 0.0;

  /// x^T A^{-1} x through two triangular solves.
  double inverse_quadratic(const Vector &x) const;
};

/// Factorizes an SPD matrix; throws NotPositiveDefinite if any pivot fails.
CholeskyFactor chol_logdet(const SymMatrix &m);

/// (Sigma + B B^T)^{-1} by the Woodbury identity: only the cols(B) x cols(B)
/// inner system is ever factorized.
SymMatrix lowrank_inverse(const DiagMatrix &sigma, const FactorMatrix &b);

/// Log density of x under N(mu, cov).
double gauss_logpdf(const Vector &x, const Vector &mu, const SymMatrix &cov);

/// Log density of the stacked vector [xt; xs] under a 2d-dimensional
/// Gaussian with mean [mu; mu] and a block covariance whose diagonal blocks
/// are `diag_block` and off-diagonal blocks `off_block`.
///
/// Evaluated through the orthogonal sum/difference transform, which block
/// diagonalizes the covariance into diag_block +/- off_block.  Swapping xt
/// and xs negates the difference coordinate only, so the returned value is
/// bit-identical under the swap.
double pair_gauss_logpdf(const Vector &xt, const Vector &xs, const Vector &mu,
                         const SymMatrix &diag_block,
                         const SymMatrix &off_block);

/// log(sum_i w_i * exp(l_i)) over entries with w_i > 0, reduced around the
/// running maximum.  Mixture densities underflow for d beyond ~100 if
/// combined in the raw domain, hence this is the only mixture combiner used.
double log_sum_exp_weighted(std::span<const std::pair<double, double>> terms);

}  // namespace mvplda

#endif  // MVPLDA_GAUSSMATH_H_
