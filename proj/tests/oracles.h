// tests/oracles.h
//
// Brute-force oracles kept independent of the library's computation paths:
// densities go through eigendecompositions (never Cholesky), posteriors
// through explicit joint-Gaussian conditioning, EERs through a quadratic
// midpoint sweep.

#ifndef MVPLDA_TESTS_ORACLES_H_
#define MVPLDA_TESTS_ORACLES_H_

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <vector>

namespace oracles {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double dense_gauss_logpdf(const VectorXd &x, const VectorXd &mu,
                                 const MatrixXd &cov) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
  const VectorXd evals = eig.eigenvalues();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) logdet += std::log(evals[i]);
  const VectorXd w = eig.eigenvectors().transpose() * (x - mu);
  const double quad = (w.array().square() / evals.array()).sum();
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + logdet + quad);
}

// Log density of [xt; xs] under mean [mu; mu] and blocks [[D, O], [O, D]],
// assembled explicitly.
inline double stacked_pair_logpdf(const VectorXd &xt, const VectorXd &xs,
                                  const VectorXd &mu, const MatrixXd &diag,
                                  const MatrixXd &off) {
  const Eigen::Index d = mu.size();
  MatrixXd cov(2 * d, 2 * d);
  cov.topLeftCorner(d, d) = diag;
  cov.bottomRightCorner(d, d) = diag;
  cov.topRightCorner(d, d) = off;
  cov.bottomLeftCorner(d, d) = off;
  VectorXd x(2 * d), m(2 * d);
  x << xt, xs;
  m << mu, mu;
  return dense_gauss_logpdf(x, m, cov);
}

// Posterior mean and second moment of the tied latent z for a group of
// samples x_k = mu + B z + eps, eps ~ N(0, diag(sigma)), z ~ N(0, I):
// condition the explicit joint Gaussian of (x_1..x_H, z).
struct PosteriorOracle {
  VectorXd mean;
  MatrixXd moment;
};

inline PosteriorOracle conditional_posterior(const MatrixXd &b,
                                             const VectorXd &sigma,
                                             const VectorXd &mu,
                                             const std::vector<VectorXd> &xs) {
  const Eigen::Index d = b.rows();
  const Eigen::Index n = b.cols();
  const Eigen::Index h = static_cast<Eigen::Index>(xs.size());
  // Cov([x; z]) = [[ 1_H 1_H^T (x) B B^T + I_H (x) Sigma, 1_H (x) B ],
  //               [ 1_H^T (x) B^T,                        I          ]]
  MatrixXd cov_xx(h * d, h * d);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < h; ++j) {
      MatrixXd block = b * b.transpose();
      if (i == j) block += MatrixXd(sigma.asDiagonal());
      cov_xx.block(i * d, j * d, d, d) = block;
    }
  MatrixXd cov_xz(h * d, n);
  for (Eigen::Index i = 0; i < h; ++i) cov_xz.block(i * d, 0, d, n) = b;
  VectorXd centered(h * d);
  for (Eigen::Index i = 0; i < h; ++i) centered.segment(i * d, d) = xs[i] - mu;

  const MatrixXd gain = cov_xx.ldlt().solve(cov_xz).transpose();  // n x hd
  PosteriorOracle out;
  out.mean = gain * centered;
  const MatrixXd cov_post = MatrixXd::Identity(n, n) - gain * cov_xz;
  out.moment = cov_post + out.mean * out.mean.transpose();
  return out;
}

// Quadratic-cost EER sweep over all midpoints plus sentinels, with the same
// interpolation convention as the product: acceptance is score >= threshold,
// the crossing of FAR - FRR is interpolated linearly.
struct EerOracle {
  double eer = 0.0;
  double threshold = 0.0;
};

inline EerOracle brute_force_eer(
    const std::vector<std::pair<double, bool>> &scores) {
  std::vector<double> all;
  for (const auto &[s, t] : scores) all.push_back(s);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> thresholds;
  thresholds.push_back(all.front());
  for (size_t i = 0; i + 1 < all.size(); ++i)
    thresholds.push_back(0.5 * (all[i] + all[i + 1]));
  thresholds.push_back(all.back() + 1.0);
  std::sort(thresholds.begin(), thresholds.end());

  double nt = 0, nn = 0;
  for (const auto &[s, t] : scores) (t ? nt : nn) += 1.0;
  double prev_far = 1.0, prev_frr = 0.0, prev_t = thresholds.front();
  for (double t : thresholds) {
    double far = 0, frr = 0;
    for (const auto &[s, is_target] : scores) {
      if (is_target && s < t) frr += 1.0;
      if (!is_target && s >= t) far += 1.0;
    }
    far /= nn;
    frr /= nt;
    const double prev_gap = prev_far - prev_frr;
    const double gap = far - frr;
    if (prev_gap >= 0.0 && gap < 0.0) {
      const double alpha = prev_gap / (prev_gap - gap);
      return {prev_far + alpha * (far - prev_far),
              prev_t + alpha * (t - prev_t)};
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  return {prev_far, prev_t};
}

// Deterministic test-data helpers.
inline VectorXd random_vector(std::mt19937_64 &gen, Eigen::Index n,
                              double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal(gen);
  return v;
}

inline MatrixXd random_matrix(std::mt19937_64 &gen, Eigen::Index r,
                              Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = scale * normal(gen);
  return m;
}

inline MatrixXd random_spd(std::mt19937_64 &gen, Eigen::Index n) {
  const MatrixXd a = random_matrix(gen, n, n + 2);
  MatrixXd m = a * a.transpose() / static_cast<double>(n + 2);
  m.diagonal().array() += 0.5;
  return 0.5 * (m + m.transpose());
}

inline MatrixXd random_orthogonal(std::mt19937_64 &gen, Eigen::Index n) {
  const Eigen::HouseholderQR<MatrixXd> qr(random_matrix(gen, n, n));
  return qr.householderQ();
}

}  // namespace oracles

#endif  // MVPLDA_TESTS_ORACLES_H_
