// tests/test_jplda.cc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mvplda/jplda.h"
#include "mvplda/rng.h"
#include "mvplda/synth.h"
#include "oracles.h"

using namespace mvplda;

namespace {

constexpr double kLn2Pi = 1.8378770664093453;

JointPldaModel scalar_joint_model() {
  return JointPldaModel(Vector::Zero(1), FactorMatrix(Matrix::Ones(1, 1)),
                        FactorMatrix(Matrix::Ones(1, 1)),
                        DiagMatrix(Vector::Ones(1)));
}

Dataset one_cell_dataset(double x) {
  Dataset data;
  data.dim = 1;
  LabeledVector item;
  item.features = Vector::Constant(1, x);
  data.items.push_back(item);
  return data;
}

Dataset crossed_dataset(std::uint64_t seed, Index d, Index nu, Index nv,
                        int num_a, int num_b, int per_cell,
                        double noise = 1.0) {
  SynthConfig config;
  config.dim = d;
  config.nu = nu;
  config.nv = nv;
  config.num_a = num_a;
  config.num_b = num_b;
  config.samples_per_cell = per_cell;
  config.noise_scale = noise;
  config.seed = seed;
  return sample_dataset(make_truth(config), config);
}

}  // namespace

TEST_CASE("jplda_estep pinned cases") {
  SUBCASE("S = T = 0 gives the prior") {
    const JointPldaModel model(Vector::Zero(2), FactorMatrix::Zero(2, 1),
                               FactorMatrix::Zero(2, 1),
                               DiagMatrix(Vector::Ones(2)));
    Dataset data;
    data.dim = 2;
    LabeledVector item;
    item.features = Vector::Constant(2, 3.0);
    data.items.push_back(item);
    const auto groups = group_rows(data, GroupBy::kCell);
    const auto stats = jplda_estep(model, data, groups);
    CHECK(stats[0].z_mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK(stats[0].z_moment.dense().isApprox(Matrix::Identity(2, 2), 1e-15));
  }
  SUBCASE("single cell, x = 3: E[u] = E[v] = 1, pinned joint moment") {
    const Dataset data = one_cell_dataset(3.0);
    const auto groups = group_rows(data, GroupBy::kCell);
    const auto stats = jplda_estep(scalar_joint_model(), data, groups);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].u_mean()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(stats[0].v_mean()[0] == doctest::Approx(1.0).epsilon(1e-14));
    Matrix expected(2, 2);
    expected << 5.0 / 3, 2.0 / 3, 2.0 / 3, 5.0 / 3;
    CHECK((stats[0].z_moment.dense() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("partition blocks reassemble the joint moment exactly") {
    std::mt19937_64 gen(41);
    const Index d = 3, nu = 2, nv = 1;
    const JointPldaModel model(
        oracles::random_vector(gen, d),
        FactorMatrix(oracles::random_matrix(gen, d, nu)),
        FactorMatrix(oracles::random_matrix(gen, d, nv)),
        DiagMatrix(Vector::Ones(d)));
    Dataset data;
    data.dim = d;
    for (int k = 0; k < 3; ++k) {
      LabeledVector item;
      item.features = oracles::random_vector(gen, d);
      data.items.push_back(item);
    }
    const auto groups = group_rows(data, GroupBy::kCell);
    const auto stats = jplda_estep(model, data, groups);
    Matrix reassembled(nu + nv, nu + nv);
    reassembled.topLeftCorner(nu, nu) = stats[0].uu_moment();
    reassembled.topRightCorner(nu, nv) = stats[0].uv_moment();
    reassembled.bottomLeftCorner(nv, nu) = stats[0].uv_moment().transpose();
    reassembled.bottomRightCorner(nv, nv) = stats[0].vv_moment();
    CHECK(reassembled == stats[0].z_moment.dense());
    Vector mean(nu + nv);
    mean << stats[0].u_mean(), stats[0].v_mean();
    CHECK(mean == stats[0].z_mean);
  }
}

TEST_CASE("jplda_estep matches the conditional-Gaussian oracle") {
  std::mt19937_64 gen(42);
  for (int rep = 0; rep < 25; ++rep) {
    const Index d = 1 + static_cast<Index>(gen() % 3);
    const Index nu = static_cast<Index>(gen() % 3);
    const Index nv = static_cast<Index>(gen() % 3);
    if (nu + nv == 0) continue;
    const Matrix s = oracles::random_matrix(gen, d, nu);
    const Matrix t = oracles::random_matrix(gen, d, nv);
    const Vector sigma =
        oracles::random_vector(gen, d).cwiseAbs2() + Vector::Constant(d, 0.2);
    const Vector mu = oracles::random_vector(gen, d);
    const JointPldaModel model(mu, FactorMatrix(s), FactorMatrix(t),
                               DiagMatrix(sigma));

    Dataset data;
    data.dim = d;
    std::vector<Vector> xs;
    const int h = 1 + static_cast<int>(gen() % 4);
    for (int k = 0; k < h; ++k) {
      LabeledVector item;
      item.features = oracles::random_vector(gen, d, 1.5);
      xs.push_back(item.features);
      data.items.push_back(item);
    }
    const auto groups = group_rows(data, GroupBy::kCell);
    const auto stats = jplda_estep(model, data, groups);
    Matrix stacked(d, nu + nv);
    stacked.leftCols(nu) = s;
    stacked.rightCols(nv) = t;
    const auto oracle = oracles::conditional_posterior(
        stacked, model.sigma.entries(), mu, xs);
    CHECK((stats[0].z_mean - oracle.mean).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((stats[0].z_moment.dense() - oracle.moment).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("jplda_mstep pinned cases") {
  SUBCASE("scalar sequential update: S = 1.4, T = 1.24, Sigma = 1.08") {
    const Dataset data = one_cell_dataset(3.0);
    const auto groups = group_rows(data, GroupBy::kCell);
    const auto stats = jplda_estep(scalar_joint_model(), data, groups);
    const JointPldaModel next = jplda_mstep(scalar_joint_model(), stats, data,
                                            groups, Vector::Zero(1));
    CHECK(next.s.dense()(0, 0) == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(next.t.dense()(0, 0) == doctest::Approx(1.24).epsilon(1e-14));
    CHECK(next.sigma.entries()[0] == doctest::Approx(1.08).epsilon(1e-14));
  }
  SUBCASE("zero expectations give S = 0") {
    Dataset data = crossed_dataset(43, 3, 1, 1, 2, 2, 2);
    const auto groups = group_rows(data, GroupBy::kCell);
    const Vector mu = grouped_mean(data, groups);
    std::vector<CellStats> stats;
    for (const auto &g : groups)
      stats.push_back(CellStats{g.label_a, g.label_b,
                                static_cast<int>(g.rows.size()), 1, 1,
                                Vector::Zero(2), SymMatrix::Identity(2)});
    const JointPldaModel prev(
        mu, FactorMatrix(Matrix::Ones(3, 1)), FactorMatrix(Matrix::Ones(3, 1)),
        DiagMatrix(Vector::Ones(3)));
    const JointPldaModel next = jplda_mstep(prev, stats, data, groups, mu);
    CHECK(next.s.dense().cwiseAbs().maxCoeff() == 0.0);
    CHECK(next.t.dense().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("zero residuals floor the noise everywhere") {
    Dataset data;
    data.dim = 2;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        LabeledVector item;
        item.features = Vector::Zero(2);
        item.label_a = a;
        item.label_b = b;
        data.items.push_back(item);
      }
    const auto groups = group_rows(data, GroupBy::kCell);
    std::vector<CellStats> stats;
    for (const auto &g : groups)
      stats.push_back(CellStats{g.label_a, g.label_b, 1, 1, 1, Vector::Zero(2),
                                SymMatrix::Identity(2)});
    const JointPldaModel prev(Vector::Zero(2), FactorMatrix::Zero(2, 1),
                              FactorMatrix::Zero(2, 1),
                              DiagMatrix(Vector::Ones(2)));
    const JointPldaModel next =
        jplda_mstep(prev, stats, data, groups, Vector::Zero(2));
    CHECK(next.sigma.entries()[0] == kVarianceFloor);
    CHECK(next.sigma.entries()[1] == kVarianceFloor);
  }
}

TEST_CASE("jplda_train basics and monotonicity") {
  const Dataset data = crossed_dataset(44, 20, 2, 2, 12, 6, 4);
  SUBCASE("zero iterations returns the init unchanged") {
    JointPldaConfig config;
    config.iterations = 0;
    config.nu = 2;
    config.nv = 2;
    const auto [model, trace] = jplda_train(data, config);
    CHECK(trace.values.empty());
    CHECK(model.nu() == 2);
    const auto [replayed, replay_trace] = jplda_train(data, config, model);
    CHECK(replayed.s.dense() == model.s.dense());
    CHECK(replayed.t.dense() == model.t.dense());
    CHECK(replayed.sigma.entries() == model.sigma.entries());
  }
  SUBCASE("monotone trace, deterministic replay") {
    JointPldaConfig config;
    config.iterations = 10;
    config.nu = 2;
    config.nv = 2;
    config.seed = 3;
    const auto [m1, t1] = jplda_train(data, config);
    REQUIRE(t1.values.size() == 10);
    for (size_t i = 1; i < t1.values.size(); ++i)
      CHECK(t1.values[i] - t1.values[i - 1] >= -1e-9);
    const auto [m2, t2] = jplda_train(data, config);
    CHECK(m1.s.dense() == m2.s.dense());
    CHECK(m1.t.dense() == m2.t.dense());
    CHECK(t1.values == t2.values);
    // the trace is the public objective
    CHECK(t1.values.back() ==
          doctest::Approx(loglik_dataset(m1, data)).epsilon(1e-12));
  }
  SUBCASE("rejects single-label views") {
    const Dataset flat = crossed_dataset(45, 4, 1, 1, 3, 1, 3);
    JointPldaConfig config;
    config.nu = 1;
    config.nv = 1;
    CHECK_THROWS_AS(jplda_train(flat, config), EmptyDataset);
  }
  SUBCASE("rejects empty subspaces") {
    JointPldaConfig config;
    config.nu = 0;
    config.nv = 0;
    CHECK_THROWS_AS(jplda_train(data, config), DimensionMismatch);
  }
}

TEST_CASE("N_v = 0 training replays plda exactly under identical init") {
  const Dataset data = crossed_dataset(46, 6, 2, 0, 8, 3, 3, 0.7);
  // one explicit init shared by both trainers
  NormalSampler sampler(99, Stream::kInitS);
  const auto groups = group_rows(data, GroupBy::kCell);
  const Vector mu = grouped_mean(data, groups);
  const Vector variance = grouped_variance(data, groups, mu);
  Matrix b0 = sampler.matrix(6, 2);
  b0 = Vector(0.1 * variance.cwiseSqrt()).asDiagonal() * b0;

  const PldaModel plda_init(mu, FactorMatrix(b0), DiagMatrix(variance));
  const JointPldaModel jplda_init(mu, FactorMatrix(b0), FactorMatrix::Zero(6, 0),
                                  DiagMatrix(variance));
  PldaConfig pconfig;
  pconfig.iterations = 8;
  pconfig.subspace_dim = 2;
  JointPldaConfig jconfig;
  jconfig.iterations = 8;
  jconfig.nu = 2;
  jconfig.nv = 0;
  const auto [pm, pt] = plda_train(data, pconfig, plda_init);
  const auto [jm, jt] = jplda_train(data, jconfig, jplda_init);
  CHECK(pt.values == jt.values);  // bit-identical trajectories
  CHECK(pm.b.dense() == jm.s.dense());
  CHECK(pm.sigma.entries() == jm.sigma.entries());

  // degenerate likelihoods and scores
  std::mt19937_64 gen(47);
  const JointPriors reduction(1.0, 0.0, 0.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector xt = oracles::random_vector(gen, 6);
    const Vector xs = oracles::random_vector(gen, 6);
    const double pl = pair_loglik(jm, xt, xs, {true, false});
    const double pl2 = pair_loglik(jm, xt, xs, {true, true});
    CHECK(pl == doctest::Approx(pl2).epsilon(1e-15));  // share_v is inert
    CHECK(std::abs(jplda_llr(jm, reduction, xt, xs) -
                   plda_llr_naive(pm, xt, xs)) < 1e-10);
  }
}

TEST_CASE("loglik_dataset pinned cases") {
  SUBCASE("standard normal") {
    const JointPldaModel model(Vector::Zero(1), FactorMatrix::Zero(1, 1),
                               FactorMatrix::Zero(1, 1),
                               DiagMatrix(Vector::Ones(1)));
    CHECK(loglik_dataset(model, one_cell_dataset(0.0)) ==
          doctest::Approx(-0.5 * kLn2Pi).epsilon(1e-12));
  }
  SUBCASE("marginal variance 3") {
    CHECK(loglik_dataset(scalar_joint_model(), one_cell_dataset(0.0)) ==
          doctest::Approx(-0.5 * kLn2Pi - 0.5 * std::log(3.0))
              .epsilon(1e-12));
  }
  SUBCASE("two single-sample cells add up") {
    Dataset data;
    data.dim = 1;
    LabeledVector first;
    first.features = Vector::Constant(1, 0.7);
    first.label_a = 0;
    data.items.push_back(first);
    LabeledVector second;
    second.features = Vector::Constant(1, -0.4);
    second.label_a = 1;
    data.items.push_back(second);
    Dataset only_first;
    only_first.dim = 1;
    only_first.items.push_back(first);
    Dataset only_second;
    only_second.dim = 1;
    only_second.items.push_back(second);
    const JointPldaModel model = scalar_joint_model();
    CHECK(loglik_dataset(model, data) ==
          doctest::Approx(loglik_dataset(model, only_first) +
                          loglik_dataset(model, only_second))
              .epsilon(1e-14));
  }
}

TEST_CASE("pair_loglik pinned cases") {
  const Vector zero1 = Vector::Zero(1);
  SUBCASE("S = T = 0: all four hypotheses coincide") {
    const JointPldaModel model(Vector::Zero(2), FactorMatrix::Zero(2, 1),
                               FactorMatrix::Zero(2, 1),
                               DiagMatrix(Vector::Ones(2)));
    std::mt19937_64 gen(48);
    const Vector xt = oracles::random_vector(gen, 2);
    const Vector xs = oracles::random_vector(gen, 2);
    const double base = pair_loglik(model, xt, xs, {false, false});
    CHECK(pair_loglik(model, xt, xs, {true, true}) == base);
    CHECK(pair_loglik(model, xt, xs, {true, false}) == base);
    CHECK(pair_loglik(model, xt, xs, {false, true}) == base);
  }
  SUBCASE("share both: cov [[3,2],[2,3]]") {
    CHECK(pair_loglik(scalar_joint_model(), zero1, zero1, {true, true}) ==
          doctest::Approx(-kLn2Pi - 0.5 * std::log(5.0)).epsilon(1e-12));
  }
  SUBCASE("share u only: cov [[3,1],[1,3]]") {
    CHECK(pair_loglik(scalar_joint_model(), zero1, zero1, {true, false}) ==
          doctest::Approx(-kLn2Pi - 0.5 * std::log(8.0)).epsilon(1e-12));
  }
}

TEST_CASE("pair cross-covariance construction agrees with sampling, 3 SE") {
  // pairs sharing u only must converge to S S^T; sharing v only to T T^T
  const Index d = 3, nu = 2, nv = 2;
  std::mt19937_64 gen(49);
  const Matrix s = oracles::random_matrix(gen, d, nu);
  const Matrix t = oracles::random_matrix(gen, d, nv);
  const Vector sigma = Vector::Constant(d, 0.5);
  const int samples = 100000;

  const auto run = [&](bool share_u) {
    Matrix sum = Matrix::Zero(d, d);
    Matrix sumsq = Matrix::Zero(d, d);
    for (int rep = 0; rep < samples; ++rep) {
      const Vector shared = share_u ? Vector(s * oracles::random_vector(gen, nu))
                                    : Vector(t * oracles::random_vector(gen, nv));
      const Vector x1 = shared +
                        (share_u ? Vector(t * oracles::random_vector(gen, nv))
                                 : Vector(s * oracles::random_vector(gen, nu))) +
                        sigma.cwiseSqrt().cwiseProduct(
                            oracles::random_vector(gen, d));
      const Vector x2 = shared +
                        (share_u ? Vector(t * oracles::random_vector(gen, nv))
                                 : Vector(s * oracles::random_vector(gen, nu))) +
                        sigma.cwiseSqrt().cwiseProduct(
                            oracles::random_vector(gen, d));
      const Matrix prod = x1 * x2.transpose();
      sum += prod;
      sumsq += prod.cwiseAbs2();
    }
    const Matrix mean = sum / samples;
    const Matrix var = sumsq / samples - mean.cwiseAbs2();
    const Matrix se = (var / samples).cwiseSqrt();
    const Matrix expected = share_u ? s * s.transpose() : t * t.transpose();
    CHECK(((mean - expected).cwiseAbs().array() <= 3.0 * se.array() + 1e-12)
              .all());
  };
  run(true);
  run(false);
}

TEST_CASE("jplda_llr pinned cases") {
  const Vector zero1 = Vector::Zero(1);
  SUBCASE("S = T = 0 scores zero for any priors") {
    const JointPldaModel model(Vector::Zero(2), FactorMatrix::Zero(2, 1),
                               FactorMatrix::Zero(2, 1),
                               DiagMatrix(Vector::Ones(2)));
    std::mt19937_64 gen(50);
    for (const auto &priors :
         {JointPriors::Uniform(), JointPriors(0.2, 0.3, 0.5)}) {
      const Vector xt = oracles::random_vector(gen, 2);
      const Vector xs = oracles::random_vector(gen, 2);
      CHECK(jplda_llr(model, priors, xt, xs) ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  SUBCASE("independent-marginals denominator") {
    const double expected = std::log(3.0) - 0.5 * std::log(5.0);  // 0.29389
    CHECK(jplda_llr(scalar_joint_model(), JointPriors(0.0, 0.0, 1.0), zero1,
                    zero1) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("exactly symmetric") {
    std::mt19937_64 gen(51);
    const JointPldaModel model(
        oracles::random_vector(gen, 3),
        FactorMatrix(oracles::random_matrix(gen, 3, 2)),
        FactorMatrix(oracles::random_matrix(gen, 3, 1)),
        DiagMatrix(Vector::Ones(3)));
    for (int rep = 0; rep < 10; ++rep) {
      const Vector xt = oracles::random_vector(gen, 3);
      const Vector xs = oracles::random_vector(gen, 3);
      CHECK(jplda_llr(model, JointPriors::Uniform(), xt, xs) ==
            jplda_llr(model, JointPriors::Uniform(), xs, xt));
      CHECK(jplda_llr_view(model, ViewPriors::Uniform(), xt, xs, View::kA) ==
            jplda_llr_view(model, ViewPriors::Uniform(), xs, xt, View::kA));
    }
  }
  SUBCASE("concentrated priors reduce the denominator exactly") {
    std::mt19937_64 gen(52);
    const JointPldaModel model(
        oracles::random_vector(gen, 2),
        FactorMatrix(oracles::random_matrix(gen, 2, 1)),
        FactorMatrix(oracles::random_matrix(gen, 2, 1)),
        DiagMatrix(Vector::Ones(2)));
    const Vector xt = oracles::random_vector(gen, 2);
    const Vector xs = oracles::random_vector(gen, 2);
    const double same = pair_loglik(model, xt, xs, {true, true});
    CHECK(jplda_llr(model, JointPriors(1.0, 0.0, 0.0), xt, xs) ==
          same - pair_loglik(model, xt, xs, {false, true}));
    CHECK(jplda_llr(model, JointPriors(0.0, 1.0, 0.0), xt, xs) ==
          same - pair_loglik(model, xt, xs, {true, false}));
    CHECK(jplda_llr(model, JointPriors(0.0, 0.0, 1.0), xt, xs) ==
          same - pair_loglik(model, xt, xs, {false, false}));
  }
  SUBCASE("monotone evidence on the d=1 grid") {
    const JointPldaModel model = scalar_joint_model();
    double prev = -1e300;
    for (int step = 0; step <= 50; ++step) {
      const Vector c = Vector::Constant(1, 0.1 * step);
      const double score = jplda_llr(model, JointPriors::Uniform(), c, c);
      CHECK(score >= prev - 1e-12);
      prev = score;
    }
  }
}

TEST_CASE("jplda_llr_view pinned cases") {
  const Vector zero1 = Vector::Zero(1);
  SUBCASE("empty speaker subspace makes the test uninformative") {
    const JointPldaModel model(Vector::Zero(2), FactorMatrix::Zero(2, 1),
                               FactorMatrix(Matrix::Ones(2, 1)),
                               DiagMatrix(Vector::Ones(2)));
    std::mt19937_64 gen(53);
    const Vector xt = oracles::random_vector(gen, 2);
    const Vector xs = oracles::random_vector(gen, 2);
    CHECK(jplda_llr_view(model, ViewPriors::Uniform(), xt, xs, View::kA) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("concentrated priors: log(8/5)/2") {
    CHECK(jplda_llr_view(scalar_joint_model(), ViewPriors(1.0, 0.0, 1.0, 0.0),
                         zero1, zero1, View::kA) ==
          doctest::Approx(0.5 * std::log(8.0 / 5.0)).epsilon(1e-12));
  }
  SUBCASE("view B equals view A of the swapped model") {
    std::mt19937_64 gen(54);
    const Matrix s = oracles::random_matrix(gen, 3, 2);
    const Matrix t = oracles::random_matrix(gen, 3, 1);
    const Vector mu = oracles::random_vector(gen, 3);
    const JointPldaModel model(mu, FactorMatrix(s), FactorMatrix(t),
                               DiagMatrix(Vector::Ones(3)));
    const JointPldaModel swapped(mu, FactorMatrix(t), FactorMatrix(s),
                                 DiagMatrix(Vector::Ones(3)));
    const ViewPriors priors(0.7, 0.3, 0.4, 0.6);
    for (int rep = 0; rep < 10; ++rep) {
      const Vector xt = oracles::random_vector(gen, 3);
      const Vector xs = oracles::random_vector(gen, 3);
      CHECK(jplda_llr_view(model, priors, xt, xs, View::kB) ==
            doctest::Approx(jplda_llr_view(swapped, priors, xt, xs, View::kA))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("prior validation") {
  CHECK_THROWS_AS(JointPriors(0.5, 0.5, 0.5), InvalidPriors);
  CHECK_THROWS_AS(JointPriors(-0.1, 0.6, 0.5), InvalidPriors);
  CHECK_THROWS_AS(ViewPriors(0.6, 0.6, 0.5, 0.5), InvalidPriors);
  CHECK_NOTHROW(JointPriors(1.0 / 3, 1.0 / 3, 1.0 / 3));
  CHECK_NOTHROW(ViewPriors(1.0, 0.0, 0.25, 0.75));
}
