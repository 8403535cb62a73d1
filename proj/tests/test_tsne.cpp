#include <gtest/gtest.h>

#include <cmath>

#include "genspace/dimred.hpp"
#include "genspace/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace genspace;

namespace {

double entropy_bits(const Eigen::MatrixXd& p, Eigen::Index i) {
  double h = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    if (p(i, j) > 0) h -= p(i, j) * std::log2(p(i, j));
  return h;
}

Eigen::MatrixXd clusters(Rng& rng, int per, int dims, double sep) {
  Eigen::MatrixXd x(3 * per, dims);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < per; ++i)
      for (int d = 0; d < dims; ++d) x(c * per + i, d) = rng.normal() + (d == c ? sep : 0.0);
  return x;
}

}  // namespace

TEST(Tsne, SquaredDistancesMatchDirect) {
  Rng rng(1);
  const auto x = oracle::random_matrix(rng, 12, 5);
  const auto d2 = squared_distances(x);
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(d2(i, i), 0.0);
    for (int j = 0; j < 12; ++j) {
      EXPECT_NEAR(d2(i, j), (x.row(i) - x.row(j)).squaredNorm(), 1e-10);
      EXPECT_EQ(d2(i, j), d2(j, i));
    }
  }
}

TEST(Tsne, CalibratedEntropyMatchesPerplexity) {
  Rng rng(2);
  const auto x = oracle::random_matrix(rng, 80, 10);
  const auto d2 = squared_distances(x);
  for (double perp : {5.0, 15.0, 25.0}) {
    const auto cal = calibrate_perplexity(d2, perp);
    const auto ref = oracle::row_entropy_bits(d2, perp);
    for (Eigen::Index i = 0; i < 80; ++i) {
      EXPECT_NEAR(entropy_bits(cal.conditional, i), std::log2(perp), 1e-3);
      EXPECT_NEAR(cal.entropy_bits(i), ref[static_cast<std::size_t>(i)], 1e-3);
      EXPECT_NEAR(cal.conditional.row(i).sum(), 1.0, 1e-12);
      EXPECT_EQ(cal.conditional(i, i), 0.0);
    }
  }
}

TEST(Tsne, JointAffinitiesSymmetricAndNormalized) {
  Rng rng(3);
  const auto x = oracle::random_matrix(rng, 40, 6);
  const auto p = joint_affinities(calibrate_perplexity(squared_distances(x), 10.0).conditional);
  EXPECT_NEAR(p.sum(), 1.0, 1e-9);
  EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-18);
  for (int i = 0; i < 40; ++i) EXPECT_EQ(p(i, i), 0.0);
  EXPECT_GE(p.minCoeff(), 0.0);
}

TEST(Tsne, KlDecreasesAfterExaggeration) {
  Rng rng(4);
  const auto x = clusters(rng, 34, 10, 6.0).topRows(100);
  TsneConfig cfg;
  cfg.perplexity = 20;
  TsneTrace trace;
  fit_tsne(testutil::dense(x), cfg, &trace);
  EXPECT_LE(trace.final_kl, trace.kl_after_exaggeration);
  EXPECT_FALSE(trace.kl.empty());
  EXPECT_EQ(trace.kl.back().first, cfg.iterations);
}

TEST(Tsne, SeparatedClustersStaySeparated) {
  Rng rng(5);
  const auto x = clusters(rng, 30, 50, 10.0);
  TsneConfig cfg;
  cfg.seed = 17;
  const auto p = fit_tsne(testutil::dense(x), cfg);
  int pure = 0;
  for (int i = 0; i < 90; ++i) {
    int best = -1;
    double bd = 1e300;
    for (int j = 0; j < 90; ++j) {
      if (j == i) continue;
      const double d = (p.coords.row(i) - p.coords.row(j)).squaredNorm();
      if (d < bd) bd = d, best = j;
    }
    pure += best / 30 == i / 30;
  }
  EXPECT_GE(pure / 90.0, 0.9);
}

TEST(Tsne, SameSeedIsBitIdentical) {
  Rng rng(6);
  const auto x = oracle::random_matrix(rng, 40, 8);
  TsneConfig cfg;
  cfg.perplexity = 10;
  cfg.iterations = 300;
  cfg.seed = 99;
  const auto a = fit_tsne(testutil::dense(x), cfg);
  const auto b = fit_tsne(testutil::dense(x), cfg);
  EXPECT_TRUE(a.coords == b.coords);
  cfg.seed = 100;
  const auto c = fit_tsne(testutil::dense(x), cfg);
  EXPECT_FALSE(a.coords == c.coords);
  EXPECT_EQ(a.seed, 99u);
  EXPECT_FALSE(a.explained);
}

TEST(Tsne, PerplexityClampedForSmallInputs) {
  Rng rng(7);
  const auto x = oracle::random_matrix(rng, 31, 4);
  EXPECT_EQ(max_perplexity(31), 10.0);
  TsneConfig cfg;
  cfg.iterations = 100;
  cfg.exaggeration_iters = 50;
  cfg.momentum_switch_iter = 50;
  // default perplexity 30 exceeds (n−1)/3; still runs
  const auto p = fit_tsne(testutil::dense(x), cfg);
  EXPECT_TRUE(p.coords.allFinite());
}

TEST(Tsne, ConfigValidation) {
  TsneConfig cfg;
  cfg.perplexity = 0;
  EXPECT_THROW(validate(cfg), Error);
  cfg = {};
  cfg.iterations = 0;
  EXPECT_THROW(validate(cfg), Error);
  cfg = {};
  cfg.learning_rate = -1;
  EXPECT_THROW(validate(cfg), Error);
  EXPECT_NO_THROW(validate(TsneConfig{}));
}

TEST(Tsne, TooFewPointsIsDataError) {
  Rng rng(8);
  try {
    fit_tsne(testutil::dense(oracle::random_matrix(rng, 5, 3)), TsneConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}
