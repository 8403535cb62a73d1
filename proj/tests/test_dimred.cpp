#include <gtest/gtest.h>

#include "genspace/dimred.hpp"
#include "genspace/error.hpp"
#include "genspace/spectral.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace genspace;

TEST(Pca, MatchesCovarianceEigenOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = 10 + static_cast<Eigen::Index>(rng.below(41));
    const auto d = 4 + static_cast<Eigen::Index>(rng.below(61));
    const auto x = oracle::random_matrix(rng, n, d);
    const auto p = fit_pca(testutil::dense(x));
    EXPECT_LT(oracle::max_diff_up_to_sign(oracle::pca_scores(x), p.coords), 1e-8) << n << "x" << d;
  }
}

TEST(Pca, ExplainedIsCovarianceEigenvalue) {
  Rng rng(3);
  const auto x = oracle::random_matrix(rng, 30, 6);
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const auto e = oracle::jacobi_eigen(c.transpose() * c / 29.0);
  const auto p = fit_pca(testutil::dense(x));
  ASSERT_TRUE(p.explained);
  EXPECT_NEAR((*p.explained)[0], e.values(0), 1e-10);
  EXPECT_NEAR((*p.explained)[1], e.values(1), 1e-10);
}

TEST(Pca, SignConventionLargestLoadingPositive) {
  Rng rng(5);
  const auto x = oracle::random_matrix(rng, 20, 7);
  const auto t = leading_singular_triplets(x, 2);
  for (int k = 0; k < 2; ++k) {
    Eigen::Index arg = 0;
    t.loadings.col(k).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(t.loadings(arg, k), 0.0);
  }
}

TEST(Pca, IdenticalRowsAreRankDeficient) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(5, 4);
  try {
    fit_pca(testutil::dense(x));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
  }
}

TEST(Pca, TooFewRowsIsDataError) {
  Eigen::MatrixXd x(2, 3);
  x << 1, 2, 3, 4, 5, 7;
  try {
    fit_pca(testutil::dense(x));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

TEST(Svd, RankTwoReconstructionErrorIsDiscardedEnergy) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_matrix(rng, 12 + trial, 5 + 3 * trial);
    const auto t = leading_singular_triplets(x, 2);
    const Eigen::MatrixXd approx = t.scores * t.loadings.transpose();
    const auto ref = oracle::jacobi_svd(x);
    double discarded = 0.0;
    for (Eigen::Index k = 2; k < ref.sigma.size(); ++k) discarded += ref.sigma(k) * ref.sigma(k);
    EXPECT_NEAR((x - approx).squaredNorm(), discarded, 1e-8 * std::max(1.0, discarded));
    EXPECT_NEAR(t.values(0), ref.sigma(0), 1e-9);
    EXPECT_NEAR(t.values(1), ref.sigma(1), 1e-9);
  }
}

TEST(Svd, MatchesJacobiOracleScores) {
  Rng rng(9);
  const auto x = oracle::random_matrix(rng, 25, 40);
  const auto ref = oracle::jacobi_svd(x);
  Eigen::MatrixXd scores(25, 2);
  for (int k = 0; k < 2; ++k) scores.col(k) = ref.u.col(k) * ref.sigma(k);
  EXPECT_LT(oracle::max_diff_up_to_sign(scores, fit_svd(testutil::dense(x)).coords), 1e-8);
}

TEST(Svd, CenteredInputEqualsPca) {
  Rng rng(10);
  const auto x = oracle::random_matrix(rng, 30, 9);
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const auto svd = fit_svd(testutil::dense(centered));
  const auto pca = fit_pca(testutil::dense(x));
  EXPECT_LT((svd.coords - pca.coords).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Svd, TallAndWideAgree) {
  Rng rng(12);
  const auto x = oracle::random_matrix(rng, 8, 30);
  const auto wide = leading_singular_triplets(x, 2);
  const auto tall = leading_singular_triplets(x.transpose(), 2);
  EXPECT_NEAR(wide.values(0), tall.values(0), 1e-10);
  EXPECT_NEAR(wide.values(1), tall.values(1), 1e-10);
  EXPECT_NEAR(wide.total_energy, x.squaredNorm(), 1e-9);
}

namespace {

std::vector<std::vector<int>> table_of(const DesignMatrix& m) {
  std::vector<std::vector<int>> t(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t[static_cast<std::size_t>(i)].push_back(static_cast<int>(m.values(i, j)));
  return t;
}

}  // namespace

TEST(Mca, MatchesExplicitCaOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int types = 2 + static_cast<int>(rng.below(3));
    const auto corpus = testutil::random_corpus(rng, 12 + rng.below(20), 3, 4, testutil::alphabet_of(types));
    const auto m = encode_categorical(corpus);
    const auto ref = oracle::correspondence(table_of(m), types);
    const auto p = fit_mca(m);
    EXPECT_LT(oracle::max_diff_up_to_sign(ref.coords, p.coords), 1e-8);
    ASSERT_TRUE(p.explained);
    EXPECT_NEAR((*p.explained)[0], ref.sigma(0) * ref.sigma(0) / ref.inertia, 1e-10);
  }
}

TEST(Mca, MassesSumToOne) {
  Rng rng(22);
  const auto corpus = testutil::random_corpus(rng, 15, 4, 4, testutil::alphabet_of(3));
  const auto tables = correspondence_tables(encode_categorical(corpus));
  EXPECT_NEAR(tables.row_masses.sum(), 1.0, 1e-12);
  EXPECT_NEAR(tables.col_masses.sum(), 1.0, 1e-12);
}

TEST(Mca, UnusedCategoriesAreDropped) {
  // symbol 'a' never occurs; cell (0,0) is always '.'
  const auto a = testutil::alphabet_of(3);
  std::vector<LevelGrid> levels;
  const char* rows[] = {".#", ".."};
  for (int k = 0; k < 4; ++k) {
    auto g = testutil::grid(fmt::format("s/{}", k), "s", {k % 2 ? ".#" : "..", rows[k / 2]});
    levels.push_back(g);
  }
  const auto tables = correspondence_tables(encode_categorical(LevelCorpus(a, levels)));
  for (const auto& c : tables.categories) EXPECT_NE(c.tile_type, 2);
  EXPECT_EQ(tables.residuals.cols(), static_cast<Eigen::Index>(tables.categories.size()));
  // constant variable contributes nothing
  for (Eigen::Index c = 0; c < tables.residuals.cols(); ++c) {
    if (tables.categories[static_cast<std::size_t>(c)].row == 0 && tables.categories[static_cast<std::size_t>(c)].col == 0) {
      EXPECT_EQ(tables.residuals.col(c).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(Mca, RejectsOnehotInput) {
  Rng rng(1);
  const auto corpus = testutil::random_corpus(rng, 6, 2, 2, testutil::alphabet_of(2));
  EXPECT_THROW(fit_mca(encode_onehot(corpus)), Error);
}

TEST(Dimred, ParseAlgorithmNames) {
  EXPECT_EQ(parse_algorithm("pca"), Algorithm::pca);
  EXPECT_EQ(parse_algorithm("t-SNE"), Algorithm::tsne);
  EXPECT_EQ(parse_algorithm("Mca"), Algorithm::mca);
  EXPECT_FALSE(parse_algorithm("umap"));
  for (auto a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(to_string(a)), a);
}
