#include <gtest/gtest.h>

#include <sstream>

#include "genspace/encode.hpp"
#include "genspace/error.hpp"
#include "test_util.hpp"

using namespace genspace;

TEST(Encode, CategoricalHoldsTypeIndices) {
  const auto a = testutil::alphabet_of(3);
  const LevelCorpus c(a, {testutil::grid("s/0", "s", {".#", "a."})});
  const auto m = encode_categorical(c);
  EXPECT_EQ(m.kind, EncodingKind::categorical);
  ASSERT_EQ(m.cols(), 4);
  EXPECT_EQ(m.values(0, 0), 0.0);
  EXPECT_EQ(m.values(0, 1), 1.0);
  EXPECT_EQ(m.values(0, 2), 2.0);
  EXPECT_EQ(m.column_meta[2], (ColumnOrigin{1, 0, -1}));
}

TEST(Encode, OnehotLayoutAndIndicatorProperty) {
  Rng rng(1);
  const auto a = testutil::alphabet_of(4);
  const auto c = testutil::random_corpus(rng, 20, 3, 5, a);
  const auto m = encode_onehot(c);
  ASSERT_EQ(m.cols(), 3 * 5 * 4);
  EXPECT_EQ(m.n_types, 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    EXPECT_EQ(m.values.row(i).sum(), 15.0);
    for (int cell = 0; cell < 15; ++cell) {
      const int t = a.index_of(c.levels()[static_cast<std::size_t>(i)].cells[static_cast<std::size_t>(cell)]);
      EXPECT_EQ(m.values(i, cell * 4 + t), 1.0);
      EXPECT_EQ(m.values.row(i).segment(cell * 4, 4).sum(), 1.0);
    }
  }
  EXPECT_EQ(m.column_meta[4 * 6 + 3], (ColumnOrigin{1, 1, 3}));
}

TEST(Encode, DecodeInvertsBothEncodings) {
  Rng rng(2);
  const auto a = testutil::alphabet_of(5);
  const auto c = testutil::random_corpus(rng, 12, 4, 3, a, 2);
  EXPECT_EQ(decode(encode_onehot(c), a), c.levels());
  EXPECT_EQ(decode(encode_categorical(c), a), c.levels());
}

TEST(Encode, EmptyCorpusIsDataError) {
  try {
    encode_onehot(LevelCorpus{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

TEST(Encode, CsvDumpHeader) {
  const auto a = testutil::alphabet_of(2);
  const LevelCorpus c(a, {testutil::grid("s/0", "s", {".#"})});
  std::ostringstream cat, hot;
  write_design_matrix(cat, encode_categorical(c));
  write_design_matrix(hot, encode_onehot(c));
  EXPECT_EQ(cat.str(), "level_id,set_label,r0c0,r0c1\ns/0,s,0,1\n");
  EXPECT_EQ(hot.str(), "level_id,set_label,r0c0t0,r0c0t1,r0c1t0,r0c1t1\ns/0,s,1,0,0,1\n");
}
