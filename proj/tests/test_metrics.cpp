#include <gtest/gtest.h>

#include "genspace/error.hpp"
#include "genspace/metrics.hpp"
#include "genspace/synthgen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace genspace;
using testutil::grid;

namespace {

struct Fixture {
  std::vector<std::string> rows;
  std::size_t es, second, third;  // profile order: mario/loderunner (Lin, EC), boxoban (Contig, -), synthetic (Lin, Contig)
};

void check(const TileAlphabet& a, const std::vector<Bc>& profile, const std::vector<Fixture>& fixtures) {
  for (std::size_t k = 0; k < fixtures.size(); ++k) {
    const auto g = grid("f/" + std::to_string(k), "f", fixtures[k].rows);
    const std::size_t expected[] = {fixtures[k].es, fixtures[k].second, fixtures[k].third};
    for (std::size_t b = 0; b < profile.size(); ++b) {
      EXPECT_EQ(compute_bc(profile[b], g, a), static_cast<double>(expected[b]))
          << "fixture " << k << " " << to_string(profile[b]);
    }
  }
}

}  // namespace

TEST(Bc, MarioFixtures) {
  check(MarioMapping::simplified_alphabet(), game_profile("mario"),
        {{{"-----", "--E--", "XXXXX"}, 9, 4, 1},
         {{"-?-E-", "-PP--", "XX-XX"}, 7, 3, 1},
         {{"-----", "-----", "-----"}, 15, 0, 0},
         {{"EEEEE", "E-E-E", "PXPXP"}, 2, 4, 8},
         {{"X-X-X", "XXX--", "?????"}, 4, 2, 0}});
}

TEST(Bc, MarioPipesCanBeExcludedFromSolid) {
  const auto a = MarioMapping::simplified_alphabet();
  EXPECT_EQ(bc_linearity(grid("a", "s", {"-?-E-", "-PP--", "XX-XX"}), a, SolidRule{false}), 2u);
  EXPECT_EQ(bc_linearity(grid("b", "s", {"EEEEE", "E-E-E", "PXPXP"}), a, SolidRule{false}), 0u);
}

TEST(Bc, BoxobanFixtures) {
  check(boxoban_alphabet(), game_profile("boxoban"),
        {{{"###", "# #", "###"}, 1, 8, 0},
         {{"#####", "#@$.#", "#####"}, 0, 12, 0},
         {{"   ", " $ ", "   "}, 8, 0, 0},
         {{"## ", "#  ", "  ."}, 5, 2, 0},
         {{"# # #", " # # "}, 5, 0, 0}});
}

TEST(Bc, LodeRunnerFixtures) {
  check(loderunner_alphabet(), game_profile("loderunner"),
        {{{"..G..", "M.#.E", "BBbBB"}, 6, 4, 1},
         {{"-----", "E.#.E", "B.#.B"}, 4, 0, 2},
         {{".....", ".....", "....."}, 15, 0, 0},
         {{"EEE..", "BbB..", "..BBB"}, 6, 4, 3},
         {{"M..G.", "#BBB#", "#...#"}, 6, 2, 0}});
}

TEST(Bc, SyntheticFixtures) {
  check(synthetic_alphabet(), game_profile("synthetic"),
        {{{"##", "##"}, 0, 2, 4},
         {{"#.#", ".#.", "#.#"}, 4, 0, 0},
         {{"###", "...", "###"}, 3, 4, 4},
         {{"#..", "#..", "###"}, 4, 2, 4},
         {{"....", ".##.", ".##.", "...."}, 12, 2, 4}});
}

TEST(Bc, FuzzedLevelsMatchLoopsAndLinAtMostContig) {
  Rng rng(42);
  const auto a = MarioMapping::simplified_alphabet();
  for (int k = 0; k < 1000; ++k) {
    const int h = 1 + static_cast<int>(rng.below(12)), w = 1 + static_cast<int>(rng.below(12));
    LevelGrid g{"x", "s", h, w, ""};
    for (int c = 0; c < h * w; ++c) g.cells.push_back(a.symbols()[rng.below(a.size())]);
    const auto lin = bc_linearity(g, a), contig = bc_contiguity(g, a);
    EXPECT_LE(lin, contig);
    EXPECT_EQ(static_cast<long>(lin), oracle::linearity(g, a));
    EXPECT_EQ(static_cast<long>(contig), oracle::contiguity(g, a));
    EXPECT_EQ(static_cast<long>(bc_empty_space(g, a)), oracle::count_role(g, a, TileRole::empty));
    EXPECT_EQ(static_cast<long>(bc_enemy_count(g, a)), oracle::count_role(g, a, TileRole::enemy));
  }
}

TEST(Bc, EnemyCountNeedsEnemyRole) {
  try {
    bc_enemy_count(grid("a", "s", {"#."}), synthetic_alphabet());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

TEST(Bc, ProfilesAndNames) {
  EXPECT_EQ(game_profile("mario"), (std::vector<Bc>{Bc::empty_space, Bc::linearity, Bc::enemy_count}));
  EXPECT_EQ(game_profile("boxoban"), (std::vector<Bc>{Bc::empty_space, Bc::contiguity}));
  for (auto bc : {Bc::empty_space, Bc::linearity, Bc::enemy_count, Bc::contiguity}) {
    EXPECT_EQ(parse_bc(to_string(bc)), bc);
  }
  EXPECT_FALSE(parse_bc("Leniency"));
}

TEST(Bc, ProfileOverCorpusKeepsOrder) {
  const auto a = synthetic_alphabet();
  LevelCorpus corpus(a, {grid("s/b", "s", {"##", ".."}), grid("s/a", "s", {"..", ".."})});
  const auto v = bc_profile(corpus, game_profile("synthetic"));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].level_id, "s/b");
  EXPECT_EQ(v[0].get(Bc::linearity), 1.0);
  EXPECT_EQ(v[1].get(Bc::empty_space), 4.0);
  EXPECT_FALSE(v[1].get(Bc::enemy_count));
}
