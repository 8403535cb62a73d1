#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "genspace/error.hpp"
#include "genspace/report.hpp"
#include "genspace/synthgen.hpp"
#include "test_util.hpp"

using namespace genspace;

namespace {

Projection sample_projection() {
  Projection p;
  p.coords.resize(5, 2);
  p.coords << 0, 0, 1, 0, 10, 10, 0.5, 0.1, -4, 3;
  p.row_ids = {"a/0", "a/1", "b/2", "b/3", "c/4"};
  p.set_labels = {"a", "a", "b", "b", "c"};
  return p;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(ExtremePairs, BruteForce) {
  const auto e = find_extreme_pairs(sample_projection());
  // (0,3) is 0.51 apart; (2,4) is hypot(14,7)
  EXPECT_EQ(e.closest.first, 0u);
  EXPECT_EQ(e.closest.second, 3u);
  EXPECT_EQ(e.farthest.first, 2u);
  EXPECT_EQ(e.farthest.second, 4u);
  EXPECT_EQ(e.farthest.second_id, "c/4");
  EXPECT_DOUBLE_EQ(e.farthest.distance, std::hypot(14.0, 7.0));
}

TEST(ExtremePairs, TiesKeepCanonicalFirst) {
  Projection p;
  p.coords.resize(4, 2);
  p.coords << 0, 0, 1, 0, 2, 0, 3, 0;
  p.row_ids = {"0", "1", "2", "3"};
  const auto e = find_extreme_pairs(p);
  EXPECT_EQ(e.closest.first, 0u);
  EXPECT_EQ(e.closest.second, 1u);
}

TEST(Scatter, OneMarkerPerLevelAndLegendPerSet) {
  const auto spec = make_plot_spec(sample_projection(), "demo", "unused.svg");
  const auto svg = scatter_svg(spec);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "class=\"marker\""), 5u);
  EXPECT_EQ(count(svg, "class=\"legend-entry\""), 3u);
  EXPECT_EQ(count(svg, "data-set=\"b\""), 2u);
  EXPECT_EQ(count(svg, "class=\"extreme closest\""), 1u);
  EXPECT_EQ(count(svg, "class=\"extreme farthest\""), 1u);
  EXPECT_NE(svg.find("component 1"), std::string::npos);
  EXPECT_NE(svg.find("component 2"), std::string::npos);
  EXPECT_EQ(spec.set_palette.at("a"), default_set_colors()[0]);
  EXPECT_EQ(spec.set_palette.at("c"), default_set_colors()[2]);
}

TEST(Scatter, DeterministicAndOptionalCallouts) {
  const auto a = scatter_svg(make_plot_spec(sample_projection(), "t", "x.svg"));
  EXPECT_EQ(a, scatter_svg(make_plot_spec(sample_projection(), "t", "x.svg")));
  const auto plain = scatter_svg(make_plot_spec(sample_projection(), "t", "x.svg", false));
  EXPECT_EQ(count(plain, "class=\"extreme"), 0u);
}

TEST(Scatter, EscapesTitle) {
  const auto svg = scatter_svg(make_plot_spec(sample_projection(), "a<b & c", "x.svg"));
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
}

TEST(Tilemap, RectsRoundTripToRoles) {
  const auto a = MarioMapping::simplified_alphabet();
  const auto level = testutil::grid("m/0", "m", {"--E-?", "-PP-X", "XXXXX"});
  const auto palette = default_role_palette();
  const auto svg = tilemap_svg(level, a, palette);
  std::map<std::string, TileRole> by_color;
  for (const auto& [role, color] : palette) by_color.emplace(color, role);
  const std::regex rect(R"re(<rect class="tile" x="(\d+)" y="(\d+)" width="(\d+)" height="\d+" fill="([^"]+)")re");
  int cells = 0;
  for (std::sregex_iterator it(svg.begin(), svg.end(), rect), end; it != end; ++it) {
    const int size = std::stoi((*it)[3]);
    const int c = std::stoi((*it)[1]) / size, r = std::stoi((*it)[2]) / size;
    EXPECT_EQ(by_color.at((*it)[4]), a.role_of(level.at(r, c))) << r << "," << c;
    ++cells;
  }
  EXPECT_EQ(cells, 15);
}

TEST(Tilemap, MissingColorIsDataError) {
  RolePalette palette{{TileRole::empty, "#fff"}};
  try {
    tilemap_svg(testutil::grid("s/0", "s", {".#"}), synthetic_alphabet(), palette);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

TEST(Render, WritesFileCreatingDirectories) {
  const auto dir = testutil::scratch("render");
  const auto path = dir / "nested" / "plot.svg";
  render_scatter(make_plot_spec(sample_projection(), "t", path));
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), scatter_svg(make_plot_spec(sample_projection(), "t", path)));
}
