#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "genspace/corpus.hpp"
#include "genspace/dimred.hpp"

namespace genspace {

struct LevelPair {
  std::size_t first = 0;
  std::size_t second = 0;
  std::string first_id;
  std::string second_id;
  double distance = 0.0;
};

struct ExtremePairs {
  LevelPair closest;
  LevelPair farthest;
};

/// Global closest and farthest pair in the projected plane. Ties keep the pair
/// that comes first in canonical (i < j) order.
ExtremePairs find_extreme_pairs(const Projection& p);

/// Nine colourblind-safe colours, cycled when there are more sets.
const std::vector<std::string>& default_set_colors();

struct PlotSpec {
  Projection projection;
  std::map<std::string, std::string> set_palette;
  bool annotate_extremes = true;
  std::string title;
  std::filesystem::path output;
};

/// Spec with every set label (sorted) assigned a colour from the default cycle.
PlotSpec make_plot_spec(Projection projection, std::string title, std::filesystem::path output,
                        bool annotate_extremes = true);

/// Self-contained SVG scatter: one marker per level coloured by set, a legend,
/// labelled axes and optional closest/farthest callouts.
std::string scatter_svg(const PlotSpec& spec);
void render_scatter(const PlotSpec& spec);

using RolePalette = std::map<TileRole, std::string>;

RolePalette default_role_palette();

/// One rect per tile, coloured by the tile's role.
std::string tilemap_svg(const LevelGrid& level, const TileAlphabet& alphabet, const RolePalette& palette);
void render_level_tilemap(const LevelGrid& level, const TileAlphabet& alphabet, const RolePalette& palette,
                          const std::filesystem::path& output);

/// Writes `content` to `path`, creating parent directories. Throws a data
/// error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace genspace
