#include "genspace/report.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "genspace/error.hpp"

namespace genspace {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 200.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 60.0;
constexpr double kTile = 12.0;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  [[nodiscard]] double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

Axis fit_axis(const Eigen::MatrixX2d& coords, int c, double px_lo, double px_hi) {
  Axis a{coords.col(c).minCoeff(), coords.col(c).maxCoeff(), px_lo, px_hi};
  const double span = a.hi - a.lo;
  const double pad = span > 0.0 ? 0.05 * span : 1.0;
  a.lo -= pad;
  a.hi += pad;
  return a;
}

}  // namespace

ExtremePairs find_extreme_pairs(const Projection& p) {
  const std::size_t n = p.size();
  if (n < 2) throw_data("extreme pairs need at least 2 levels");
  ExtremePairs e;
  double best_lo = std::numeric_limits<double>::infinity();
  double best_hi = -1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double d = std::hypot(p.coords(ii, 0) - p.coords(jj, 0), p.coords(ii, 1) - p.coords(jj, 1));
      if (d < best_lo) {
        best_lo = d;
        e.closest = {i, j, p.row_ids[i], p.row_ids[j], d};
      }
      if (d > best_hi) {
        best_hi = d;
        e.farthest = {i, j, p.row_ids[i], p.row_ids[j], d};
      }
    }
  }
  return e;
}

const std::vector<std::string>& default_set_colors() {
  static const std::vector<std::string> colors{"#CC6677", "#332288", "#DDCC77", "#117733", "#88CCEE",
                                               "#882255", "#44AA99", "#999933", "#AA4499"};
  return colors;
}

PlotSpec make_plot_spec(Projection projection, std::string title, std::filesystem::path output,
                        bool annotate_extremes) {
  PlotSpec spec;
  std::set<std::string> labels(projection.set_labels.begin(), projection.set_labels.end());
  const auto& colors = default_set_colors();
  std::size_t k = 0;
  for (const auto& l : labels) spec.set_palette[l] = colors[k++ % colors.size()];
  spec.projection = std::move(projection);
  spec.annotate_extremes = annotate_extremes;
  spec.title = std::move(title);
  spec.output = std::move(output);
  return spec;
}

std::string scatter_svg(const PlotSpec& spec) {
  const auto& p = spec.projection;
  if (p.size() == 0) throw_data("cannot plot an empty projection");
  if (p.set_labels.size() != p.size()) throw_data("projection set labels do not match its rows");
  for (const auto& l : p.set_labels) {
    if (!spec.set_palette.contains(l)) throw_data(fmt::format("no colour assigned to set '{}'", l));
  }

  const double plot_right = kWidth - kMarginRight;
  const double plot_bottom = kHeight - kMarginBottom;
  const auto ax = fit_axis(p.coords, 0, kMarginLeft, plot_right);
  const auto ay = fit_axis(p.coords, 1, plot_bottom, kMarginTop);

  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} "
      "{:.0f}\" font-family=\"sans-serif\">\n",
      kWidth, kHeight, kWidth, kHeight);
  s += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n", kWidth, kHeight);
  s += fmt::format("<text class=\"title\" x=\"{:.1f}\" y=\"30\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                   (kMarginLeft + plot_right) / 2.0, xml_escape(spec.title));
  s += fmt::format(
      "<rect class=\"frame\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"#444444\"/>\n",
      kMarginLeft, kMarginTop, plot_right - kMarginLeft, plot_bottom - kMarginTop);
  s += fmt::format(
      "<text class=\"axis-label\" x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"13\" text-anchor=\"middle\">component "
      "1</text>\n",
      (kMarginLeft + plot_right) / 2.0, kHeight - 20.0);
  s += fmt::format(
      "<text class=\"axis-label\" x=\"20\" y=\"{:.1f}\" font-size=\"13\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 20 {:.1f})\">component 2</text>\n",
      (kMarginTop + plot_bottom) / 2.0, (kMarginTop + plot_bottom) / 2.0);
  // axis extents
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\">{:.3g}</text>\n", kMarginLeft,
                   plot_bottom + 15.0, ax.lo);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{:.3g}</text>\n",
                   plot_right, plot_bottom + 15.0, ax.hi);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{:.3g}</text>\n",
                   kMarginLeft - 4.0, plot_bottom, ay.lo);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{:.3g}</text>\n",
                   kMarginLeft - 4.0, kMarginTop + 10.0, ay.hi);

  s += "<g class=\"markers\">\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    s += fmt::format("<circle class=\"marker\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.75\" "
                     "data-set=\"{}\"/>\n",
                     ax.map(p.coords(ii, 0)), ay.map(p.coords(ii, 1)), spec.set_palette.at(p.set_labels[i]),
                     xml_escape(p.set_labels[i]));
  }
  s += "</g>\n";

  if (spec.annotate_extremes && p.size() >= 2) {
    const auto e = find_extreme_pairs(p);
    auto callout = [&](const LevelPair& pair, const char* kind, const char* color, double text_y) {
      const auto a = static_cast<Eigen::Index>(pair.first);
      const auto b = static_cast<Eigen::Index>(pair.second);
      std::string out = fmt::format("<g class=\"extreme {}\">\n", kind);
      out += fmt::format(
          "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"4 3\"/>\n",
          ax.map(p.coords(a, 0)), ay.map(p.coords(a, 1)), ax.map(p.coords(b, 0)), ay.map(p.coords(b, 1)), color);
      for (auto idx : {a, b}) {
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"6\" fill=\"none\" stroke=\"{}\"/>\n",
                           ax.map(p.coords(idx, 0)), ay.map(p.coords(idx, 1)), color);
      }
      out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" fill=\"{}\">{}: {} / {} (d={:.4g})</text>\n",
                         kMarginLeft, text_y, color, kind, xml_escape(pair.first_id), xml_escape(pair.second_id),
                         pair.distance);
      out += "</g>\n";
      return out;
    };
    s += callout(e.closest, "closest", "#000000", kHeight - 36.0);
    s += callout(e.farthest, "farthest", "#D55E00", kHeight - 6.0);
  }

  s += "<g class=\"legend\">\n";
  double y = kMarginTop + 10.0;
  for (const auto& [label, color] : spec.set_palette) {
    s += fmt::format(
        "<g class=\"legend-entry\"><circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"5\" fill=\"{}\"/><text x=\"{:.1f}\" "
        "y=\"{:.1f}\" font-size=\"12\">{}</text></g>\n",
        plot_right + 20.0, y, color, plot_right + 32.0, y + 4.0, xml_escape(label));
    y += 20.0;
  }
  s += "</g>\n</svg>\n";
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data(fmt::format("cannot write '{}'", path.string()));
  out << content;
  out.flush();
  if (!out) throw_data(fmt::format("failed writing '{}'", path.string()));
}

void render_scatter(const PlotSpec& spec) { write_text_file(spec.output, scatter_svg(spec)); }

RolePalette default_role_palette() {
  return {{TileRole::empty, "#F2F2F2"},  {TileRole::solid, "#6B4226"}, {TileRole::enemy, "#D55E00"},
          {TileRole::pipe, "#009E73"},   {TileRole::reward, "#F0E442"}, {TileRole::box, "#E69F00"},
          {TileRole::goal, "#56B4E9"},   {TileRole::player_spawn, "#CC79A7"}, {TileRole::other, "#999999"}};
}

std::string tilemap_svg(const LevelGrid& level, const TileAlphabet& alphabet, const RolePalette& palette) {
  const double w = kTile * level.width;
  const double h = kTile * level.height;
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "data-level=\"{}\">\n",
      w, h, w, h, xml_escape(level.level_id));
  for (int r = 0; r < level.height; ++r) {
    for (int c = 0; c < level.width; ++c) {
      const auto role = alphabet.role_of(level.at(r, c));
      auto it = palette.find(role);
      if (it == palette.end()) {
        throw_data(fmt::format("tile palette has no colour for role '{}'", to_string(role)));
      }
      s += fmt::format("<rect class=\"tile\" x=\"{:.0f}\" y=\"{:.0f}\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"{}\"/>\n",
                       c * kTile, r * kTile, kTile, kTile, it->second);
    }
  }
  s += "</svg>\n";
  return s;
}

void render_level_tilemap(const LevelGrid& level, const TileAlphabet& alphabet, const RolePalette& palette,
                          const std::filesystem::path& output) {
  write_text_file(output, tilemap_svg(level, alphabet, palette));
}

}  // namespace genspace
