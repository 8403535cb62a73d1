#include "genspace/encode.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <cmath>
#include <ostream>

#include "genspace/error.hpp"

namespace genspace {

namespace {

DesignMatrix make_shell(const LevelCorpus& corpus, EncodingKind kind) {
  if (corpus.empty()) throw_data("cannot encode an empty corpus");
  DesignMatrix m;
  m.kind = kind;
  m.height = corpus.height();
  m.width = corpus.width();
  m.n_types = static_cast<int>(corpus.alphabet().size());
  m.row_ids.reserve(corpus.size());
  m.set_labels.reserve(corpus.size());
  for (const auto& l : corpus.levels()) {
    m.row_ids.push_back(l.level_id);
    m.set_labels.push_back(l.set_label);
  }
  const int per_cell = kind == EncodingKind::onehot ? m.n_types : 1;
  m.column_meta.reserve(static_cast<std::size_t>(m.height) * static_cast<std::size_t>(m.width) *
                        static_cast<std::size_t>(per_cell));
  for (int r = 0; r < m.height; ++r) {
    for (int c = 0; c < m.width; ++c) {
      if (kind == EncodingKind::onehot) {
        for (int t = 0; t < m.n_types; ++t) m.column_meta.push_back({r, c, t});
      } else {
        m.column_meta.push_back({r, c, -1});
      }
    }
  }
  return m;
}

}  // namespace

DesignMatrix encode_categorical(const LevelCorpus& corpus) {
  auto m = make_shell(corpus, EncodingKind::categorical);
  const auto n = static_cast<Eigen::Index>(corpus.size());
  const auto d = static_cast<Eigen::Index>(m.column_meta.size());
  m.values.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& cells = corpus.levels()[static_cast<std::size_t>(i)].cells;
    for (Eigen::Index j = 0; j < d; ++j) {
      m.values(i, j) = corpus.alphabet().index_of(cells[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

DesignMatrix encode_onehot(const LevelCorpus& corpus) {
  auto m = make_shell(corpus, EncodingKind::onehot);
  const auto n = static_cast<Eigen::Index>(corpus.size());
  const auto t = static_cast<Eigen::Index>(m.n_types);
  m.values = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(m.column_meta.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& cells = corpus.levels()[static_cast<std::size_t>(i)].cells;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      m.values(i, static_cast<Eigen::Index>(k) * t + corpus.alphabet().index_of(cells[k])) = 1.0;
    }
  }
  return m;
}

std::vector<LevelGrid> decode(const DesignMatrix& m, const TileAlphabet& alphabet) {
  if (m.cols() != static_cast<Eigen::Index>(m.column_meta.size())) {
    throw_data("design matrix column metadata does not match its width");
  }
  const auto& symbols = alphabet.symbols();
  std::vector<LevelGrid> levels(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto& level = levels[static_cast<std::size_t>(i)];
    level.level_id = m.row_ids.at(static_cast<std::size_t>(i));
    if (!m.set_labels.empty()) level.set_label = m.set_labels.at(static_cast<std::size_t>(i));
    level.height = m.height;
    level.width = m.width;
    level.cells.assign(static_cast<std::size_t>(m.height) * static_cast<std::size_t>(m.width), '\0');
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto& origin = m.column_meta[static_cast<std::size_t>(j)];
      const auto cell = static_cast<std::size_t>(origin.row) * static_cast<std::size_t>(m.width) +
                        static_cast<std::size_t>(origin.col);
      int type = -1;
      if (m.kind == EncodingKind::categorical) {
        type = static_cast<int>(std::lround(m.values(i, j)));
      } else if (m.values(i, j) == 1.0) {
        type = origin.tile_type;
      }
      if (type < 0) continue;
      if (type >= static_cast<int>(symbols.size())) {
        throw_data(fmt::format("row {}: tile type {} outside the alphabet", i, type));
      }
      if (level.cells[cell] != '\0') {
        throw_data(fmt::format("row {}: cell ({}, {}) has more than one tile type", i, origin.row, origin.col));
      }
      level.cells[cell] = symbols[static_cast<std::size_t>(type)];
    }
    if (level.cells.find('\0') != std::string::npos) {
      throw_data(fmt::format("row {}: a cell has no tile type", i));
    }
  }
  return levels;
}

void write_design_matrix(std::ostream& out, const DesignMatrix& m) {
  out << "level_id,set_label";
  for (const auto& c : m.column_meta) {
    if (c.tile_type < 0) {
      fmt::print(out, ",r{}c{}", c.row, c.col);
    } else {
      fmt::print(out, ",r{}c{}t{}", c.row, c.col, c.tile_type);
    }
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << m.row_ids[static_cast<std::size_t>(i)] << ','
        << (m.set_labels.empty() ? std::string() : m.set_labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) fmt::print(out, ",{}", m.values(i, j));
    out << '\n';
  }
}

}  // namespace genspace
