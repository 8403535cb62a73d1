#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "genspace/corpus.hpp"

namespace genspace {

enum class EncodingKind { categorical, onehot };

/// Where a design-matrix column came from. `tile_type` is -1 for categorical
/// columns.
struct ColumnOrigin {
  int row = 0;
  int col = 0;
  int tile_type = -1;

  friend bool operator==(const ColumnOrigin&, const ColumnOrigin&) = default;
};

/// Stacked flattened levels, one row per level.
///
/// Categorical: d = H·W, entries are tile-type indices stored as reals.
/// One-hot: d = H·W·T, row-major over (row, col) with the tile type innermost.
struct DesignMatrix {
  EncodingKind kind = EncodingKind::onehot;
  Eigen::MatrixXd values;
  std::vector<ColumnOrigin> column_meta;
  std::vector<std::string> row_ids;
  std::vector<std::string> set_labels;
  int height = 0;
  int width = 0;
  int n_types = 0;

  [[nodiscard]] Eigen::Index rows() const noexcept { return values.rows(); }
  [[nodiscard]] Eigen::Index cols() const noexcept { return values.cols(); }
};

DesignMatrix encode_categorical(const LevelCorpus& corpus);
DesignMatrix encode_onehot(const LevelCorpus& corpus);

/// Inverts either encoding back to level cells using column_meta.
std::vector<LevelGrid> decode(const DesignMatrix& m, const TileAlphabet& alphabet);

/// Comma-separated dump: header `level_id,set_label,<column names>` where a
/// column is named `r<row>c<col>` (categorical) or `r<row>c<col>t<type>`.
void write_design_matrix(std::ostream& out, const DesignMatrix& m);

}  // namespace genspace
