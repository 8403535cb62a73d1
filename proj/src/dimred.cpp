#include "genspace/dimred.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "genspace/error.hpp"
#include "genspace/spectral.hpp"

namespace genspace {

namespace {

void require_rows(const DesignMatrix& x, Eigen::Index min_rows, std::string_view who) {
  if (x.rows() < min_rows) {
    throw_data(fmt::format("{} needs at least {} levels, got {}", who, min_rows, x.rows()));
  }
}

Projection from_triplets(Algorithm a, const DesignMatrix& x, const SingularTriplets& t,
                         double coord_scale, std::array<double, 2> explained) {
  Projection p;
  p.algorithm = a;
  p.coords = t.scores.leftCols(2) * coord_scale;
  p.explained = explained;
  p.row_ids = x.row_ids;
  p.set_labels = x.set_labels;
  if (!p.coords.allFinite()) throw_numerical(fmt::format("{} produced non-finite coordinates", to_string(a)));
  return p;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::pca:
      return "PCA";
    case Algorithm::svd:
      return "SVD";
    case Algorithm::mca:
      return "MCA";
    case Algorithm::tsne:
      return "TSNE";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string lower;
  for (char c : name) {
    if (c != '-' && c != '_') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (auto a : kAllAlgorithms) {
    std::string ref;
    for (char c : to_string(a)) ref.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == ref) return a;
  }
  return std::nullopt;
}

Projection fit_pca(const DesignMatrix& x) {
  require_rows(x, 3, "PCA");
  if (x.cols() < 2) throw_data("PCA needs at least 2 columns");
  const Eigen::MatrixXd centered = x.values.rowwise() - x.values.colwise().mean();
  const auto t = leading_singular_triplets(centered, 2);
  const double dof = static_cast<double>(x.rows() - 1);
  return from_triplets(Algorithm::pca, x, t, 1.0,
                       {t.values(0) * t.values(0) / dof, t.values(1) * t.values(1) / dof});
}

Projection fit_svd(const DesignMatrix& x) {
  require_rows(x, 3, "SVD");
  if (x.cols() < 2) throw_data("SVD needs at least 2 columns");
  const auto t = leading_singular_triplets(x.values, 2);
  const double dof = static_cast<double>(x.rows() - 1);
  return from_triplets(Algorithm::svd, x, t, 1.0,
                       {t.values(0) * t.values(0) / dof, t.values(1) * t.values(1) / dof});
}

CorrespondenceTables correspondence_tables(const DesignMatrix& x) {
  if (x.kind != EncodingKind::categorical) throw_data("MCA needs a categorical design matrix");
  const Eigen::Index n = x.rows();
  const Eigen::Index q = x.cols();
  const int types = x.n_types;
  if (n == 0 || q == 0) throw_data("MCA needs a non-empty design matrix");

  // category counts per variable
  std::vector<std::size_t> counts(static_cast<std::size_t>(q) * static_cast<std::size_t>(types), 0);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto t = static_cast<long>(std::lround(x.values(i, j)));
      if (t < 0 || t >= types) throw_data(fmt::format("MCA: category {} out of range in column {}", t, j));
      ++counts[static_cast<std::size_t>(j) * static_cast<std::size_t>(types) + static_cast<std::size_t>(t)];
    }
  }

  CorrespondenceTables out;
  std::vector<Eigen::Index> column_of(counts.size(), -1);
  std::vector<double> kept_counts;
  for (Eigen::Index j = 0; j < q; ++j) {
    for (int t = 0; t < types; ++t) {
      const auto slot = static_cast<std::size_t>(j) * static_cast<std::size_t>(types) + static_cast<std::size_t>(t);
      if (counts[slot] == 0) continue;
      column_of[slot] = static_cast<Eigen::Index>(kept_counts.size());
      kept_counts.push_back(static_cast<double>(counts[slot]));
      const auto& origin = x.column_meta[static_cast<std::size_t>(j)];
      out.categories.push_back({origin.row, origin.col, t});
    }
  }

  const auto n_cols = static_cast<Eigen::Index>(kept_counts.size());
  const double nd = static_cast<double>(n);
  const double grand = nd * static_cast<double>(q);
  out.row_masses = Eigen::VectorXd::Constant(n, 1.0 / nd);
  out.col_masses.resize(n_cols);
  for (Eigen::Index c = 0; c < n_cols; ++c) out.col_masses(c) = kept_counts[static_cast<std::size_t>(c)] / grand;

  // P_ij − r_i c_j = (Z_ij − count_j / n) / grand, so identical rows give exact zeros
  Eigen::VectorXd expected(n_cols);
  Eigen::VectorXd scale(n_cols);
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    expected(c) = kept_counts[static_cast<std::size_t>(c)] / nd;
    scale(c) = 1.0 / (grand * std::sqrt(out.row_masses(0) * out.col_masses(c)));
  }
  out.residuals.resize(n, n_cols);
  for (Eigen::Index c = 0; c < n_cols; ++c) out.residuals.col(c).setConstant(-expected(c) * scale(c));
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto t = static_cast<std::size_t>(std::lround(x.values(i, j)));
      const auto c = column_of[static_cast<std::size_t>(j) * static_cast<std::size_t>(types) + t];
      out.residuals(i, c) = (1.0 - expected(c)) * scale(c);
    }
  }
  return out;
}

Projection fit_mca(const DesignMatrix& x) {
  require_rows(x, 3, "MCA");
  const auto tables = correspondence_tables(x);
  const auto t = leading_singular_triplets(tables.residuals, 2);
  const double inertia = t.total_energy;
  // row masses are uniform (1/n), so D_r^(-1/2) is a scalar
  const double row_scale = 1.0 / std::sqrt(tables.row_masses(0));
  return from_triplets(Algorithm::mca, x, t, row_scale,
                       {t.values(0) * t.values(0) / inertia, t.values(1) * t.values(1) / inertia});
}

Projection fit(Algorithm a, const DesignMatrix& x, const TsneConfig& tsne) {
  switch (a) {
    case Algorithm::pca:
      return fit_pca(x);
    case Algorithm::svd:
      return fit_svd(x);
    case Algorithm::mca:
      return fit_mca(x);
    case Algorithm::tsne:
      return fit_tsne(x, tsne);
  }
  throw_config("unknown algorithm");
}

}  // namespace genspace
