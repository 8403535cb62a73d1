#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genspace/encode.hpp"

namespace genspace {

enum class Algorithm { pca, svd, mca, tsne };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms{Algorithm::pca, Algorithm::svd,
                                                         Algorithm::mca, Algorithm::tsne};

std::string_view to_string(Algorithm a);  // "PCA", "SVD", "MCA", "TSNE"
std::optional<Algorithm> parse_algorithm(std::string_view name);  // case-insensitive

/// Which encoding a reducer consumes.
constexpr EncodingKind input_encoding(Algorithm a) noexcept {
  return a == Algorithm::mca ? EncodingKind::categorical : EncodingKind::onehot;
}

/// Per-level 2D coordinates from one reducer on one run.
struct Projection {
  Algorithm algorithm = Algorithm::pca;
  std::optional<std::uint64_t> seed;             // t-SNE only
  Eigen::MatrixX2d coords;                       // n×2
  std::optional<std::array<double, 2>> explained;  // absent for t-SNE
  std::vector<std::string> row_ids;
  std::vector<std::string> set_labels;

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(coords.rows()); }
};

/// Mean-centers columns, then projects onto the two leading principal axes.
/// explained[k] = σ_k² / (n − 1).
Projection fit_pca(const DesignMatrix& x);

/// Same as fit_pca without centering; explained[k] = σ_k² / (n − 1).
Projection fit_svd(const DesignMatrix& x);

/// Correspondence-analysis quantities of the indicator matrix behind a
/// categorical design matrix. Never-observed categories are dropped.
struct CorrespondenceTables {
  Eigen::VectorXd row_masses;
  Eigen::VectorXd col_masses;
  Eigen::MatrixXd residuals;  // D_r^(-1/2) (P − r·cᵀ) D_c^(-1/2)
  std::vector<ColumnOrigin> categories;  // (row, col, tile_type) per indicator column
};

CorrespondenceTables correspondence_tables(const DesignMatrix& categorical);

/// Multiple correspondence analysis; coords are row principal coordinates and
/// explained[k] is the share of total inertia.
Projection fit_mca(const DesignMatrix& categorical);

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iters = 250;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch_iter = 250;
  std::uint64_t seed = 0;
};

/// Throws a config error for out-of-range fields. The perplexity bound against
/// n is not checked here; fit_tsne clamps it instead.
void validate(const TsneConfig& cfg);

/// Largest usable perplexity for n points, ⌊(n − 1)/3⌋.
double max_perplexity(std::size_t n);

struct PerplexityCalibration {
  Eigen::MatrixXd conditional;  // row i holds p_{j|i}; zero diagonal
  Eigen::VectorXd sigmas;
  Eigen::VectorXd entropy_bits;
};

/// Binary search for each row's Gaussian bandwidth so that its conditional
/// distribution has entropy log₂(perplexity).
PerplexityCalibration calibrate_perplexity(const Eigen::MatrixXd& d2, double perplexity);

/// Pairwise squared Euclidean distances between rows, exactly symmetric with a
/// zero diagonal.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x);

/// p_ij = (p_{j|i} + p_{i|j}) / 2n, off-diagonal floor 1e-12, renormalized to
/// sum to one.
Eigen::MatrixXd joint_affinities(const Eigen::MatrixXd& conditional);

/// KL divergence checkpoints recorded during optimization. `iteration` counts
/// completed gradient steps.
struct TsneTrace {
  std::vector<std::pair<int, double>> kl;
  double kl_after_exaggeration = 0.0;
  double final_kl = 0.0;
};

/// Exact t-SNE on the rows of a one-hot (or any real) design matrix.
Projection fit_tsne(const DesignMatrix& x, const TsneConfig& cfg, TsneTrace* trace = nullptr);

/// Exact t-SNE from a precomputed joint affinity matrix.
Eigen::MatrixX2d optimize_embedding(const Eigen::MatrixXd& p, const TsneConfig& cfg,
                                    TsneTrace* trace = nullptr);

/// Dispatches to the reducer; `tsne` is ignored by the linear reducers.
Projection fit(Algorithm a, const DesignMatrix& x, const TsneConfig& tsne);

}  // namespace genspace
