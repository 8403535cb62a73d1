#include "genspace/spectral.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

#include "genspace/error.hpp"

namespace genspace {

namespace {

// Relative to ‖X‖_F²: eigenvalues of a Gram matrix are only resolved to about
// ε·λ_max, so anything below this is indistinguishable from rank deficiency.
constexpr double kRankTolerance = 1e-12;

}  // namespace

void orient_components(Eigen::MatrixXd& scores, Eigen::MatrixXd& loadings) {
  for (Eigen::Index k = 0; k < loadings.cols(); ++k) {
    const double peak = loadings.col(k).cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index j = 0; j < loadings.rows(); ++j) {
      if (std::abs(loadings(j, k)) >= peak * (1.0 - 1e-9)) {
        pick = j;
        break;
      }
    }
    if (loadings(pick, k) < 0.0) {
      loadings.col(k) *= -1.0;
      scores.col(k) *= -1.0;
    }
  }
}

SingularTriplets leading_singular_triplets(const Eigen::MatrixXd& x, int k) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::Index rank_cap = std::min(n, d);
  if (k < 1 || k > rank_cap) {
    throw_numerical(fmt::format("cannot extract {} components from a {}x{} matrix", k, n, d));
  }

  const bool via_rows = n <= d;
  const Eigen::Index m = via_rows ? n : d;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  if (via_rows) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
  } else {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw_numerical("eigendecomposition did not converge");

  // eigenvalues come back ascending
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  SingularTriplets out;
  out.values.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) out.values(i) = std::sqrt(std::max(lambda(m - 1 - i), 0.0));
  out.total_energy = x.squaredNorm();

  const double floor = kRankTolerance * out.total_energy;
  for (int c = 0; c < k; ++c) {
    const double lam = lambda(m - 1 - c);
    if (!(lam > floor)) {
      throw_numerical(fmt::format("degenerate rank: only {} nonzero singular value(s), need {} "
                                  "(the corpus is too uniform)",
                                  c, k));
    }
  }

  out.scores.resize(n, k);
  out.loadings.resize(d, k);
  for (int c = 0; c < k; ++c) {
    const double sigma = out.values(c);
    const auto vec = eig.eigenvectors().col(m - 1 - c);
    if (via_rows) {
      out.scores.col(c) = vec * sigma;
      out.loadings.col(c) = x.transpose() * vec / sigma;
    } else {
      out.loadings.col(c) = vec;
      out.scores.col(c) = x * vec;
    }
  }
  orient_components(out.scores, out.loadings);
  return out;
}

}  // namespace genspace
