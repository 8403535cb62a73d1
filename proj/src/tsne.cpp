#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "genspace/dimred.hpp"
#include "genspace/error.hpp"
#include "genspace/rng.hpp"

namespace genspace {

namespace {

constexpr int kMaxBandwidthSteps = 64;
constexpr double kEntropyTolerance = 1e-5;  // bits
constexpr double kEntropyFailure = 1e-3;    // bits
constexpr double kAffinityFloor = 1e-12;
constexpr double kInitScale = 1e-4;
constexpr double kMinGain = 0.01;
constexpr int kKlCheckEvery = 50;

constexpr int sign(double v) noexcept { return (v > 0.0) - (v < 0.0); }

double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixX2d& y) {
  const Eigen::Index n = y.rows();
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = y(i, 0) - y(j, 0);
      const double dy = y(i, 1) - y(j, 1);
      z += 2.0 / (1.0 + dx * dx + dy * dy);
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = y(i, 0) - y(j, 0);
      const double dy = y(i, 1) - y(j, 1);
      const double q = 1.0 / ((1.0 + dx * dx + dy * dy) * z);
      const double pij = p(i, j);
      if (pij > 0.0) kl += pij * std::log(pij / q);
      const double pji = p(j, i);
      if (pji > 0.0) kl += pji * std::log(pji / q);
    }
  }
  return kl;
}

}  // namespace

void validate(const TsneConfig& cfg) {
  if (!(cfg.perplexity > 0.0)) throw_config("t-SNE perplexity must be positive");
  if (cfg.iterations < 1) throw_config("t-SNE iterations must be at least 1");
  if (!(cfg.learning_rate > 0.0)) throw_config("t-SNE learning rate must be positive");
  if (!(cfg.early_exaggeration > 0.0)) throw_config("t-SNE early exaggeration must be positive");
  if (cfg.exaggeration_iters < 0 || cfg.exaggeration_iters > cfg.iterations) {
    throw_config("t-SNE exaggeration_iters must be within [0, iterations]");
  }
  if (cfg.momentum_switch_iter < 0) throw_config("t-SNE momentum_switch_iter must be nonnegative");
  for (double m : {cfg.momentum_initial, cfg.momentum_final}) {
    if (!(m >= 0.0 && m < 1.0)) throw_config("t-SNE momentum must be in [0, 1)");
  }
}

double max_perplexity(std::size_t n) {
  return n < 1 ? 0.0 : std::floor(static_cast<double>(n - 1) / 3.0);
}

PerplexityCalibration calibrate_perplexity(const Eigen::MatrixXd& d2, double perplexity) {
  const Eigen::Index n = d2.rows();
  if (d2.cols() != n) throw_data("distance matrix must be square");
  if (n < 2) throw_data("perplexity calibration needs at least 2 points");
  if (!(perplexity > 0.0)) throw_config("perplexity must be positive");

  const double target = std::log2(perplexity);
  PerplexityCalibration out;
  out.conditional = Eigen::MatrixXd::Zero(n, n);
  out.sigmas.resize(n);
  out.entropy_bits.resize(n);

  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = d2(i, j);
      if (!std::isfinite(d) || d < 0.0) {
        throw_data(fmt::format("distance row {} has an invalid entry at column {}", i, j));
      }
      dmin = std::min(dmin, d);
    }

    // beta = 1 / (2σ²); entropy falls monotonically as beta grows
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double entropy = 0.0;
    double sum = 0.0;
    for (int step = 0; step < kMaxBandwidthSteps; ++step) {
      sum = 0.0;
      double weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) {
          w(j) = 0.0;
          continue;
        }
        const double shifted = d2(i, j) - dmin;
        w(j) = std::exp(-beta * shifted);
        sum += w(j);
        weighted += shifted * w(j);
      }
      entropy = (std::log(sum) + beta * weighted / sum) / std::numbers::ln2;
      const double diff = entropy - target;
      if (std::abs(diff) < kEntropyTolerance) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
      } else {
        hi = beta;
        beta = (beta + lo) / 2.0;
      }
    }
    if (!(std::abs(entropy - target) <= kEntropyFailure)) {
      throw_numerical(fmt::format("perplexity calibration failed for row {}: entropy {:.6f} bits, "
                                  "target {:.6f} (distances too uniform for perplexity {})",
                                  i, entropy, target, perplexity));
    }
    out.conditional.row(i) = w.transpose() / sum;
    out.sigmas(i) = std::sqrt(1.0 / (2.0 * beta));
    out.entropy_bits(i) = entropy;
  }
  return out;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = std::max(gram(i, i) + gram(j, j) - 2.0 * gram(i, j), 0.0);
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  return d2;
}

Eigen::MatrixXd joint_affinities(const Eigen::MatrixXd& conditional) {
  const Eigen::Index n = conditional.rows();
  Eigen::MatrixXd p(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    p(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = std::max((conditional(i, j) + conditional(j, i)) / denom, kAffinityFloor);
      p(i, j) = v;
      p(j, i) = v;
      total += 2.0 * v;
    }
  }
  p /= total;
  return p;
}

Eigen::MatrixX2d optimize_embedding(const Eigen::MatrixXd& p, const TsneConfig& cfg, TsneTrace* trace) {
  validate(cfg);
  const Eigen::Index n = p.rows();

  Rng rng(cfg.seed);
  Eigen::MatrixX2d y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i, 0) = rng.normal() * kInitScale;
    y(i, 1) = rng.normal() * kInitScale;
  }
  Eigen::MatrixX2d update = Eigen::MatrixX2d::Zero(n, 2);
  Eigen::MatrixX2d gains = Eigen::MatrixX2d::Ones(n, 2);
  Eigen::MatrixX2d attract(n, 2);
  Eigen::MatrixX2d repulse(n, 2);

  auto checkpoint = [&](int done) {
    const double kl = kl_divergence(p, y);
    if (!std::isfinite(kl)) {
      throw_numerical(fmt::format("t-SNE KL divergence became non-finite at iteration {}", done));
    }
    if (trace) {
      trace->kl.emplace_back(done, kl);
      if (done == cfg.exaggeration_iters) trace->kl_after_exaggeration = kl;
      if (done == cfg.iterations) trace->final_kl = kl;
    }
  };

  for (int it = 0; it < cfg.iterations; ++it) {
    const double exaggeration = it < cfg.exaggeration_iters ? cfg.early_exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch_iter ? cfg.momentum_initial : cfg.momentum_final;

    // grad_i = 4 Σ_j (e·p_ij − w_ij/Z) w_ij (y_i − y_j) with w_ij = 1/(1+‖y_i−y_j‖²);
    // the attractive and repulsive sums are accumulated separately so one
    // pass suffices before Z is known.
    attract.setZero();
    repulse.setZero();
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double yi0 = y(i, 0);
      const double yi1 = y(i, 1);
      double a0 = 0.0, a1 = 0.0, r0 = 0.0, r1 = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double dx = yi0 - y(j, 0);
        const double dy = yi1 - y(j, 1);
        const double w = 1.0 / (1.0 + dx * dx + dy * dy);
        z += 2.0 * w;
        const double pw = p(j, i) * w;
        const double ww = w * w;
        a0 += pw * dx;
        a1 += pw * dy;
        r0 += ww * dx;
        r1 += ww * dy;
        attract(j, 0) -= pw * dx;
        attract(j, 1) -= pw * dy;
        repulse(j, 0) -= ww * dx;
        repulse(j, 1) -= ww * dy;
      }
      attract(i, 0) += a0;
      attract(i, 1) += a1;
      repulse(i, 0) += r0;
      repulse(i, 1) += r1;
    }
    const Eigen::MatrixX2d grad = 4.0 * (exaggeration * attract - repulse / z);

    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < 2; ++c) {
        const bool same_sign = sign(grad(i, c)) == sign(update(i, c));
        gains(i, c) = same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2;
        gains(i, c) = std::max(gains(i, c), kMinGain);
        update(i, c) = momentum * update(i, c) - cfg.learning_rate * gains(i, c) * grad(i, c);
      }
    }
    y += update;
    y.rowwise() -= y.colwise().mean();
    if (!y.allFinite()) {
      throw_numerical(fmt::format("t-SNE coordinates became non-finite at iteration {}", it + 1));
    }

    const int done = it + 1;
    if (done == cfg.exaggeration_iters || done == cfg.iterations || done % kKlCheckEvery == 0) {
      checkpoint(done);
    }
  }
  return y;
}

Projection fit_tsne(const DesignMatrix& x, const TsneConfig& cfg, TsneTrace* trace) {
  validate(cfg);
  const auto n = static_cast<std::size_t>(x.rows());
  if (n < 10) throw_data(fmt::format("t-SNE needs at least 10 levels, got {}", n));

  TsneConfig run = cfg;
  const double cap = max_perplexity(n);
  if (run.perplexity >= static_cast<double>(n - 1) / 3.0) {
    warn(fmt::format("t-SNE perplexity {} is too large for {} levels; clamping to {}", run.perplexity, n, cap));
    run.perplexity = cap;
  }

  const auto calibration = calibrate_perplexity(squared_distances(x.values), run.perplexity);
  const auto p = joint_affinities(calibration.conditional);

  Projection proj;
  proj.algorithm = Algorithm::tsne;
  proj.seed = run.seed;
  proj.coords = optimize_embedding(p, run, trace);
  proj.row_ids = x.row_ids;
  proj.set_labels = x.set_labels;
  return proj;
}

}  // namespace genspace
