#include "genspace/correlate.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>

#include "genspace/error.hpp"

namespace genspace {

namespace {

constexpr double kCfEpsilon = 1e-16;
constexpr double kCfTiny = 1e-300;
constexpr int kCfMaxIterations = 2'000'000;

// Stirling-series tail of log Γ(z): 1/(12z) − 1/(360z³) + …
double stirling_tail(double z) {
  const double z2 = z * z;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z;
}

// log B(a, b) without the cancellation lgamma(a) − lgamma(a + b) suffers when
// one argument is huge (the p-value of millions of pairs).
double log_beta(double a, double b) {
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  if (big < 30.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  // lgamma(big + small) − lgamma(big)
  const double ratio = (big - 0.5) * std::log1p(small / big) + small * std::log(big + small) - small +
                       stirling_tail(big + small) - stirling_tail(big);
  return std::lgamma(small) - ratio;
}

// Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kCfTiny) d = kCfTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kCfTiny) d = kCfTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kCfTiny) c = kCfTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kCfTiny) d = kCfTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kCfTiny) c = kCfTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kCfEpsilon) return h;
  }
  throw_numerical(fmt::format("incomplete beta continued fraction did not converge (a={}, b={}, x={})", a, b, x));
}

// I_x(a, b) given both x and 1 − x, so callers can supply 1 − x exactly.
double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    if (log_front < -745.0) return 0.0;
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  if (log_front < -745.0) return 1.0;
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, one_minus_x) / b;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw_numerical(fmt::format("{} contains a non-finite value", what));
  }
}

}  // namespace

PairSeries pairwise_projection_distance(const Projection& p) {
  const std::size_t n = p.size();
  PairSeries s{n, {}};
  s.values.reserve(pair_count(n));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      s.values.push_back(std::hypot(p.coords(ii, 0) - p.coords(jj, 0), p.coords(ii, 1) - p.coords(jj, 1)));
    }
  }
  return s;
}

PairSeries pairwise_bc_difference(const std::vector<BcVector>& bcs, Bc bc) {
  std::vector<double> v;
  v.reserve(bcs.size());
  for (const auto& b : bcs) {
    auto x = b.get(bc);
    if (!x) throw_data(fmt::format("level '{}' has no {} value", b.level_id, to_string(bc)));
    v.push_back(*x);
  }
  const std::size_t n = v.size();
  PairSeries s{n, {}};
  s.values.reserve(pair_count(n));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s.values.push_back(std::abs(v[i] - v[j]));
  }
  return s;
}

void to_midranks(std::vector<double>& values) {
  const std::size_t m = values.size();
  if (m > std::numeric_limits<std::uint32_t>::max()) throw_data("series too long to rank");
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  // Ranks are written back group by group; the group scan only ever reads
  // entries that have not been overwritten yet.
  std::size_t k = 0;
  while (k < m) {
    std::size_t end = k + 1;
    const double v = values[order[k]];
    while (end < m && values[order[end]] == v) ++end;
    const double rank = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t t = k; t < end; ++t) values[order[t]] = rank;
    k = end;
  }
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw_numerical("incomplete beta needs positive shape parameters");
  if (!(x >= 0.0 && x <= 1.0)) throw_numerical("incomplete beta argument outside [0, 1]");
  return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) throw_numerical("Student's t needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t2), t2 / (dof + t2));
}

double correlation_p_value(double rho, std::size_t m) {
  if (m < 3) throw_numerical("a p-value needs at least 3 observations");
  if (std::abs(rho) >= 1.0) return 0.0;
  // with t = ρ√((m−2)/(1−ρ²)), dof/(dof + t²) reduces to 1 − ρ²
  const double dof = static_cast<double>(m - 2);
  return incomplete_beta(dof / 2.0, 0.5, (1.0 - rho) * (1.0 + rho), rho * rho);
}

SpearmanResult spearman_from_ranks(std::span<const double> rx, std::span<const double> ry,
                                   std::size_t chunk_size) {
  if (rx.size() != ry.size()) throw_data("Spearman inputs differ in length");
  const std::size_t m = rx.size();
  if (m < 3) throw_data(fmt::format("Spearman needs at least 3 pairs, got {}", m));
  if (chunk_size == 0) chunk_size = m;

  // midranks always average to (m + 1) / 2
  const double mean = 0.5 * (static_cast<double>(m) + 1.0);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t start = 0; start < m; start += chunk_size) {
    const std::size_t stop = std::min(m, start + chunk_size);
    double cxy = 0.0, cxx = 0.0, cyy = 0.0;
    for (std::size_t k = start; k < stop; ++k) {
      const double dx = rx[k] - mean;
      const double dy = ry[k] - mean;
      cxy += dx * dy;
      cxx += dx * dx;
      cyy += dy * dy;
    }
    sxy += cxy;
    sxx += cxx;
    syy += cyy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw_numerical("Spearman correlation is undefined: one series has no variance");
  }
  const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {rho, correlation_p_value(rho, m), m};
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw_data("Spearman inputs differ in length");
  require_finite(x, "first Spearman series");
  require_finite(y, "second Spearman series");
  std::vector<double> rx(x.begin(), x.end());
  std::vector<double> ry(y.begin(), y.end());
  to_midranks(rx);
  to_midranks(ry);
  return spearman_from_ranks(rx, ry);
}

RunAggregate aggregate_runs(std::span<const std::pair<double, double>> per_run) {
  if (per_run.empty()) throw_data("cannot aggregate zero runs");
  const double n = static_cast<double>(per_run.size());
  RunAggregate a;
  for (const auto& [rho, p] : per_run) {
    a.mean_rho += rho;
    a.mean_p += p;
  }
  a.mean_rho /= n;
  a.mean_p /= n;
  double vr = 0.0, vp = 0.0;
  for (const auto& [rho, p] : per_run) {
    vr += (rho - a.mean_rho) * (rho - a.mean_rho);
    vp += (p - a.mean_p) * (p - a.mean_p);
  }
  a.std_rho = std::sqrt(vr / n);
  a.std_p = std::sqrt(vp / n);
  return a;
}

const CorrelationCell* CorrelationReport::find(Algorithm a, Bc bc) const noexcept {
  for (const auto& c : cells) {
    if (c.algorithm == a && c.bc == bc) return &c;
  }
  return nullptr;
}

std::vector<SpearmanResult> correlate_projection(const Projection& p, const std::vector<BcVector>& bcs,
                                                 const std::vector<Bc>& profile) {
  if (bcs.size() != p.size()) {
    throw_data(fmt::format("projection has {} levels but {} BC vectors were given", p.size(), bcs.size()));
  }
  for (std::size_t i = 0; i < bcs.size(); ++i) {
    if (bcs[i].level_id != p.row_ids[i]) {
      throw_data(fmt::format("row {} misaligned: projection level '{}' vs BC level '{}'", i, p.row_ids[i],
                             bcs[i].level_id));
    }
  }
  auto distances = pairwise_projection_distance(p).values;
  require_finite(distances, "projected distance series");
  to_midranks(distances);

  std::vector<SpearmanResult> out;
  out.reserve(profile.size());
  for (auto bc : profile) {
    auto diffs = pairwise_bc_difference(bcs, bc).values;
    require_finite(diffs, "BC difference series");
    to_midranks(diffs);
    out.push_back(spearman_from_ranks(distances, diffs));
  }
  return out;
}

void write_report_csv(std::ostream& out, const CorrelationReport& report) {
  out << "game,algorithm,bc,run,rho,p\n";
  for (const auto& cell : report.cells) {
    for (const auto& r : cell.runs) {
      fmt::print(out, "{},{},{},{},{},{}\n", report.game, to_string(cell.algorithm), to_string(cell.bc), r.run,
                 r.rho, r.p);
    }
  }
  for (const auto& cell : report.cells) {
    const auto& a = cell.aggregate;
    fmt::print(out, "{},{},{},mean,{},{}\n", report.game, to_string(cell.algorithm), to_string(cell.bc),
               a.mean_rho, a.mean_p);
    fmt::print(out, "{},{},{},std,{},{}\n", report.game, to_string(cell.algorithm), to_string(cell.bc),
               a.std_rho, a.std_p);
  }
}

void write_report_table(std::ostream& out, const CorrelationReport& report) {
  constexpr int kGame = 12;
  constexpr int kBc = 8;
  constexpr int kCol = 16;
  auto pm = [](double mean, double sd) { return fmt::format("{:.3f}±{:.3f}", mean, sd); };
  // '±' is two bytes in UTF-8 but one column wide
  auto pad = [](const std::string& s, int width) {
    int cols = 0;
    for (unsigned char c : s) cols += (c & 0xC0) != 0x80 ? 1 : 0;
    return s + std::string(static_cast<std::size_t>(std::max(0, width - cols)), ' ');
  };

  std::string head1 = pad("", kGame) + pad("", kBc);
  std::string head2 = pad("Game", kGame) + pad("BC", kBc);
  for (auto a : report.algorithms) {
    head1 += "| " + pad(std::string(to_string(a)), 2 * kCol);
    head2 += "| " + pad("Spearman's rho", kCol) + pad("P value", kCol);
  }
  out << head1 << '\n' << head2 << '\n';
  out << std::string(static_cast<std::size_t>(kGame + kBc) + report.algorithms.size() * (2 + 2 * kCol), '-')
      << '\n';
  bool first = true;
  for (auto bc : report.bcs) {
    std::string line = pad(first ? report.game : "", kGame) + pad(std::string(to_string(bc)), kBc);
    first = false;
    for (auto a : report.algorithms) {
      const auto* cell = report.find(a, bc);
      line += "| ";
      if (cell == nullptr) {
        line += pad("n/a", kCol) + pad("n/a", kCol);
      } else {
        line += pad(pm(cell->aggregate.mean_rho, cell->aggregate.std_rho), kCol) +
                pad(pm(cell->aggregate.mean_p, cell->aggregate.std_p), kCol);
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace genspace
