#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genspace/dimred.hpp"
#include "genspace/metrics.hpp"

namespace genspace {

/// Number of unordered pairs among n items.
constexpr std::size_t pair_count(std::size_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Position of pair (i, j), i < j, in the canonical lexicographic order
/// (0,1), (0,2), …, (0,n−1), (1,2), …
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

/// One value per unordered pair of items, in canonical order.
struct PairSeries {
  std::size_t n_items = 0;
  std::vector<double> values;
};

/// Calls `sink(first_index, span)` with consecutive chunks of the pair series
/// produced by `value(i, j)`, so the whole series never has to be resident.
template <class ValueFn, class Sink>
void for_each_pair_chunk(std::size_t n, std::size_t chunk_size, ValueFn&& value, Sink&& sink) {
  std::vector<double> buf;
  buf.reserve(chunk_size);
  std::size_t first = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      buf.push_back(value(i, j));
      if (buf.size() == chunk_size) {
        sink(first, std::span<const double>(buf));
        first += buf.size();
        buf.clear();
      }
    }
  }
  if (!buf.empty()) sink(first, std::span<const double>(buf));
}

/// Euclidean distance in the projected plane for every pair of levels.
PairSeries pairwise_projection_distance(const Projection& p);

/// |v_i − v_j| of one BC for every pair of levels. Throws a data error when a
/// level lacks the BC.
PairSeries pairwise_bc_difference(const std::vector<BcVector>& bcs, Bc bc);

/// Replaces every value by its rank (1-based); ties get the mean of the ranks
/// they span.
void to_midranks(std::vector<double>& values);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;
  std::size_t m = 0;
};

/// Spearman's ρ with a two-sided p-value from Student's t on m − 2 degrees of
/// freedom. Throws a numerical error when either series is constant.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of two midrank vectors accumulated in fixed-size chunks,
/// plus its p-value.
SpearmanResult spearman_from_ranks(std::span<const double> rx, std::span<const double> ry,
                                   std::size_t chunk_size = std::size_t{1} << 20);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| ≥ |t|) for Student's t with `dof`
/// degrees of freedom.
double student_t_two_sided(double t, double dof);

/// Two-sided p-value for a correlation coefficient over m observations.
double correlation_p_value(double rho, std::size_t m);

struct RunAggregate {
  double mean_rho = 0.0;
  double std_rho = 0.0;
  double mean_p = 0.0;
  double std_p = 0.0;
};

/// Means and population standard deviations across runs.
RunAggregate aggregate_runs(std::span<const std::pair<double, double>> per_run);

struct RunCorrelation {
  int run = 0;
  double rho = 0.0;
  double p = 1.0;
};

struct CorrelationCell {
  Algorithm algorithm = Algorithm::pca;
  Bc bc = Bc::empty_space;
  std::vector<RunCorrelation> runs;
  RunAggregate aggregate;
};

struct CorrelationReport {
  std::string game;
  std::vector<Algorithm> algorithms;
  std::vector<Bc> bcs;
  std::vector<CorrelationCell> cells;  // ordered by (algorithm, bc)

  [[nodiscard]] const CorrelationCell* find(Algorithm a, Bc bc) const noexcept;
};

/// Correlates one projection against every BC in `profile`. The distance
/// series is ranked once and reused.
std::vector<SpearmanResult> correlate_projection(const Projection& p, const std::vector<BcVector>& bcs,
                                                 const std::vector<Bc>& profile);

/// `game,algorithm,bc,run,rho,p` rows at full precision; aggregate rows use
/// run `mean` and `std`.
void write_report_csv(std::ostream& out, const CorrelationReport& report);

/// Aligned table: one row per BC, a ρ and p column pair per algorithm, values
/// as mean±std.
void write_report_table(std::ostream& out, const CorrelationReport& report);

}  // namespace genspace
