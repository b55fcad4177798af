#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwspt/statespace.hpp"

namespace rwspt {

class LumpabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Infinitesimal generator in compressed sparse row form. Only off-diagonal
/// entries are stored; the diagonal is the negated row sum.
class Generator {
 public:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };

  Generator() = default;
  /// Triplets may repeat (summed) and include diagonal entries (ignored).
  Generator(std::size_t dimension, std::vector<Triplet> triplets);

  std::size_t dimension() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
  std::size_t nonzeros() const { return cols_.size(); }

  /// Off-diagonal entry (i, j); diagonal (i, i) is -exit_rate(i).
  double at(std::uint32_t i, std::uint32_t j) const;
  double exit_rate(std::uint32_t i) const { return exit_[i]; }

  struct RowView {
    const std::uint32_t* cols;
    const double* values;
    std::size_t size;
  };
  RowView row(std::uint32_t i) const;

  /// Off-diagonal entries in (row, col) order.
  std::vector<Triplet> triplets() const;

  /// y = x Q (row vector times generator), fixed summation order.
  std::vector<double> left_multiply(const std::vector<double>& x) const;

 private:
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
  std::vector<double> exit_;
};

/// Q[i][j] = sum of rates of edges i -> j, self-loops dropped.
Generator build_generator(const TransitionSystem& ts);

struct LumpabilityReport {
  bool lumpable = true;
  std::string counterexample;  ///< empty when lumpable
};

/// Strong lumpability of `partition` (state -> class id in 0..classes-1):
/// every state of a class has the same cumulative rate into every other class.
LumpabilityReport check_strong_lumpability(const Generator& q,
                                           const std::vector<std::uint32_t>& partition,
                                           double tol);

/// Lumped generator indexed by class id, using the first state of each class
/// as representative. Throws LumpabilityError if the partition is not
/// strongly lumpable within `tol`.
Generator lump_generator(const Generator& q, const std::vector<std::uint32_t>& partition,
                         double tol = 1e-9);

using Distribution = std::vector<double>;

/// Point mass on `state`.
Distribution point_mass(std::size_t dimension, std::uint32_t state);

/// pi0 * exp(Q t) by uniformization with total-variation error at most eps.
Distribution transient(const Generator& q, const Distribution& pi0, double t, double eps);

/// Transient distributions at each point of an increasing grid (starting at
/// t >= 0), stepping from one grid point to the next.
std::vector<Distribution> transient_series(const Generator& q, const Distribution& pi0,
                                           const std::vector<double>& grid, double eps);

/// Expected rate of edges labeled `tag` under `pi`.
double throughput(const TransitionSystem& ts, const Distribution& pi, const std::string& tag);

/// Probability of not being in a final state.
double reliability(const TransitionSystem& ts, const Distribution& pi);

struct MeasureSeries {
  std::vector<double> time;
  std::vector<double> throughput;
  std::vector<double> reliability;
  std::vector<std::optional<double>> conditional;  ///< throughput / reliability
};

/// Measures for the assembly throughput of a quotient TS started in state 0.
MeasureSeries measure_series(const TransitionSystem& ts, const Generator& q,
                             const std::vector<double>& grid, double eps,
                             const std::string& tag = "as");

/// `points` log-spaced values from `lo` to `hi` inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Parses "lo:hi:points" (log-spaced) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

/// Header line "<n> <n> <nonzeros>", then "i j q" per off-diagonal entry.
void write_generator(const Generator& q, std::ostream& out);
void write_measures_csv(const MeasureSeries& series, std::ostream& out);

}  // namespace rwspt
