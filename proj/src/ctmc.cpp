#include "rwspt/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace rwspt {

// ---------------------------------------------------------------------------
// Generator

Generator::Generator(std::size_t dimension, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  row_start_.assign(dimension + 1, 0);
  exit_.assign(dimension, 0.0);
  std::vector<std::uint32_t> rows;
  for (const auto& t : triplets) {
    if (t.row >= dimension || t.col >= dimension) {
      throw std::out_of_range("generator entry outside dimension");
    }
    if (t.row == t.col) continue;
    if (!(t.value >= 0.0)) throw std::invalid_argument("negative off-diagonal generator entry");
    if (!rows.empty() && rows.back() == t.row && cols_.back() == t.col) {
      values_.back() += t.value;
      continue;
    }
    rows.push_back(t.row);
    cols_.push_back(t.col);
    values_.push_back(t.value);
  }
  for (auto r : rows) ++row_start_[r + 1];
  for (std::size_t i = 1; i <= dimension; ++i) row_start_[i] += row_start_[i - 1];
  for (std::size_t i = 0; i < dimension; ++i) {
    double sum = 0.0;
    for (auto k = row_start_[i]; k < row_start_[i + 1]; ++k) sum += values_[k];
    exit_[i] = sum;
  }
}

double Generator::at(std::uint32_t i, std::uint32_t j) const {
  if (i == j) return -exit_[i];
  const auto* begin = cols_.data() + row_start_[i];
  const auto* end = cols_.data() + row_start_[i + 1];
  const auto* it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.data())];
}

Generator::RowView Generator::row(std::uint32_t i) const {
  return {cols_.data() + row_start_[i], values_.data() + row_start_[i],
          row_start_[i + 1] - row_start_[i]};
}

std::vector<Generator::Triplet> Generator::triplets() const {
  std::vector<Triplet> out;
  out.reserve(cols_.size());
  for (std::uint32_t i = 0; i < dimension(); ++i) {
    for (auto k = row_start_[i]; k < row_start_[i + 1]; ++k) out.push_back({i, cols_[k], values_[k]});
  }
  return out;
}

std::vector<double> Generator::left_multiply(const std::vector<double>& x) const {
  std::vector<double> y(dimension(), 0.0);
  for (std::size_t i = 0; i < dimension(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    y[i] -= xi * exit_[i];
    for (auto k = row_start_[i]; k < row_start_[i + 1]; ++k) y[cols_[k]] += xi * values_[k];
  }
  return y;
}

Generator build_generator(const TransitionSystem& ts) {
  std::vector<Generator::Triplet> triplets;
  triplets.reserve(ts.edges.size());
  for (const auto& e : ts.edges) {
    if (e.src != e.dst) triplets.push_back({e.src, e.dst, e.rate});
  }
  return Generator(ts.states.size(), std::move(triplets));
}

// ---------------------------------------------------------------------------
// Lumping

namespace {

using ClassRates = std::map<std::uint32_t, double>;

ClassRates class_rates(const Generator& q, const std::vector<std::uint32_t>& partition,
                       std::uint32_t i) {
  ClassRates out;
  const auto r = q.row(i);
  for (std::size_t k = 0; k < r.size; ++k) out[partition[r.cols[k]]] += r.values[k];
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

LumpabilityReport check_strong_lumpability(const Generator& q,
                                           const std::vector<std::uint32_t>& partition,
                                           double tol) {
  if (partition.size() != q.dimension()) {
    throw std::invalid_argument("partition does not cover the generator's states");
  }
  std::map<std::uint32_t, std::uint32_t> representative;
  std::map<std::uint32_t, ClassRates> reference;
  for (std::uint32_t i = 0; i < q.dimension(); ++i) {
    const auto c = partition[i];
    auto rates = class_rates(q, partition, i);
    auto [it, fresh] = representative.emplace(c, i);
    if (fresh) {
      reference.emplace(c, std::move(rates));
      continue;
    }
    const auto& ref = reference.at(c);
    std::map<std::uint32_t, std::pair<double, double>> both;
    for (const auto& [d, v] : ref) both[d].first = v;
    for (const auto& [d, v] : rates) both[d].second = v;
    for (const auto& [d, pair] : both) {
      if (std::abs(pair.first - pair.second) > tol) {
        std::ostringstream msg;
        msg << "class " << c << ": state " << it->second << " has rate " << format_value(pair.first)
            << " into class " << d << " but state " << i << " has " << format_value(pair.second);
        return {false, msg.str()};
      }
    }
  }
  return {};
}

Generator lump_generator(const Generator& q, const std::vector<std::uint32_t>& partition,
                         double tol) {
  if (auto report = check_strong_lumpability(q, partition, tol); !report.lumpable) {
    throw LumpabilityError("partition is not strongly lumpable: " + report.counterexample);
  }
  std::uint32_t classes = 0;
  for (auto c : partition) classes = std::max(classes, c + 1);
  std::vector<bool> done(classes, false);
  std::vector<Generator::Triplet> triplets;
  for (std::uint32_t i = 0; i < q.dimension(); ++i) {
    const auto c = partition[i];
    if (done[c]) continue;
    done[c] = true;
    for (const auto& [d, v] : class_rates(q, partition, i)) {
      if (d != c && v > 0.0) triplets.push_back({c, d, v});
    }
  }
  return Generator(classes, std::move(triplets));
}

// ---------------------------------------------------------------------------
// Transient solution

Distribution point_mass(std::size_t dimension, std::uint32_t state) {
  Distribution pi(dimension, 0.0);
  pi.at(state) = 1.0;
  return pi;
}

namespace {

/// Upper bound on uniformization steps (matrix-vector products) per call.
constexpr std::size_t kMaxSteps = 20'000'000;

struct PoissonWindow {
  std::size_t left = 0;
  std::vector<double> weights;  ///< normalized probabilities for left, left+1, ...
};

/// Poisson(a) weights around the mode, computed relative to the mode weight
/// and normalized at the end. Each truncated tail is bounded geometrically by
/// its first omitted term and kept below eps/4 of the total.
PoissonWindow poisson_window(double a, double eps) {
  const auto mode = static_cast<std::size_t>(std::floor(a));
  std::vector<double> left_part;  // mode-1, mode-2, ...
  std::vector<double> right_part{1.0};  // mode, mode+1, ...
  double total = 1.0;
  auto check_budget = [&] {
    if (mode + right_part.size() > kMaxSteps) {
      throw SolverError("uniformization cannot reach the requested accuracy within " +
                        std::to_string(kMaxSteps) + " steps");
    }
  };
  check_budget();

  // Left: after including index k, the omitted mass is at most
  // w(k-1) / (1 - (k-1)/a).
  for (std::size_t k = mode; k > 0;) {
    const double w_prev = (left_part.empty() ? 1.0 : left_part.back()) * static_cast<double>(k) / a;
    const double bound = w_prev / (1.0 - static_cast<double>(k - 1) / a);
    if (bound <= eps / 4.0 * total) break;
    left_part.push_back(w_prev);
    total += w_prev;
    --k;
    check_budget();
  }
  // Right: after including index k, the omitted mass is at most
  // w(k+1) / (1 - a/(k+2)) once k+2 > a.
  for (std::size_t k = mode;;) {
    const double w_next = right_part.back() * a / static_cast<double>(k + 1);
    const double ratio = a / static_cast<double>(k + 2);
    if (ratio < 1.0 && w_next / (1.0 - ratio) <= eps / 4.0 * total) break;
    right_part.push_back(w_next);
    total += w_next;
    ++k;
    check_budget();
  }

  PoissonWindow w;
  w.left = mode - left_part.size();
  w.weights.assign(left_part.rbegin(), left_part.rend());
  w.weights.insert(w.weights.end(), right_part.begin(), right_part.end());
  for (auto& x : w.weights) x /= total;
  return w;
}

}  // namespace

Distribution transient(const Generator& q, const Distribution& pi0, double t, double eps) {
  if (pi0.size() != q.dimension()) throw std::invalid_argument("distribution dimension mismatch");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be nonnegative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (t == 0.0) return pi0;

  double max_exit = 0.0;
  for (std::uint32_t i = 0; i < q.dimension(); ++i) max_exit = std::max(max_exit, q.exit_rate(i));
  if (max_exit == 0.0) return pi0;
  const double lambda = 1.02 * max_exit;

  const auto window = poisson_window(lambda * t, eps);
  Distribution acc(pi0.size(), 0.0);
  Distribution v = pi0;
  const std::size_t right = window.left + window.weights.size();
  for (std::size_t k = 0; k < right; ++k) {
    if (k >= window.left) {
      const double w = window.weights[k - window.left];
      for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i];
    }
    if (k + 1 == right) break;
    const auto qv = q.left_multiply(v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += qv[i] / lambda;
  }
  double total = 0.0;
  for (auto& x : acc) {
    x = std::max(x, 0.0);
    total += x;
  }
  for (auto& x : acc) x /= total;
  return acc;
}

std::vector<Distribution> transient_series(const Generator& q, const Distribution& pi0,
                                           const std::vector<double>& grid, double eps) {
  std::vector<Distribution> out;
  out.reserve(grid.size());
  const double step_eps = eps / static_cast<double>(std::max<std::size_t>(1, grid.size()));
  Distribution pi = pi0;
  double now = 0.0;
  for (double t : grid) {
    if (!(t >= now)) throw std::invalid_argument("time grid must be increasing and nonnegative");
    pi = transient(q, pi, t - now, step_eps);
    now = t;
    out.push_back(pi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measures

namespace {

std::vector<double> reward(const TransitionSystem& ts, const std::string& tag) {
  std::vector<double> r(ts.states.size(), 0.0);
  bool any = false;
  for (const auto& e : ts.edges) {
    if (e.label != tag) continue;
    r[e.src] += e.rate;
    any = true;
  }
  if (!any) std::cerr << "warning: no edge labeled '" << tag << "'\n";
  return r;
}

double dot(const std::vector<double>& a, const Distribution& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double throughput(const TransitionSystem& ts, const Distribution& pi, const std::string& tag) {
  return dot(reward(ts, tag), pi);
}

double reliability(const TransitionSystem& ts, const Distribution& pi) {
  double absorbed = 0.0;
  for (auto i : final_states(ts)) absorbed += pi[i];
  return 1.0 - absorbed;
}

MeasureSeries measure_series(const TransitionSystem& ts, const Generator& q,
                             const std::vector<double>& grid, double eps, const std::string& tag) {
  const auto rate = reward(ts, tag);
  std::vector<double> final_mask(ts.states.size(), 0.0);
  for (auto i : final_states(ts)) final_mask[i] = 1.0;

  MeasureSeries out;
  const auto pis = transient_series(q, point_mass(ts.states.size(), 0), grid, eps);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = dot(rate, pis[k]);
    const double r = 1.0 - dot(final_mask, pis[k]);
    out.time.push_back(grid[k]);
    out.throughput.push_back(x);
    out.reliability.push_back(r);
    out.conditional.push_back(r < 1e-12 ? std::nullopt : std::optional<double>(x / r));
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0) throw std::invalid_argument("invalid log grid");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto number = [&](const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad grid value: " + text);
    return v;
  };
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto a = text.find(':'), b = text.find(':', a + 1);
    const double lo = number(text.substr(0, a));
    const double hi = number(text.substr(a + 1, b - a - 1));
    const double n = number(text.substr(b + 1));
    if (n < 1 || n != std::floor(n)) throw std::invalid_argument("bad grid point count");
    out = log_grid(lo, hi, static_cast<std::size_t>(n));
  } else {
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) out.push_back(number(item));
  }
  if (out.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] >= 0.0) || (i > 0 && !(out[i] > out[i - 1]))) {
      throw std::invalid_argument("time grid must be strictly increasing and nonnegative");
    }
  }
  return out;
}

void write_generator(const Generator& q, std::ostream& out) {
  out << q.dimension() << ' ' << q.dimension() << ' ' << q.nonzeros() << '\n';
  for (const auto& t : q.triplets()) out << t.row << ' ' << t.col << ' ' << format_rate(t.value) << '\n';
}

void write_measures_csv(const MeasureSeries& series, std::ostream& out) {
  char buf[64];
  auto g = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  out << "t,throughput,reliability,conditional\n";
  for (std::size_t k = 0; k < series.time.size(); ++k) {
    out << g(series.time[k]) << ',' << g(series.throughput[k]) << ',' << g(series.reliability[k])
        << ',';
    if (series.conditional[k]) out << g(*series.conditional[k]);
    out << '\n';
  }
}

}  // namespace rwspt
