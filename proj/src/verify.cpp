#include "rwspt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "rwspt/canon.hpp"

namespace rwspt {

CheckResult check_normalizer(const std::vector<System>& states, std::size_t bound) {
  CheckResult r;
  for (const auto& s : states) {
    ++r.checked;
    const System fast = normalize(s);
    const System slow = brute_force_normal(s, bound);
    if (!(fast == slow)) {
      r.passed = false;
      r.detail = "input:\n" + to_text(s) + "\nnormalize:\n" + to_text(fast) +
                 "\nbrute force:\n" + to_text(slow);
      return r;
    }
  }
  r.detail = std::to_string(r.checked) + " states agree";
  return r;
}

std::vector<std::uint32_t> class_partition(const TransitionSystem& ordinary,
                                           const TransitionSystem& quotient) {
  std::unordered_map<System, std::uint32_t, SystemHash> index;
  for (std::uint32_t i = 0; i < quotient.states.size(); ++i) index.emplace(quotient.states[i], i);
  std::vector<std::uint32_t> partition;
  partition.reserve(ordinary.states.size());
  for (const auto& s : ordinary.states) {
    auto it = index.find(normalize(s));
    if (it == index.end()) throw std::out_of_range("state class missing from quotient:\n" + to_text(s));
    partition.push_back(it->second);
  }
  return partition;
}

CheckResult check_lumpability(const Generator& ordinary, const std::vector<std::uint32_t>& partition,
                              double tol) {
  const auto report = check_strong_lumpability(ordinary, partition, tol);
  CheckResult r{report.lumpable, ordinary.dimension(), report.counterexample};
  if (r.passed) r.detail = std::to_string(ordinary.dimension()) + " states lumpable";
  return r;
}

CheckResult check_generators_equal(const Generator& a, const Generator& b, double tol) {
  CheckResult r;
  if (a.dimension() != b.dimension()) {
    r.passed = false;
    r.detail = "dimension " + std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension());
    return r;
  }
  double worst = 0.0;
  auto compare = [&](std::uint32_t i, std::uint32_t j) {
    const double d = std::abs(a.at(i, j) - b.at(i, j));
    worst = std::max(worst, d);
    if (d > tol && r.passed) {
      r.passed = false;
      char buf[160];
      std::snprintf(buf, sizeof buf, "entry (%u, %u): %.17g vs %.17g", i, j, a.at(i, j), b.at(i, j));
      r.detail = buf;
    }
  };
  for (const auto& t : a.triplets()) compare(t.row, t.col);
  for (const auto& t : b.triplets()) compare(t.row, t.col);
  for (std::uint32_t i = 0; i < a.dimension(); ++i) compare(i, i);
  r.checked = a.nonzeros() + b.nonzeros() + a.dimension();
  if (r.passed) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |diff| = %.3g", worst);
    r.detail = buf;
  }
  return r;
}

bool perturb_one_rate(TransitionSystem& ordinary, const std::vector<std::uint32_t>& partition) {
  std::unordered_map<std::uint32_t, std::size_t> class_size;
  for (auto c : partition) ++class_size[c];
  for (auto& e : ordinary.edges) {
    if (e.src != e.dst && class_size[partition[e.src]] > 1) {
      e.rate *= 2.0;
      return true;
    }
  }
  return false;
}

}  // namespace rwspt
