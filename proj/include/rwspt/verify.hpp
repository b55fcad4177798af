#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwspt/ctmc.hpp"
#include "rwspt/statespace.hpp"

namespace rwspt {

struct CheckResult {
  bool passed = true;
  std::size_t checked = 0;
  std::string detail;  ///< first counterexample, or a summary when passed
};

/// normalize(s) == brute_force_normal(s) for every given state.
CheckResult check_normalizer(const std::vector<System>& states, std::size_t bound = 1'000'000);

/// Maps every ordinary state to the index of its normal form in `quotient`.
/// Throws std::out_of_range if some class is missing from the quotient.
std::vector<std::uint32_t> class_partition(const TransitionSystem& ordinary,
                                           const TransitionSystem& quotient);

CheckResult check_lumpability(const Generator& ordinary, const std::vector<std::uint32_t>& partition,
                              double tol);

/// Entrywise comparison, diagonals included.
CheckResult check_generators_equal(const Generator& a, const Generator& b, double tol);

/// Doubles the rate of the first edge leaving a state whose class has another
/// member, so the partition can no longer be lumpable. Returns false when no
/// such edge exists.
bool perturb_one_rate(TransitionSystem& ordinary, const std::vector<std::uint32_t>& partition);

}  // namespace rwspt
