#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rwspt/net.hpp"

namespace rwspt {

class PermutationBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A maximal set of permutable siblings: all places whose label reads
/// `... < tag ; i > context` for a fixed context and tag, grouped by i.
struct SiblingGroup {
  std::vector<LabelPair> context;  ///< pairs to the right of the varying one
  std::string tag;
  std::vector<std::uint32_t> indices;  ///< sorted

  friend bool operator==(const SiblingGroup&, const SiblingGroup&) = default;
};

/// Sibling groups of every place referenced by the net or the marking, in
/// (context, tag) order.
std::vector<SiblingGroup> sibling_groups(const System& s);

/// Index renaming applied per sibling group. Group keys refer to labels as
/// they are before the renaming, so nested groups can be permuted
/// independently and the result is applied in one step.
class IndexPermutation {
 public:
  using Mapping = std::map<std::uint32_t, std::uint32_t>;

  void set(const std::vector<LabelPair>& context, const std::string& tag, Mapping mapping);
  bool empty() const { return maps_.empty(); }

  Place apply(const Place& p) const;
  Marking apply(const Marking& m) const;
  Net apply(const Net& n) const;
  System apply(const System& s) const;

 private:
  std::map<std::pair<std::vector<LabelPair>, std::string>, Mapping> maps_;
};

/// Order-preserving renaming of every group's indices onto 0..k-1.
IndexPermutation densifying_permutation(const System& s);

/// Uniformly random bijection of each group's index set onto itself.
IndexPermutation random_admissible_permutation(const System& s, std::mt19937_64& rng);

/// Number of admissible permutations (product of k! over groups), saturating
/// at SIZE_MAX.
std::size_t admissible_permutation_count(const System& s);

/// Total order on systems: net first, then marking.
inline std::strong_ordering system_order(const System& a, const System& b) { return a <=> b; }

/// Normal form: the system_order minimum over every admissible renaming of
/// sibling indices onto dense ranges 0..k-1.
///
/// Siblings are ranked bottom-up: once the groups nested inside a sibling are
/// in normal form, the sibling's token entries form a contiguous block of the
/// marking, and sorting blocks (a block that is a proper prefix of another
/// ranks after it) yields the minimal marking. Exact when the net satisfies
/// symmetric labeling, i.e. every sibling swap is a net automorphism; other
/// inputs still get a deterministic result.
System normalize(const System& s);

/// Marking part of normalize(System(n, m)) for a net already in normal form.
Marking normalize_marking(const Net& n, const Marking& m);

/// Reference normal form by exhaustive enumeration of admissible
/// permutations. Throws PermutationBoundExceeded above `bound` candidates.
System brute_force_normal(const System& s, std::size_t bound = 1'000'000);

}  // namespace rwspt
