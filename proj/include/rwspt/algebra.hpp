#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwspt/net.hpp"

namespace rwspt {

class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tag sequence (innermost first) that a place label must match exactly,
/// indices ignored. `{"o", "PL"}` matches every `p(< "o" ; i > < "PL" ; j >)`.
struct TagPattern {
  std::vector<std::string> tags;

  TagPattern(std::initializer_list<std::string> t);
  explicit TagPattern(std::vector<std::string> t);

  bool matches(const Place& p) const;
};

/// K replicas of `n`, replica i nesting every non-shared place under
/// `< tag ; i >`. Transitions whose tag is in `shared_tags` are merged into a
/// single transition whose arc bags are the sums over all replicas.
Net repl_share(const Net& n, std::uint32_t replicas, const std::string& tag,
               const std::set<Place>& shared_places, const std::set<TransitionTag>& shared_tags);

/// Multiset union of the nets, sum of the markings.
System join(const System& a, const System& b);

/// `n` minus the transitions of `sub`; throws AlgebraError if `sub` is not
/// contained in `n`.
Net detach(const Net& n, const Net& sub);

/// Every place matching `pat` gets exactly `k` tokens. Throws AlgebraError if
/// no place of the net matches.
System set_mark(const System& s, const TagPattern& pat, Multiplicity k);
System set_mark(const Net& n, const TagPattern& pat, Multiplicity k);

/// Places whose innermost tag equals `tag`.
Marking match_tag(const Marking& m, const std::string& tag);

/// Places whose label contains `pair` at any level.
Marking subag(const Marking& m, const LabelPair& pair);

/// Smallest index i such that no place of `n` carries `< tag ; i >`.
std::uint32_t min_index_not_in(const Net& n, const std::string& tag);

/// Transitions touching (by any arc) a place whose label contains `pair`.
Net subnet_by_pair(const Net& n, const LabelPair& pair);

}  // namespace rwspt
