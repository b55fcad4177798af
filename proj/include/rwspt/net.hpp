#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rwspt/bag.hpp"

namespace rwspt {

class InvalidLabel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotEnabled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSystem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One level of a structured place label: a textual tag and a sibling index.
struct LabelPair {
  std::string tag;
  std::uint32_t index = 0;

  friend bool operator==(const LabelPair&, const LabelPair&) = default;
  friend auto operator<=>(const LabelPair&, const LabelPair&) = default;
};

/// Throws InvalidLabel if `tag` is empty or contains whitespace or a character
/// reserved by the text rendering.
void validate_tag(std::string_view tag);

/// A place, identified solely by its hierarchical label.
///
/// Pairs are stored innermost first, as rendered: `p(< "w" ; 0 > < "L" ; 1 >)`
/// is line 1's working place, and the last pair is the hierarchy root. Places
/// are ordered lexicographically from the root inwards, so every component
/// of the hierarchy occupies a contiguous range of any sorted place sequence.
class Place {
 public:
  Place() = default;
  explicit Place(std::vector<LabelPair> pairs);
  Place(std::initializer_list<LabelPair> pairs)
      : Place(std::vector<LabelPair>(pairs)) {}

  const std::vector<LabelPair>& pairs() const { return pairs_; }
  std::size_t depth() const { return pairs_.size(); }
  const LabelPair& innermost() const { return pairs_.front(); }
  const LabelPair& outermost() const { return pairs_.back(); }

  bool contains(const LabelPair& pair) const;

  /// Copy of this label nested under `pair` (appended as the new root).
  Place nested_in(const LabelPair& pair) const;

  std::size_t hash() const;

  friend bool operator==(const Place&, const Place&) = default;
  friend std::strong_ordering operator<=>(const Place& a, const Place& b);

 private:
  std::vector<LabelPair> pairs_;
};

/// Root-first lexicographic comparison of raw pair sequences, the order used
/// for Place.
std::strong_ordering compare_root_first(const std::vector<LabelPair>& a,
                                        const std::vector<LabelPair>& b);

using Marking = Bag<Place>;

struct TransitionTag {
  std::string text;
  std::uint32_t priority = 0;
  double rate = 1.0;  ///< firing rate if priority is 0, weight otherwise

  TransitionTag() = default;
  TransitionTag(std::string text, std::uint32_t priority, double rate);

  friend bool operator==(const TransitionTag&, const TransitionTag&) = default;
  friend std::strong_ordering operator<=>(const TransitionTag& a, const TransitionTag& b);
};

struct Transition {
  Marking input;
  Marking output;
  Marking inhibitor;
  TransitionTag tag;

  std::size_t hash() const;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend std::strong_ordering operator<=>(const Transition& a, const Transition& b);
};

}  // namespace rwspt

template <>
struct std::hash<rwspt::Place> {
  std::size_t operator()(const rwspt::Place& p) const { return p.hash(); }
};

template <>
struct std::hash<rwspt::Transition> {
  std::size_t operator()(const rwspt::Transition& t) const { return t.hash(); }
};

namespace rwspt {

/// A multiset of transitions. Immutable; the place set and hash are computed
/// once at construction.
class Net {
 public:
  using Entry = Bag<Transition>::Entry;

  Net() = default;
  explicit Net(Bag<Transition> transitions);
  Net(std::initializer_list<Transition> transitions);

  const Bag<Transition>& transitions() const { return transitions_; }
  const std::vector<Place>& places() const { return places_; }
  bool has_place(const Place& p) const;
  bool empty() const { return transitions_.empty(); }
  std::size_t hash() const { return hash_; }

  friend bool operator==(const Net& a, const Net& b) {
    return a.hash_ == b.hash_ && a.transitions_ == b.transitions_;
  }
  friend std::strong_ordering operator<=>(const Net& a, const Net& b) {
    return a.transitions_ <=> b.transitions_;
  }

 private:
  Bag<Transition> transitions_;
  std::vector<Place> places_;
  std::size_t hash_ = 0;
};

using NetPtr = std::shared_ptr<const Net>;

/// A net together with a marking over its places.
///
/// The net is held by shared pointer so that the many states produced by
/// firing share one structure. Construction rejects tokens on places the net
/// does not reference.
class System {
 public:
  System();
  System(NetPtr net, Marking marking);
  System(Net net, Marking marking);

  const Net& net() const { return *net_; }
  const NetPtr& net_ptr() const { return net_; }
  const Marking& marking() const { return marking_; }
  std::size_t hash() const { return hash_; }

  friend bool operator==(const System& a, const System& b) {
    return a.hash_ == b.hash_ && (a.net_ == b.net_ || *a.net_ == *b.net_) &&
           a.marking_ == b.marking_;
  }
  /// Net first, then marking; this is the total order normal forms minimize.
  friend std::strong_ordering operator<=>(const System& a, const System& b);

 private:
  NetPtr net_;
  Marking marking_;
  std::size_t hash_ = 0;
};

struct SystemHash {
  std::size_t operator()(const System& s) const { return s.hash(); }
};

// Firing semantics.

/// input <= m, and m(p) < inhibitor(p) for every p in the inhibitor's support.
bool has_concession(const Transition& t, const Marking& m);

/// Concession plus no higher-priority transition of the net having concession.
bool enabled(const Transition& t, const System& s);

/// m - input + output; throws NotEnabled without concession.
Marking fire(const Transition& t, const Marking& m);

/// Enabled transition entries of the net (with their multiplicity in the net),
/// in net order.
std::vector<const Net::Entry*> enab_set(const System& s);

/// True iff no transition of `n` has concession in `m`.
bool dead(const Net& n, const Marking& m);

// Canonical text rendering.

std::string to_text(const LabelPair& pair);
std::string to_text(const Place& p);
std::string to_text(const Marking& m);
std::string to_text(const TransitionTag& tag);
std::string to_text(const Transition& t);
/// One transition per line, separated by ` ;`; `emptyN` for the empty net.
std::string to_text(const Net& n);
/// Net, blank line, marking.
std::string to_text(const System& s);
/// Single-line variant used by state listings: `net || marking`.
std::string to_line(const System& s);

/// Shortest decimal text that round-trips the double.
std::string format_rate(double value);

}  // namespace rwspt
