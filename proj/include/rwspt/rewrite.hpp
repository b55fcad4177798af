#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rwspt/canon.hpp"
#include "rwspt/net.hpp"

namespace rwspt {

class InjectivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binding produced by a rule's matcher. Rules decide what the fields mean;
/// two matches are equal iff both sequences are.
struct Match {
  std::vector<Place> places;
  std::vector<std::uint64_t> values;

  friend bool operator==(const Match&, const Match&) = default;
  friend std::strong_ordering operator<=>(const Match& a, const Match& b) {
    if (auto c = std::lexicographical_compare_three_way(a.places.begin(), a.places.end(),
                                                        b.places.begin(), b.places.end());
        c != 0) {
      return c;
    }
    return std::lexicographical_compare_three_way(a.values.begin(), a.values.end(),
                                                  b.values.begin(), b.values.end());
  }
};

/// A conditional rewrite rule with an exponential rate. The matcher and
/// applier must be pure: exploration calls them concurrently.
struct RewriteRule {
  using Matcher = std::function<std::vector<Match>(const System&)>;
  using Applier = std::function<System(const System&, const Match&)>;

  std::string tag;
  std::uint32_t priority = 0;
  double rate = 0.0;
  Matcher matcher;
  Applier applier;
  /// The rule's right-hand side is itself normalized, so even unreduced
  /// exploration sees the normalized result.
  bool normalizes_result = false;
};

struct RuleApplication {
  Match match;
  System result;
};

/// One entry per match, in matcher order (sorted), with the raw result.
/// Throws InjectivityViolation if two matches produce the same raw system.
std::vector<RuleApplication> rule_app(const RewriteRule& rule, const System& s);

/// Cumulative rates keyed by (target, label). Rates are accumulated as counts
/// per distinct rate, so 4 x 0.001 sums to exactly 0.004.
template <class Key>
class AggregatedTargets {
 public:
  struct Entry {
    Key target;
    std::string label;
    double rate;
  };

  void add(const Key& target, const std::string& label, double rate, std::uint64_t count = 1) {
    rates_[{target, label}][rate] += count;
  }

  void merge(const AggregatedTargets& other) {
    for (const auto& [key, counts] : other.rates_) {
      auto& mine = rates_[key];
      for (const auto& [rate, n] : counts) mine[rate] += n;
    }
  }

  bool empty() const { return rates_.empty(); }
  std::size_t size() const { return rates_.size(); }

  /// Entries ordered by (target, label).
  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(rates_.size());
    for (const auto& [key, counts] : rates_) out.push_back({key.first, key.second, sum(counts)});
    return out;
  }

  /// Number of contributions with the given label.
  std::uint64_t count(const std::string& label) const {
    std::uint64_t n = 0;
    for (const auto& [key, counts] : rates_) {
      if (key.second != label) continue;
      for (const auto& [rate, k] : counts) n += k;
    }
    return n;
  }

  double total_rate() const {
    double total = 0.0;
    for (const auto& [key, counts] : rates_) total += sum(counts);
    return total;
  }

 private:
  static double sum(const std::map<double, std::uint64_t>& counts) {
    double s = 0.0;
    for (const auto& [rate, n] : counts) s += rate * static_cast<double>(n);
    return s;
  }

  std::map<std::pair<Key, std::string>, std::map<double, std::uint64_t>> rates_;
};

/// Rule results grouped by normal form; one contribution of rule.rate per match.
AggregatedTargets<System> rulexe(const RewriteRule& rule, const System& s);

/// Enabled firings grouped by normalized marking and transition tag text.
AggregatedTargets<Marking> fire_agg(const System& s);

struct AugmentedState {
  System state;
  AggregatedTargets<Marking> firing;
  AggregatedTargets<System> rewrites;
};

AugmentedState to_augmented(const System& s, std::span<const RewriteRule> rules);

}  // namespace rwspt
