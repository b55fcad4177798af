#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwspt {

using Multiplicity = std::uint32_t;

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4);
}

/// Raised when a bag difference would drive a multiplicity below zero.
class BagUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carries the element whose multiplicity underflowed.
template <class E>
class BagUnderflowOn : public BagUnderflow {
 public:
  explicit BagUnderflowOn(E element)
      : BagUnderflow("bag underflow"), element_(std::move(element)) {}
  const E& element() const { return element_; }

 private:
  E element_;
};

/// Finite multiset over a totally ordered domain.
///
/// Entries are kept sorted by element and never hold a zero multiplicity, so
/// structural equality coincides with multiset equality and iteration order
/// is deterministic. Bags compare lexicographically over their entries.
template <class E>
class Bag {
 public:
  using Entry = std::pair<E, Multiplicity>;
  using const_iterator = typename std::vector<Entry>::const_iterator;

  Bag() = default;

  Bag(std::initializer_list<Entry> entries)
      : Bag(from_entries(std::vector<Entry>(entries))) {}

  /// Builds a bag from arbitrary entries: sorts, merges duplicates, drops
  /// zero multiplicities.
  static Bag from_entries(std::vector<Entry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Bag out;
    out.entries_.reserve(entries.size());
    for (auto& e : entries) {
      if (e.second == 0) continue;
      if (!out.entries_.empty() && out.entries_.back().first == e.first) {
        out.entries_.back().second += e.second;
      } else {
        out.entries_.push_back(std::move(e));
      }
    }
    return out;
  }

  /// Adopts entries already sorted, unique and nonzero.
  static Bag from_sorted(std::vector<Entry> entries) {
    Bag out;
    out.entries_ = std::move(entries);
    return out;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  Multiplicity operator[](const E& e) const {
    auto it = find(e);
    return it == entries_.end() ? 0 : it->second;
  }

  bool contains(const E& e) const { return find(e) != entries_.end(); }

  /// Sum of all multiplicities.
  Multiplicity card() const {
    Multiplicity n = 0;
    for (const auto& e : entries_) n += e.second;
    return n;
  }

  /// Overwrites the multiplicity of `e`; zero removes it.
  void set(const E& e, Multiplicity k) {
    auto it = lower(e);
    if (it != entries_.end() && it->first == e) {
      if (k == 0) {
        entries_.erase(it);
      } else {
        it->second = k;
      }
    } else if (k != 0) {
      entries_.insert(it, Entry{e, k});
    }
  }

  void add(const E& e, Multiplicity k = 1) {
    if (k == 0) return;
    auto it = lower(e);
    if (it != entries_.end() && it->first == e) {
      it->second += k;
    } else {
      entries_.insert(it, Entry{e, k});
    }
  }

  /// Componentwise a(d) <= b(d) over the support of a.
  bool leq(const Bag& other) const {
    auto it = other.entries_.begin();
    for (const auto& [elem, k] : entries_) {
      while (it != other.entries_.end() && it->first < elem) ++it;
      if (it == other.entries_.end() || !(it->first == elem) || it->second < k) {
        return false;
      }
    }
    return true;
  }

  template <class Pred>
  Bag filter(Pred&& keep) const {
    Bag out;
    for (const auto& e : entries_) {
      if (keep(e.first)) out.entries_.push_back(e);
    }
    return out;
  }

  friend Bag operator+(const Bag& a, const Bag& b) {
    Bag out;
    out.entries_.reserve(a.entries_.size() + b.entries_.size());
    auto i = a.entries_.begin();
    auto j = b.entries_.begin();
    while (i != a.entries_.end() && j != b.entries_.end()) {
      if (i->first < j->first) {
        out.entries_.push_back(*i++);
      } else if (j->first < i->first) {
        out.entries_.push_back(*j++);
      } else {
        out.entries_.push_back(Entry{i->first, i->second + j->second});
        ++i;
        ++j;
      }
    }
    out.entries_.insert(out.entries_.end(), i, a.entries_.end());
    out.entries_.insert(out.entries_.end(), j, b.entries_.end());
    return out;
  }

  /// Throws BagUnderflowOn<E> unless b <= a.
  friend Bag operator-(const Bag& a, const Bag& b) {
    Bag out;
    out.entries_.reserve(a.entries_.size());
    auto i = a.entries_.begin();
    for (const auto& [elem, k] : b.entries_) {
      while (i != a.entries_.end() && i->first < elem) out.entries_.push_back(*i++);
      if (i == a.entries_.end() || !(i->first == elem) || i->second < k) {
        throw BagUnderflowOn<E>(elem);
      }
      if (i->second > k) out.entries_.push_back(Entry{elem, i->second - k});
      ++i;
    }
    out.entries_.insert(out.entries_.end(), i, a.entries_.end());
    return out;
  }

  Bag& operator+=(const Bag& other) { return *this = *this + other; }
  Bag& operator-=(const Bag& other) { return *this = *this - other; }

  friend bool operator==(const Bag& a, const Bag& b) { return a.entries_ == b.entries_; }

  friend std::strong_ordering operator<=>(const Bag& a, const Bag& b) {
    return std::lexicographical_compare_three_way(
        a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
        [](const Entry& x, const Entry& y) -> std::strong_ordering {
          if (auto c = x.first <=> y.first; c != 0) return c;
          return x.second <=> y.second;
        });
  }

 private:
  const_iterator find(const E& e) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e,
                               [](const Entry& x, const E& v) { return x.first < v; });
    return (it != entries_.end() && it->first == e) ? it : entries_.end();
  }

  typename std::vector<Entry>::iterator lower(const E& e) {
    return std::lower_bound(entries_.begin(), entries_.end(), e,
                            [](const Entry& x, const E& v) { return x.first < v; });
  }

  std::vector<Entry> entries_;
};

/// Renders `k . e + k . e + ...` in element order, `nilP` when empty.
template <class E, class Render>
std::string to_text(const Bag<E>& bag, Render&& render) {
  if (bag.empty()) return "nilP";
  std::string out;
  bool first = true;
  for (const auto& [elem, k] : bag) {
    if (!first) out += " + ";
    first = false;
    out += std::to_string(k);
    out += " . ";
    out += render(elem);
  }
  return out;
}

template <class E, class Hash = std::hash<E>>
std::size_t hash_bag(const Bag<E>& bag, Hash hash = {}) {
  std::size_t seed = bag.support_size();
  for (const auto& [elem, k] : bag) {
    hash_combine(seed, hash(elem));
    hash_combine(seed, k);
  }
  return seed;
}

}  // namespace rwspt
