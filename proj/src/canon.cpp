#include "rwspt/canon.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <set>

namespace rwspt {

namespace {

using Pairs = std::vector<LabelPair>;

constexpr std::uint32_t kOwnIndex = std::numeric_limits<std::uint32_t>::max() - 1;
constexpr std::uint32_t kSiblingIndex = std::numeric_limits<std::uint32_t>::max();

/// Root-first comparison of the first `la` pairs of `a` against the first
/// `lb` pairs of `b`.
std::strong_ordering compare_head(const Pairs& a, std::size_t la, const Pairs& b, std::size_t lb) {
  return std::lexicographical_compare_three_way(
      std::make_reverse_iterator(a.begin() + static_cast<std::ptrdiff_t>(la)), a.rend(),
      std::make_reverse_iterator(b.begin() + static_cast<std::ptrdiff_t>(lb)), b.rend());
}

struct ArcRef {
  std::size_t place;
  Multiplicity weight;
};

struct IndexedTransition {
  const Transition* source;
  Multiplicity count;
  std::array<std::vector<ArcRef>, 3> arcs;  // input, output, inhibitor
};

/// A transition seen from one sibling: the sibling's own index and the
/// indices of its peers are blanked out.
struct MaskedTransition {
  const TransitionTag* tag;
  Multiplicity count;
  std::array<std::vector<std::pair<Pairs, Multiplicity>>, 3> arcs;

  friend std::strong_ordering operator<=>(const MaskedTransition& a, const MaskedTransition& b) {
    if (auto c = *a.tag <=> *b.tag; c != 0) return c;
    for (std::size_t i = 0; i < 3; ++i) {
      auto c = std::lexicographical_compare_three_way(
          a.arcs[i].begin(), a.arcs[i].end(), b.arcs[i].begin(), b.arcs[i].end(),
          [](const auto& x, const auto& y) -> std::strong_ordering {
            if (auto k = compare_root_first(x.first, y.first); k != 0) return k;
            return x.second <=> y.second;
          });
      if (c != 0) return c;
    }
    return a.count <=> b.count;
  }
  friend bool operator==(const MaskedTransition& a, const MaskedTransition& b) {
    return (a <=> b) == 0;
  }
};

class Canonicalizer {
 public:
  Canonicalizer(const Net& net, const Marking& marking, bool with_net)
      : with_net_(with_net) {
    const auto& places = net.places();
    labels_.reserve(places.size());
    for (const auto& p : places) labels_.push_back(p.pairs());
    tokens_.assign(places.size(), 0);
    auto it = places.begin();
    for (const auto& [p, k] : marking) {
      it = std::lower_bound(it, places.end(), p);
      tokens_[static_cast<std::size_t>(it - places.begin())] = k;
    }
    if (with_net_) {
      incident_.resize(places.size());
      for (const auto& [t, k] : net.transitions()) {
        IndexedTransition it_rec{&t, k, {}};
        const std::array<const Marking*, 3> bags{&t.input, &t.output, &t.inhibitor};
        for (std::size_t a = 0; a < 3; ++a) {
          for (const auto& [p, w] : *bags[a]) {
            const auto id = static_cast<std::size_t>(
                std::lower_bound(places.begin(), places.end(), p) - places.begin());
            it_rec.arcs[a].push_back({id, w});
          }
        }
        const std::size_t tid = transitions_.size();
        for (const auto& arcs : it_rec.arcs) {
          for (const auto& arc : arcs) incident_[arc.place].push_back(tid);
        }
        transitions_.push_back(std::move(it_rec));
      }
      for (auto& v : incident_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
    }
  }

  void run() {
    std::size_t max_depth = 0;
    for (const auto& l : labels_) max_depth = std::max(max_depth, l.size());
    for (std::size_t d = max_depth; d-- > 0;) process_depth(d);
  }

  bool changed() const { return changed_; }

  Marking marking() const {
    std::vector<Marking::Entry> entries;
    for (std::size_t u = 0; u < labels_.size(); ++u) {
      if (tokens_[u] > 0) entries.emplace_back(Place(labels_[u]), tokens_[u]);
    }
    return Marking::from_entries(std::move(entries));
  }

  Net net() const {
    std::vector<Place> places;
    places.reserve(labels_.size());
    for (const auto& l : labels_) places.emplace_back(l);
    std::vector<Bag<Transition>::Entry> entries;
    entries.reserve(transitions_.size());
    for (const auto& it : transitions_) {
      Transition t{{}, {}, {}, it.source->tag};
      std::array<Marking*, 3> bags{&t.input, &t.output, &t.inhibitor};
      for (std::size_t a = 0; a < 3; ++a) {
        std::vector<Marking::Entry> arc_entries;
        for (const auto& arc : it.arcs[a]) arc_entries.emplace_back(places[arc.place], arc.weight);
        *bags[a] = Marking::from_entries(std::move(arc_entries));
      }
      entries.emplace_back(std::move(t), it.count);
    }
    return Net(Bag<Transition>::from_entries(std::move(entries)));
  }

 private:
  struct Sibling {
    std::uint32_t index;
    std::vector<std::size_t> members;  // in label order
    std::vector<std::size_t> marked;   // members holding tokens
    std::vector<MaskedTransition> net_signature;
  };

  static std::size_t position(const Pairs& l, std::size_t d) { return l.size() - 1 - d; }

  bool same_group(std::size_t a, std::size_t b, std::size_t d) const {
    const auto& la = labels_[a];
    const auto& lb = labels_[b];
    const auto qa = position(la, d);
    const auto qb = position(lb, d);
    if (la[qa].tag != lb[qb].tag) return false;
    return std::equal(la.begin() + static_cast<std::ptrdiff_t>(qa) + 1, la.end(),
                      lb.begin() + static_cast<std::ptrdiff_t>(qb) + 1);
  }

  void process_depth(std::size_t d) {
    std::vector<std::size_t> ids;
    for (std::size_t u = 0; u < labels_.size(); ++u) {
      if (labels_[u].size() > d) ids.push_back(u);
    }
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return compare_root_first(labels_[a], labels_[b]) < 0;
    });
    pending_.clear();
    std::size_t g = 0;
    while (g < ids.size()) {
      std::size_t end = g + 1;
      while (end < ids.size() && same_group(ids[g], ids[end], d)) ++end;
      process_group(std::vector<std::size_t>(ids.begin() + static_cast<std::ptrdiff_t>(g),
                                             ids.begin() + static_cast<std::ptrdiff_t>(end)),
                    d);
      g = end;
    }
    for (const auto& [u, index] : pending_) {
      auto& pair = labels_[u][position(labels_[u], d)];
      if (pair.index != index) {
        pair.index = index;
        changed_ = true;
      }
    }
  }

  void process_group(const std::vector<std::size_t>& members, std::size_t d) {
    std::vector<Sibling> sibs;
    for (auto u : members) {
      const auto index = labels_[u][position(labels_[u], d)].index;
      if (sibs.empty() || sibs.back().index != index) sibs.push_back(Sibling{index, {}, {}, {}});
      sibs.back().members.push_back(u);
      if (tokens_[u] > 0) sibs.back().marked.push_back(u);
    }
    if (sibs.size() == 1) {
      for (auto u : sibs.front().members) pending_.emplace_back(u, 0);
      return;
    }
    if (with_net_) compute_net_signatures(sibs, d);

    std::vector<std::size_t> order(sibs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return compare_siblings(sibs[a], sibs[b], d) < 0;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      for (auto u : sibs[order[rank]].members) {
        pending_.emplace_back(u, static_cast<std::uint32_t>(rank));
      }
    }
  }

  std::strong_ordering compare_siblings(const Sibling& a, const Sibling& b, std::size_t d) const {
    if (with_net_) {
      if (auto c = std::lexicographical_compare_three_way(
              a.net_signature.begin(), a.net_signature.end(), b.net_signature.begin(),
              b.net_signature.end());
          c != 0) {
        return c;
      }
    }
    const auto n = std::min(a.marked.size(), b.marked.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& la = labels_[a.marked[i]];
      const auto& lb = labels_[b.marked[i]];
      if (auto c = compare_head(la, position(la, d), lb, position(lb, d)); c != 0) return c;
      if (auto c = tokens_[a.marked[i]] <=> tokens_[b.marked[i]]; c != 0) return c;
    }
    // A block that ends early is followed by entries of a later sibling or a
    // later group, all of which are larger than the longer block's next entry.
    return b.marked.size() <=> a.marked.size();
  }

  void compute_net_signatures(std::vector<Sibling>& sibs, std::size_t d) {
    std::vector<std::size_t> owner(labels_.size(), sibs.size());
    for (std::size_t s = 0; s < sibs.size(); ++s) {
      for (auto u : sibs[s].members) owner[u] = s;
    }
    for (std::size_t s = 0; s < sibs.size(); ++s) {
      std::vector<std::size_t> touching;
      for (auto u : sibs[s].members) {
        touching.insert(touching.end(), incident_[u].begin(), incident_[u].end());
      }
      std::sort(touching.begin(), touching.end());
      touching.erase(std::unique(touching.begin(), touching.end()), touching.end());
      auto& sig = sibs[s].net_signature;
      for (auto tid : touching) {
        const auto& it = transitions_[tid];
        MaskedTransition mt{&it.source->tag, it.count, {}};
        for (std::size_t a = 0; a < 3; ++a) {
          for (const auto& arc : it.arcs[a]) {
            Pairs l = labels_[arc.place];
            if (owner[arc.place] < sibs.size()) {
              l[position(l, d)].index = owner[arc.place] == s ? kOwnIndex : kSiblingIndex;
            }
            mt.arcs[a].emplace_back(std::move(l), arc.weight);
          }
          std::sort(mt.arcs[a].begin(), mt.arcs[a].end(), [](const auto& x, const auto& y) {
            if (auto k = compare_root_first(x.first, y.first); k != 0) return k < 0;
            return x.second < y.second;
          });
        }
        sig.push_back(std::move(mt));
      }
      std::sort(sig.begin(), sig.end());
    }
  }

  bool with_net_;
  bool changed_ = false;
  std::vector<Pairs> labels_;
  std::vector<Multiplicity> tokens_;
  std::vector<IndexedTransition> transitions_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::pair<std::size_t, std::uint32_t>> pending_;
};

using GroupKey = std::pair<Pairs, std::string>;

std::map<GroupKey, std::set<std::uint32_t>> collect_groups(const System& s) {
  std::map<GroupKey, std::set<std::uint32_t>> groups;
  auto visit = [&](const Place& p) {
    const auto& pairs = p.pairs();
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      GroupKey key{Pairs(pairs.begin() + static_cast<std::ptrdiff_t>(q) + 1, pairs.end()),
                   pairs[q].tag};
      groups[key].insert(pairs[q].index);
    }
  };
  for (const auto& p : s.net().places()) visit(p);
  for (const auto& [p, k] : s.marking()) visit(p);
  return groups;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<SiblingGroup> sibling_groups(const System& s) {
  std::vector<SiblingGroup> out;
  for (const auto& [key, indices] : collect_groups(s)) {
    out.push_back(SiblingGroup{key.first, key.second, {indices.begin(), indices.end()}});
  }
  return out;
}

void IndexPermutation::set(const std::vector<LabelPair>& context, const std::string& tag,
                           Mapping mapping) {
  maps_[{context, tag}] = std::move(mapping);
}

Place IndexPermutation::apply(const Place& p) const {
  const auto& pairs = p.pairs();
  Pairs out = pairs;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    GroupKey key{Pairs(pairs.begin() + static_cast<std::ptrdiff_t>(q) + 1, pairs.end()),
                 pairs[q].tag};
    auto it = maps_.find(key);
    if (it == maps_.end()) continue;
    auto m = it->second.find(pairs[q].index);
    if (m != it->second.end()) out[q].index = m->second;
  }
  return Place(std::move(out));
}

Marking IndexPermutation::apply(const Marking& m) const {
  std::vector<Marking::Entry> entries;
  entries.reserve(m.support_size());
  for (const auto& [p, k] : m) entries.emplace_back(apply(p), k);
  return Marking::from_entries(std::move(entries));
}

Net IndexPermutation::apply(const Net& n) const {
  std::vector<Bag<Transition>::Entry> entries;
  for (const auto& [t, k] : n.transitions()) {
    entries.emplace_back(Transition{apply(t.input), apply(t.output), apply(t.inhibitor), t.tag}, k);
  }
  return Net(Bag<Transition>::from_entries(std::move(entries)));
}

System IndexPermutation::apply(const System& s) const {
  return System(apply(s.net()), apply(s.marking()));
}

IndexPermutation densifying_permutation(const System& s) {
  IndexPermutation perm;
  for (const auto& [key, indices] : collect_groups(s)) {
    IndexPermutation::Mapping m;
    std::uint32_t rank = 0;
    for (auto i : indices) m[i] = rank++;
    perm.set(key.first, key.second, std::move(m));
  }
  return perm;
}

IndexPermutation random_admissible_permutation(const System& s, std::mt19937_64& rng) {
  IndexPermutation perm;
  for (const auto& [key, indices] : collect_groups(s)) {
    std::vector<std::uint32_t> from(indices.begin(), indices.end());
    std::vector<std::uint32_t> to = from;
    std::shuffle(to.begin(), to.end(), rng);
    IndexPermutation::Mapping m;
    for (std::size_t i = 0; i < from.size(); ++i) m[from[i]] = to[i];
    perm.set(key.first, key.second, std::move(m));
  }
  return perm;
}

std::size_t admissible_permutation_count(const System& s) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  for (const auto& [key, indices] : collect_groups(s)) {
    for (std::size_t f = 2; f <= indices.size(); ++f) {
      if (total > kMax / f) return kMax;
      total *= f;
    }
  }
  return total;
}

System normalize(const System& s) {
  Canonicalizer c(s.net(), s.marking(), /*with_net=*/true);
  c.run();
  if (!c.changed()) return s;
  return System(c.net(), c.marking());
}

Marking normalize_marking(const Net& n, const Marking& m) {
  Canonicalizer c(n, m, /*with_net=*/false);
  c.run();
  if (!c.changed()) return m;
  return c.marking();
}

System brute_force_normal(const System& s, std::size_t bound) {
  const System dense = densifying_permutation(s).apply(s);
  if (admissible_permutation_count(dense) > bound) {
    throw PermutationBoundExceeded("brute-force normalization exceeds permutation bound");
  }
  const auto groups = sibling_groups(dense);
  std::vector<std::vector<std::uint32_t>> images;
  images.reserve(groups.size());
  for (const auto& g : groups) images.push_back(g.indices);

  System best = dense;
  while (true) {
    IndexPermutation perm;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      IndexPermutation::Mapping m;
      for (std::size_t i = 0; i < groups[g].indices.size(); ++i) {
        m[groups[g].indices[i]] = images[g][i];
      }
      perm.set(groups[g].context, groups[g].tag, std::move(m));
    }
    System candidate = perm.apply(dense);
    if (candidate < best) best = std::move(candidate);

    std::size_t g = groups.size();
    while (g > 0) {
      --g;
      if (std::next_permutation(images[g].begin(), images[g].end())) break;
      if (g == 0) return best;
    }
    if (groups.empty()) return best;
  }
}

}  // namespace rwspt
