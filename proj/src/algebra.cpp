#include "rwspt/algebra.hpp"

#include <algorithm>

namespace rwspt {

namespace {

Marking relabel(const Marking& bag, const std::set<Place>& shared, const LabelPair& pair) {
  std::vector<Marking::Entry> entries;
  entries.reserve(bag.support_size());
  for (const auto& [p, k] : bag) {
    entries.emplace_back(shared.count(p) ? p : p.nested_in(pair), k);
  }
  return Marking::from_entries(std::move(entries));
}

bool touches(const Transition& t, const LabelPair& pair) {
  for (const auto* bag : {&t.input, &t.output, &t.inhibitor}) {
    for (const auto& [p, k] : *bag) {
      if (p.contains(pair)) return true;
    }
  }
  return false;
}

}  // namespace

TagPattern::TagPattern(std::initializer_list<std::string> t) : TagPattern(std::vector<std::string>(t)) {}

TagPattern::TagPattern(std::vector<std::string> t) : tags(std::move(t)) {
  if (tags.empty()) throw AlgebraError("tag pattern must be non-empty");
}

bool TagPattern::matches(const Place& p) const {
  const auto& pairs = p.pairs();
  if (pairs.size() != tags.size()) return false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (pairs[i].tag != tags[i]) return false;
  }
  return true;
}

Net repl_share(const Net& n, std::uint32_t replicas, const std::string& tag,
               const std::set<Place>& shared_places, const std::set<TransitionTag>& shared_tags) {
  if (replicas == 0) throw AlgebraError("repl_share needs at least one replica");
  validate_tag(tag);
  for (const auto& p : shared_places) {
    if (!n.has_place(p)) throw AlgebraError("shared place not in net: " + to_text(p));
  }
  for (const auto& st : shared_tags) {
    const bool used = std::any_of(n.transitions().begin(), n.transitions().end(),
                                  [&](const auto& e) { return e.first.tag == st; });
    if (!used) throw AlgebraError("shared tag not in net: " + to_text(st));
  }

  std::vector<Bag<Transition>::Entry> out;
  for (const auto& [t, k] : n.transitions()) {
    if (shared_tags.count(t.tag)) {
      Transition merged{{}, {}, {}, t.tag};
      for (std::uint32_t i = 0; i < replicas; ++i) {
        const LabelPair pair{tag, i};
        merged.input += relabel(t.input, shared_places, pair);
        merged.output += relabel(t.output, shared_places, pair);
        merged.inhibitor += relabel(t.inhibitor, shared_places, pair);
      }
      out.emplace_back(std::move(merged), k);
    } else {
      for (std::uint32_t i = 0; i < replicas; ++i) {
        const LabelPair pair{tag, i};
        out.emplace_back(Transition{relabel(t.input, shared_places, pair),
                                    relabel(t.output, shared_places, pair),
                                    relabel(t.inhibitor, shared_places, pair), t.tag},
                         k);
      }
    }
  }
  return Net(Bag<Transition>::from_entries(std::move(out)));
}

System join(const System& a, const System& b) {
  if (b.net().empty() && b.marking().empty()) return a;
  if (a.net().empty() && a.marking().empty()) return b;
  return System(Net(a.net().transitions() + b.net().transitions()), a.marking() + b.marking());
}

Net detach(const Net& n, const Net& sub) {
  try {
    return Net(n.transitions() - sub.transitions());
  } catch (const BagUnderflow&) {
    throw AlgebraError("detach: subnet not contained in net");
  }
}

System set_mark(const System& s, const TagPattern& pat, Multiplicity k) {
  Marking m = s.marking();
  bool any = false;
  for (const auto& p : s.net().places()) {
    if (pat.matches(p)) {
      m.set(p, k);
      any = true;
    }
  }
  if (!any) throw AlgebraError("set_mark: no place matches the pattern");
  return System(s.net_ptr(), std::move(m));
}

System set_mark(const Net& n, const TagPattern& pat, Multiplicity k) {
  return set_mark(System(n, Marking{}), pat, k);
}

Marking match_tag(const Marking& m, const std::string& tag) {
  return m.filter([&](const Place& p) { return p.innermost().tag == tag; });
}

Marking subag(const Marking& m, const LabelPair& pair) {
  return m.filter([&](const Place& p) { return p.contains(pair); });
}

std::uint32_t min_index_not_in(const Net& n, const std::string& tag) {
  std::vector<std::uint32_t> used;
  for (const auto& p : n.places()) {
    for (const auto& pair : p.pairs()) {
      if (pair.tag == tag) used.push_back(pair.index);
    }
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::uint32_t i = 0;
  for (auto u : used) {
    if (u != i) break;
    ++i;
  }
  return i;
}

Net subnet_by_pair(const Net& n, const LabelPair& pair) {
  std::vector<Bag<Transition>::Entry> keep;
  for (const auto& e : n.transitions()) {
    if (touches(e.first, pair)) keep.push_back(e);
  }
  return Net(Bag<Transition>::from_sorted(std::move(keep)));
}

}  // namespace rwspt
