#include "rwspt/ftps.hpp"

#include <algorithm>

namespace rwspt::ftps {

namespace {

Place leaf(const std::string& tag) { return Place{{tag, 0}}; }

Marking one(const Place& p, Multiplicity k = 1) { return Marking::from_entries({{p, k}}); }

Marking none() { return Marking{}; }

Net component(const Net& n, const std::string& tag, std::uint32_t i) {
  Net sub = subnet_by_pair(n, {tag, i});
  if (sub.empty()) {
    throw AlgebraError("no component < \"" + tag + "\" ; " + std::to_string(i) + " >");
  }
  return sub;
}

/// Marked fault places nested (at the root) under `tag`.
std::vector<Match> fault_tokens(const System& s, const std::string& tag) {
  std::vector<Match> out;
  for (const auto& [p, k] : s.marking()) {
    if (p.innermost().tag != "f" || p.outermost().tag != tag) continue;
    out.push_back(Match{{p}, {p.outermost().index}});
  }
  return out;
}

}  // namespace

TransitionTag load_tag() { return {tags::kLoad, 0, kLoadRate}; }
TransitionTag line_tag() { return {tags::kLine, 0, kLineRate}; }
TransitionTag assemble_tag() { return {tags::kAssemble, 0, kAssembleRate}; }
TransitionTag fault_tag() { return {tags::kFault, 0, kFaultRate}; }

Place warehouse() { return leaf("s"); }

Net cycle() {
  const Place s = warehouse(), w = leaf("w"), a = leaf("a"), o = leaf("o"), f = leaf("f");
  return Net{
      Transition{one(s), one(w), none(), load_tag()},
      Transition{one(w), one(a), one(f), line_tag()},
      Transition{one(a), one(s), none(), assemble_tag()},
      Transition{one(o), one(f), none(), fault_tag()},
  };
}

Net production_line(std::uint32_t k) {
  return repl_share(cycle(), k, tags::kBranch, {leaf("o"), warehouse()},
                    {assemble_tag(), load_tag()});
}

Net npl(std::uint32_t n, std::uint32_t k) {
  return repl_share(production_line(k), n, tags::kProductionLine, {warehouse()}, {});
}

System npl_system(const Params& p) {
  if (p.n == 0 || p.k == 0 || p.m == 0) throw std::invalid_argument("n, k and m must be positive");
  System s = set_mark(npl(p.n, p.k), TagPattern{"o", tags::kProductionLine}, 1);
  return set_mark(s, TagPattern{"s"}, p.k * p.m);
}

Net nominal_pl(const Net& n, std::uint32_t i) { return component(n, tags::kProductionLine, i); }

Net faulty_pl(const Net& n, std::uint32_t i) { return component(n, tags::kDegradedLine, i); }

System faulty_system(std::uint32_t i) {
  const LabelPair root{tags::kDegradedLine, i};
  const Place s = warehouse();
  const Place w = leaf("w").nested_in(root), a = leaf("a").nested_in(root);
  const Place o = leaf("o").nested_in(root), f = leaf("f").nested_in(root);
  Net net{
      Transition{one(s, 2), one(w, 2), none(), load_tag()},
      Transition{one(w), one(a), one(f), line_tag()},
      Transition{one(a, 2), one(s, 2), none(), assemble_tag()},
      Transition{one(o), one(f), none(), fault_tag()},
  };
  return System(std::move(net), one(o));
}

RewriteRule rule_rebuild() {
  RewriteRule r;
  r.tag = tags::kRebuild;
  r.rate = kRebuildRate;
  r.normalizes_result = true;
  r.matcher = [](const System& s) {
    std::vector<Match> out;
    for (auto& m : fault_tokens(s, tags::kProductionLine)) {
      const auto i = static_cast<std::uint32_t>(m.values[0]);
      if (dead(nominal_pl(s.net(), i), s.marking())) out.push_back(std::move(m));
    }
    return out;
  };
  r.applier = [](const System& s, const Match& m) {
    const LabelPair root{tags::kProductionLine, static_cast<std::uint32_t>(m.values[0])};
    const Marking rest = s.marking() - one(m.places[0]);
    const Marking pending = subag(rest, root);
    const Net remnant = detach(s.net(), subnet_by_pair(s.net(), root));

    System fresh = faulty_system(min_index_not_in(s.net(), tags::kDegradedLine));
    fresh = set_mark(fresh, TagPattern{"w", tags::kDegradedLine}, match_tag(pending, "w").card());
    fresh = set_mark(fresh, TagPattern{"a", tags::kDegradedLine}, match_tag(pending, "a").card());
    // The remnant alone may carry warehouse tokens without a warehouse
    // transition (last PL), so it is joined at the net/marking level.
    return System(Net(remnant.transitions() + fresh.net().transitions()),
                  (rest - pending) + fresh.marking());
  };
  return r;
}

RewriteRule rule_dismantle() {
  RewriteRule r;
  r.tag = tags::kDismantle;
  r.rate = kDismantleRate;
  r.matcher = [](const System& s) {
    std::vector<Match> out;
    for (auto& m : fault_tokens(s, tags::kDegradedLine)) {
      const Net sub = faulty_pl(s.net(), static_cast<std::uint32_t>(m.values[0]));
      if (dead(sub, s.marking()) && !detach(s.net(), sub).empty()) out.push_back(std::move(m));
    }
    return out;
  };
  r.applier = [](const System& s, const Match& m) {
    const LabelPair root{tags::kDegradedLine, static_cast<std::uint32_t>(m.values[0])};
    const Marking rest = s.marking() - one(m.places[0]);
    const Marking leftover = subag(rest, root);
    Marking marking = rest - leftover;
    marking.add(warehouse(), static_cast<Multiplicity>(leftover.card()));
    return System(detach(s.net(), subnet_by_pair(s.net(), root)), std::move(marking));
  };
  return r;
}

std::vector<RewriteRule> rules(const Params& p) {
  if (p.k != 2) return {};
  return {rule_rebuild(), rule_dismantle()};
}

std::uint64_t material(const Marking& m) {
  return m[warehouse()] + match_tag(m, "w").card() + match_tag(m, "a").card();
}

std::function<bool(const System&)> absorbing_predicate(std::uint32_t m) {
  return [m](const System& s) {
    std::uint32_t root = 0;
    bool seen = false;
    for (const auto& p : s.net().places()) {
      if (p == warehouse()) continue;
      if (p.outermost().tag != tags::kDegradedLine) return false;
      if (seen && p.outermost().index != root) return false;
      root = p.outermost().index;
      seen = true;
    }
    if (!seen) return false;
    const auto& mk = s.marking();
    return match_tag(mk, "w").card() + match_tag(mk, "a").card() == 2ull * m;
  };
}

}  // namespace rwspt::ftps
