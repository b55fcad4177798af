#include <doctest.h>

#include <map>
#include <random>
#include <tuple>

#include "rwspt/ftps.hpp"
#include "rwspt/rewrite.hpp"
#include "rwspt/statespace.hpp"

using namespace rwspt;

namespace {

/// Rule that matches every marked place and empties it.
RewriteRule drain_rule(bool collapse) {
  RewriteRule r;
  r.tag = "drain";
  r.rate = 0.25;
  r.matcher = [](const System& s) {
    std::vector<Match> out;
    for (const auto& [p, k] : s.marking()) out.push_back(Match{{p}, {}});
    return out;
  };
  r.applier = [collapse](const System& s, const Match& m) {
    if (collapse) return System(s.net_ptr(), Marking{});
    Marking rest = s.marking();
    rest.set(m.places[0], 0);
    return System(s.net_ptr(), rest);
  };
  return r;
}

System two_places(Multiplicity a, Multiplicity b) {
  const Place p0{{"p", 0}}, p1{{"p", 1}};
  const Net n{Transition{Marking{{p0, 1}}, Marking{}, {}, {"t", 0, 1.0}},
              Transition{Marking{{p1, 1}}, Marking{}, {}, {"t", 0, 1.0}}};
  return System(n, Marking::from_entries({{p0, a}, {p1, b}}));
}

/// (normalized target rendering, label) -> rate, from raw successors.
using Outcome = std::map<std::pair<std::string, std::string>, double>;

Outcome raw_outcome(const System& s, std::span<const RewriteRule> rules) {
  Outcome out;
  for (const auto* e : enab_set(s)) {
    const System next(s.net_ptr(), fire(e->first, s.marking()));
    out[{to_line(normalize(next)), e->first.tag.text}] += e->first.tag.rate * e->second;
  }
  for (const auto& r : rules) {
    for (const auto& app : rule_app(r, s)) out[{to_line(normalize(app.result)), r.tag}] += r.rate;
  }
  return out;
}

Outcome aggregated_outcome(const AugmentedState& aug) {
  Outcome out;
  for (const auto& e : aug.firing.entries()) {
    out[{to_line(System(aug.state.net_ptr(), e.target)), e.label}] += e.rate;
  }
  for (const auto& e : aug.rewrites.entries()) out[{to_line(e.target), e.label}] += e.rate;
  return out;
}

bool close(const Outcome& a, const Outcome& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || std::abs(ia->second - ib->second) > 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rule without matches") {
  const RewriteRule r = drain_rule(false);
  CHECK(rule_app(r, two_places(0, 0)).empty());
  CHECK(rulexe(r, two_places(0, 0)).empty());
}

TEST_CASE("rule applications are raw and ordered by match") {
  const auto apps = rule_app(drain_rule(false), two_places(1, 1));
  REQUIRE(apps.size() == 2);
  CHECK(apps[0].match.places[0] == Place{{"p", 0}});
  CHECK(apps[0].result.marking() == Marking{{Place{{"p", 1}}, 1}});  // not normalized
  CHECK(apps[1].result.marking() == Marking{{Place{{"p", 0}}, 1}});
}

TEST_CASE("two matches with the same raw result violate injectivity") {
  CHECK_THROWS_AS(rule_app(drain_rule(true), two_places(1, 1)), InjectivityViolation);
}

TEST_CASE("symmetric matches aggregate into one class") {
  const auto agg = rulexe(drain_rule(false), two_places(1, 1));
  const auto entries = agg.entries();
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].rate == 2 * 0.25);
  CHECK(entries[0].label == "drain");
  CHECK(entries[0].target.marking() == Marking{{Place{{"p", 0}}, 1}});
  CHECK(agg.count("drain") == 2);
}

TEST_CASE("rebuild and dismantle rates") {
  CHECK(ftps::rule_rebuild().rate == 0.005);
  CHECK(ftps::rule_dismantle().rate == 0.01);
  CHECK(ftps::rule_rebuild().tag == "r1");
  CHECK(ftps::rule_dismantle().tag == "r2");
}

TEST_CASE("firing aggregation in the initial state") {
  const System s = normalize(ftps::npl_system({2, 2, 2}));
  const auto agg = fire_agg(s);
  std::map<std::string, std::vector<double>> by_label;
  for (const auto& e : agg.entries()) by_label[e.label].push_back(e.rate);
  REQUIRE(by_label.size() == 2);
  REQUIRE(by_label["ld"].size() == 1);
  REQUIRE(by_label["ft"].size() == 1);
  CHECK(by_label["ld"][0] == 1.0);
  CHECK(by_label["ft"][0] == 0.004);
  CHECK(agg.count("ft") == 4);
}

TEST_CASE("augmented initial state has no rewrites") {
  const System s = normalize(ftps::npl_system({2, 2, 2}));
  const auto rules = ftps::rules({2, 2, 2});
  const auto aug = to_augmented(s, rules);
  CHECK(aug.rewrites.empty());
  CHECK(aug.firing.size() == 2);
  // Total outflow: two loads and four faults.
  CHECK(aug.firing.total_rate() == doctest::Approx(2 * 0.5 + 4 * 0.001).epsilon(1e-15));
}

TEST_CASE("single enabled transition and dead states") {
  const System one = two_places(1, 0);
  const auto agg = fire_agg(one);
  REQUIRE(agg.size() == 1);
  CHECK(agg.entries()[0].rate == 1.0);
  CHECK(fire_agg(two_places(0, 0)).empty());
}

TEST_CASE("aggregated targets sum repeated rates exactly") {
  AggregatedTargets<int> agg;
  for (int i = 0; i < 4; ++i) agg.add(7, "ft", 0.001);
  agg.add(7, "ld", 0.5, 2);
  const auto e = agg.entries();
  REQUIRE(e.size() == 2);
  CHECK(e[0].label == "ft");
  CHECK(e[0].rate == 0.004);
  CHECK(e[1].rate == 1.0);
}

TEST_CASE("aggregation matches raw successors and is invariant under permutation") {
  const ftps::Params p{2, 2, 2};
  const auto rules = ftps::rules(p);
  const auto ts = explore(ftps::npl_system(p), rules, {});
  std::mt19937_64 rng(3);
  std::size_t with_rewrites = 0;
  for (std::size_t i = 0; i < ts.states.size(); i += 3) {
    const System& s = ts.states[i];
    const auto aug = to_augmented(s, rules);
    if (!aug.rewrites.empty()) ++with_rewrites;
    const Outcome expected = raw_outcome(s, rules);
    REQUIRE(close(aggregated_outcome(aug), expected));
    // Match counts per rule equal the number of raw matches.
    for (const auto& r : rules) CHECK(aug.rewrites.count(r.tag) == rule_app(r, s).size());
    for (int k = 0; k < 3; ++k) {
      const System moved = random_admissible_permutation(s, rng).apply(s);
      CHECK(close(raw_outcome(moved, rules), expected));
    }
  }
  CHECK(with_rewrites > 0);
}
