#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "rwspt/ftps.hpp"
#include "rwspt/statespace.hpp"

using namespace rwspt;

namespace {

TransitionSystem run(std::uint32_t n, Mode mode, unsigned workers = 1) {
  const ftps::Params p{n, 2, 2};
  const auto rules = ftps::rules(p);
  ExploreOptions opts;
  opts.mode = mode;
  opts.workers = workers;
  return explore(ftps::npl_system(p), rules, opts);
}

std::string dump(const TransitionSystem& ts) {
  std::ostringstream out;
  write_states(ts, out);
  write_edges(ts, out);
  return out.str();
}

/// Every ordinary edge, grouped by (source class, target class, label), must
/// reproduce the quotient edge rate; checked from each ordinary source.
void check_soundness(const TransitionSystem& ordinary, const TransitionSystem& quotient) {
  std::unordered_map<System, std::uint32_t, SystemHash> qindex;
  for (std::uint32_t i = 0; i < quotient.states.size(); ++i) qindex.emplace(quotient.states[i], i);
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::string>, double> qrate;
  for (const auto& e : quotient.edges) qrate[{e.src, e.dst, e.label}] = e.rate;

  std::vector<std::uint32_t> cls(ordinary.states.size());
  std::set<std::uint32_t> image;
  for (std::uint32_t i = 0; i < ordinary.states.size(); ++i) {
    auto it = qindex.find(normalize(ordinary.states[i]));
    REQUIRE(it != qindex.end());
    cls[i] = it->second;
    image.insert(it->second);
  }
  CHECK(image.size() == quotient.states.size());  // surjective

  std::map<std::uint32_t, std::map<std::pair<std::uint32_t, std::string>, double>> out;
  for (const auto& e : ordinary.edges) out[e.src][{cls[e.dst], e.label}] += e.rate;
  for (std::uint32_t i = 0; i < ordinary.states.size(); ++i) {
    std::map<std::pair<std::uint32_t, std::string>, double> expected;
    for (const auto& [key, rate] : qrate) {
      if (std::get<0>(key) == cls[i]) expected[{std::get<1>(key), std::get<2>(key)}] = rate;
    }
    const auto& got = out[i];
    REQUIRE(got.size() == expected.size());
    for (const auto& [key, rate] : expected) {
      REQUIRE(got.count(key) == 1);
      CHECK(got.at(key) == doctest::Approx(rate).epsilon(1e-12));
    }
  }

  std::set<std::uint32_t> final_classes;
  for (auto f : final_states(ordinary)) final_classes.insert(cls[f]);
  const auto qf = final_states(quotient);
  CHECK(final_classes == std::set<std::uint32_t>(qf.begin(), qf.end()));
}

}  // namespace

TEST_CASE("single production line") {
  const auto q = run(1, Mode::quotient);
  CHECK(q.states.size() == 42);
  CHECK(final_states(q).size() == 2);
  const auto o = run(1, Mode::ordinary);
  CHECK(o.states.size() == 60);
  CHECK(final_states(o).size() == 2);
}

TEST_CASE("two production lines, quotient") {
  const auto q = run(2, Mode::quotient);
  CHECK(q.states.size() == 295);
  CHECK(final_states(q).size() == 2);
}

TEST_CASE("quotient states are normal and unique") {
  const auto q = run(2, Mode::quotient);
  std::set<std::string> seen;
  for (const auto& s : q.states) {
    CHECK(normalize(s) == s);
    CHECK(seen.insert(to_line(s)).second);
  }
  CHECK(q.states[0] == normalize(ftps::npl_system({2, 2, 2})));
}

TEST_CASE("ordinary mode keeps the initial state verbatim") {
  const auto o = run(2, Mode::ordinary);
  CHECK(o.states[0] == ftps::npl_system({2, 2, 2}));
  CHECK(o.states.size() >= run(2, Mode::quotient).states.size());
}

TEST_CASE("numbering follows BFS level then system order") {
  const auto q = run(2, Mode::quotient);
  for (std::size_t i = 1; i < q.states.size(); ++i) {
    REQUIRE(q.level[i - 1] <= q.level[i]);
    if (q.level[i - 1] == q.level[i]) CHECK(q.states[i - 1] < q.states[i]);
  }
  // Every edge goes at most one level deeper.
  for (const auto& e : q.edges) CHECK(q.level[e.dst] <= q.level[e.src] + 1);
}

TEST_CASE("edges are sorted and unique") {
  const auto o = run(2, Mode::ordinary);
  for (std::size_t i = 1; i < o.edges.size(); ++i) {
    const auto& a = o.edges[i - 1];
    const auto& b = o.edges[i];
    CHECK(std::tie(a.src, a.dst, a.label) < std::tie(b.src, b.dst, b.label));
  }
  for (const auto& e : o.edges) CHECK(e.rate > 0.0);
}

TEST_CASE("quotient soundness against the ordinary system") {
  for (std::uint32_t n : {1u, 2u}) {
    CAPTURE(n);
    check_soundness(run(n, Mode::ordinary), run(n, Mode::quotient));
  }
}

TEST_CASE("exports do not depend on the worker count") {
  CHECK(dump(run(2, Mode::quotient, 1)) == dump(run(2, Mode::quotient, 4)));
  CHECK(dump(run(1, Mode::ordinary, 1)) == dump(run(1, Mode::ordinary, 3)));
}

TEST_CASE("deadlocked initial state") {
  const Place p{{"p", 0}};
  const Net n{Transition{Marking{{p, 1}}, Marking{}, {}, {"t", 0, 1.0}}};
  const auto ts = explore(System(n, Marking{}), {}, {});
  CHECK(ts.states.size() == 1);
  CHECK(final_states(ts) == std::vector<std::uint32_t>{0});
}

TEST_CASE("self-loops are edges") {
  const Place p{{"p", 0}};
  const Net n{Transition{Marking{{p, 1}}, Marking{{p, 1}}, {}, {"t", 0, 1.5}}};
  const auto ts = explore(System(n, Marking{{p, 1}}), {}, {});
  REQUIRE(ts.edges.size() == 1);
  CHECK(ts.edges[0].src == 0);
  CHECK(ts.edges[0].dst == 0);
  CHECK(final_states(ts).empty());
}

TEST_CASE("parallel instances merge into one edge") {
  const Place p{{"p", 0}}, q{{"q", 0}};
  const Transition t{Marking{{p, 1}}, Marking{{q, 1}}, {}, {"t", 0, 0.5}};
  const auto ts = explore(System(Net(Bag<Transition>{{t, 2}}), Marking{{p, 1}}), {},
                          {Mode::ordinary, 10, 1, {}});
  REQUIRE(ts.edges.size() == 1);
  CHECK(ts.edges[0].rate == 1.0);
  std::ostringstream out;
  write_edges(ts, out);
  CHECK(out.str() == "0 1 t 1\n");
}

TEST_CASE("final-state search") {
  const auto q = run(2, Mode::quotient);
  const auto finals = final_states(q);
  CHECK(search_final(q, [](const System&) { return true; }) == finals);
  CHECK(search_final(q, [](const System&) { return false; }).empty());
  CHECK(search_final(q, ftps::absorbing_predicate(2)) == finals);
}

TEST_CASE("state budget") {
  ExploreOptions opts;
  opts.state_budget = 50;
  const auto rules = ftps::rules({2, 2, 2});
  try {
    explore(ftps::npl_system({2, 2, 2}), rules, opts);
    FAIL("expected the budget to be exceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.stats.states == 50);
    CHECK(e.stats.levels > 0);
  }
}

TEST_CASE("state check sees every stored state") {
  std::size_t calls = 0;
  ExploreOptions opts;
  opts.state_check = [&](const System&) { ++calls; };
  const auto rules = ftps::rules({1, 2, 2});
  const auto ts = explore(ftps::npl_system({1, 2, 2}), rules, opts);
  CHECK(calls == ts.states.size());
}

TEST_CASE("mode names") {
  CHECK(parse_mode("ordinary") == Mode::ordinary);
  CHECK(std::string(to_string(Mode::quotient)) == "quotient");
  CHECK_THROWS(parse_mode("lumped"));
}
