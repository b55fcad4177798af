#include <doctest.h>

#include "rwspt/algebra.hpp"
#include "rwspt/ftps.hpp"

using namespace rwspt;

namespace {

Place leaf(const std::string& tag, std::uint32_t i = 0) { return Place{{tag, i}}; }

const Transition* find_tag(const Net& n, const std::string& tag) {
  for (const auto& [t, k] : n.transitions()) {
    if (t.tag.text == tag) return &t;
  }
  return nullptr;
}

std::size_t count_tag(const Net& n, const std::string& tag) {
  std::size_t c = 0;
  for (const auto& [t, k] : n.transitions()) {
    if (t.tag.text == tag) c += k;
  }
  return c;
}

}  // namespace

TEST_CASE("replication nests non-shared places and merges shared tags") {
  const Net pl = ftps::production_line(2);
  // ld and as merge into one transition each, ln and ft are replicated.
  CHECK(pl.transitions().card() == 6);
  CHECK(count_tag(pl, "ld") == 1);
  CHECK(count_tag(pl, "as") == 1);
  CHECK(count_tag(pl, "ln") == 2);
  CHECK(count_tag(pl, "ft") == 2);

  const Transition* ld = find_tag(pl, "ld");
  REQUIRE(ld);
  CHECK(ld->input == Marking{{ftps::warehouse(), 2}});
  CHECK(ld->output == Marking{{Place{{"w", 0}, {"L", 0}}, 1}, {Place{{"w", 0}, {"L", 1}}, 1}});

  // The fault trigger is shared between the branches of a line.
  for (const auto& [t, k] : pl.transitions()) {
    if (t.tag.text == "ft") CHECK(t.input == Marking{{leaf("o"), 1}});
  }
}

TEST_CASE("nested replication") {
  const Net n = ftps::npl(2, 2);
  CHECK(n.transitions().card() == 12);
  CHECK(n.has_place(Place{{"w", 0}, {"L", 1}, {"PL", 1}}));
  CHECK(n.has_place(Place{{"o", 0}, {"PL", 0}}));
  CHECK(n.has_place(ftps::warehouse()));
  CHECK_FALSE(n.has_place(Place{{"s", 0}, {"PL", 0}}));
}

TEST_CASE("replication input validation") {
  const Net c = ftps::cycle();
  CHECK_THROWS_AS(repl_share(c, 0, "L", {}, {}), AlgebraError);
  CHECK_THROWS_AS(repl_share(c, 2, "L", {leaf("nowhere")}, {}), AlgebraError);
  CHECK_THROWS_AS(repl_share(c, 2, "L", {}, {TransitionTag("zz", 0, 1.0)}), AlgebraError);
  CHECK_THROWS_AS(repl_share(c, 2, "bad tag", {}, {}), InvalidLabel);
  // One replica nests everything but changes nothing else.
  CHECK(repl_share(c, 1, "L", {}, {}).transitions().card() == 4);
}

TEST_CASE("join adds nets and markings") {
  const Place p = leaf("p"), q = leaf("q");
  const Transition t{Marking{{p, 1}}, Marking{{q, 1}}, {}, {"t", 0, 1.0}};
  const System a(Net{t}, Marking{{p, 1}});
  const System joined = join(a, a);
  CHECK(joined.net().transitions()[t] == 2);
  CHECK(joined.marking()[p] == 2);
  CHECK(join(a, System()) == a);
  CHECK(join(System(), a) == a);
}

TEST_CASE("detach removes a contained subnet") {
  const Net n = ftps::npl(2, 2);
  const Net pl0 = subnet_by_pair(n, {"PL", 0});
  CHECK(pl0.transitions().card() == 6);
  const Net rest = detach(n, pl0);
  CHECK(rest.transitions().card() == 6);
  for (const auto& p : rest.places()) CHECK_FALSE(p.contains({"PL", 0}));
  CHECK_THROWS_AS(detach(pl0, n), AlgebraError);
  CHECK(detach(n, n).empty());
}

TEST_CASE("set_mark assigns every matching place") {
  const Net n = ftps::npl(2, 2);
  const System s = set_mark(n, TagPattern{"w", "L", "PL"}, 3);
  CHECK(s.marking().support_size() == 4);
  CHECK(s.marking().card() == 12);
  const System zero = set_mark(s, TagPattern{"w", "L", "PL"}, 0);
  CHECK(zero.marking().empty());
  CHECK_THROWS_AS(set_mark(n, TagPattern{"w", "PL"}, 1), AlgebraError);
  CHECK_THROWS_AS(TagPattern(std::vector<std::string>{}), AlgebraError);
}

TEST_CASE("match_tag and subag") {
  const Marking m{{Place{{"w", 0}, {"L", 0}, {"PL", 1}}, 2},
                  {Place{{"a", 0}, {"L", 1}, {"PL", 1}}, 1},
                  {Place{{"w", 0}, {"L", 0}, {"PL", 0}}, 1},
                  {ftps::warehouse(), 4}};
  CHECK(match_tag(m, "w").card() == 3);
  CHECK(match_tag(m, "a").card() == 1);
  CHECK(match_tag(m, "L").empty());  // only the innermost tag counts
  CHECK(subag(m, {"PL", 1}).card() == 3);
  CHECK(subag(m, {"L", 0}).card() == 3);
  CHECK(subag(m, {"PL", 7}).empty());
}

TEST_CASE("min_index_not_in finds the first gap") {
  const Net n = ftps::npl(3, 2);
  CHECK(min_index_not_in(n, "PL") == 3);
  CHECK(min_index_not_in(n, "fPL") == 0);
  const Net gap = detach(n, subnet_by_pair(n, {"PL", 1}));
  CHECK(min_index_not_in(gap, "PL") == 1);
  CHECK(min_index_not_in(Net{}, "PL") == 0);
}
