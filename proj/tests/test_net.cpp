#include <doctest.h>

#include "rwspt/net.hpp"

using namespace rwspt;

namespace {

Place leaf(const std::string& tag, std::uint32_t i = 0) { return Place{{tag, i}}; }

Marking bag(std::initializer_list<Marking::Entry> e) { return Marking(e); }

}  // namespace

TEST_CASE("place labels are validated") {
  CHECK_THROWS_AS(Place(std::vector<LabelPair>{}), InvalidLabel);
  CHECK_THROWS_AS(Place({{"", 0}}), InvalidLabel);
  CHECK_THROWS_AS(Place({{"a b", 0}}), InvalidLabel);
  CHECK_THROWS_AS(Place({{"a;b", 0}}), InvalidLabel);
  CHECK_THROWS_AS(Place({{"x\"", 0}}), InvalidLabel);
  CHECK_NOTHROW(Place({{"fPL", 3}}));
}

TEST_CASE("place rendering lists pairs innermost first") {
  const Place p{{"w", 0}, {"L", 1}};
  CHECK(to_text(p) == "p(< \"w\" ; 0 > < \"L\" ; 1 >)");
  CHECK(p.innermost() == LabelPair{"w", 0});
  CHECK(p.outermost() == LabelPair{"L", 1});
  CHECK(leaf("w").nested_in({"L", 1}) == p);
}

TEST_CASE("places are ordered from the root pair inwards") {
  const Place a{{"z", 0}, {"L", 0}};
  const Place b{{"a", 0}, {"L", 1}};
  CHECK(a < b);  // root <L;0> decides before the inner tag
  CHECK(Place{{"L", 0}} < a);  // a prefix ranks first
  CHECK(leaf("a") < leaf("b"));
  CHECK(leaf("a", 0) < leaf("a", 1));
}

TEST_CASE("transition tags need a positive finite rate") {
  CHECK_THROWS(TransitionTag("t", 0, 0.0));
  CHECK_THROWS(TransitionTag("t", 0, -1.0));
  CHECK_THROWS(TransitionTag("t", 0, 1.0 / 0.0));
  CHECK_THROWS_AS(TransitionTag("t t", 0, 1.0), InvalidLabel);
}

TEST_CASE("transition rendering") {
  const Transition t{bag({{leaf("s"), 2}}), bag({{Place{{"w", 0}, {"L", 0}}, 1}}), Marking{},
                     TransitionTag("ld", 0, 0.5)};
  CHECK(to_text(t) ==
        "[2 . p(< \"s\" ; 0 >), 1 . p(< \"w\" ; 0 > < \"L\" ; 0 >), nilP] |-> << \"ld\", 0, 0.5 >>");
}

TEST_CASE("rates render in shortest round-trip form") {
  CHECK(format_rate(0.5) == "0.5");
  CHECK(format_rate(2.0) == "2");
  CHECK(format_rate(0.001) == "0.001");
  CHECK(format_rate(4 * 0.001) == "0.004");
}

TEST_CASE("systems reject tokens on places outside the net") {
  const Net n{Transition{bag({{leaf("p"), 1}}), bag({{leaf("q"), 1}}), {}, {"t", 0, 1.0}}};
  CHECK_NOTHROW(System(n, bag({{leaf("p"), 3}})));
  CHECK_THROWS_AS(System(n, bag({{leaf("r"), 1}})), InvalidSystem);
  CHECK(n.places() == std::vector<Place>{leaf("p"), leaf("q")});
}

TEST_CASE("firing with inhibitor arcs") {
  const Place w = leaf("w"), a = leaf("a"), f = leaf("f");
  const Transition line{bag({{w, 1}}), bag({{a, 1}}), bag({{f, 1}}), {"ln", 0, 0.1}};
  const Marking m = bag({{w, 2}});
  REQUIRE(has_concession(line, m));
  CHECK(fire(line, m) == bag({{w, 1}, {a, 1}}));
  const Marking blocked = bag({{w, 2}, {f, 1}});
  CHECK_FALSE(has_concession(line, blocked));
  CHECK_THROWS_AS(fire(line, blocked), NotEnabled);
  CHECK_THROWS_AS(fire(line, Marking{}), NotEnabled);

  // Inhibitor weight 2 tolerates one token.
  const Transition weak{bag({{w, 1}}), bag({{a, 1}}), bag({{f, 2}}), {"ln", 0, 0.1}};
  CHECK(has_concession(weak, bag({{w, 1}, {f, 1}})));
  CHECK_FALSE(has_concession(weak, bag({{w, 1}, {f, 2}})));
}

TEST_CASE("enabled set keeps only the highest priority level") {
  const Place p = leaf("p"), q = leaf("q");
  const Transition low{bag({{p, 1}}), bag({{q, 1}}), {}, {"low", 0, 1.0}};
  const Transition high{bag({{p, 1}}), bag({{q, 1}}), {}, {"high", 1, 1.0}};
  const Transition other{bag({{q, 1}}), bag({{p, 1}}), {}, {"back", 0, 1.0}};
  const System s(Net{low, high, other}, bag({{p, 1}}));
  const auto en = enab_set(s);
  REQUIRE(en.size() == 1);
  CHECK(en[0]->first.tag.text == "high");
  CHECK(enabled(high, s));
  CHECK_FALSE(enabled(low, s));

  const System only_q(Net{low, high, other}, bag({{q, 1}}));
  REQUIRE(enab_set(only_q).size() == 1);
  CHECK(enab_set(only_q)[0]->first.tag.text == "back");
}

TEST_CASE("dead nets") {
  const Place p = leaf("p");
  const Net n{Transition{bag({{p, 2}}), Marking{}, {}, {"t", 0, 1.0}}};
  CHECK(dead(n, bag({{p, 1}})));
  CHECK_FALSE(dead(n, bag({{p, 2}})));
  CHECK(dead(Net{}, Marking{}));
}

TEST_CASE("duplicate transitions are kept with multiplicity") {
  const Place p = leaf("p"), q = leaf("q");
  const Transition t{bag({{p, 1}}), bag({{q, 1}}), {}, {"t", 0, 1.0}};
  const Net n(Bag<Transition>{{t, 2}});
  CHECK(n.transitions()[t] == 2);
  const auto en = enab_set(System(n, bag({{p, 1}})));
  REQUIRE(en.size() == 1);
  CHECK(en[0]->second == 2);
  CHECK(to_text(n) == to_text(t) + " ;\n" + to_text(t));
}

TEST_CASE("system rendering") {
  const Place p = leaf("p");
  const Net n{Transition{bag({{p, 1}}), Marking{}, {}, {"t", 0, 1.0}}};
  const System s(n, bag({{p, 1}}));
  CHECK(to_text(s) == to_text(n) + "\n\n1 . p(< \"p\" ; 0 >)");
  CHECK(to_line(s) == to_text(n) + " || 1 . p(< \"p\" ; 0 >)");
  CHECK(to_text(Net{}) == "emptyN");
}

TEST_CASE("system equality and hashing ignore net identity") {
  const Place p = leaf("p");
  const Net n{Transition{bag({{p, 1}}), Marking{}, {}, {"t", 0, 1.0}}};
  const System a(n, bag({{p, 1}}));
  const System b(n, bag({{p, 1}}));
  CHECK(a.net_ptr() != b.net_ptr());
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK((a <=> b) == 0);
  CHECK(System(n, Marking{}) < a);
}
