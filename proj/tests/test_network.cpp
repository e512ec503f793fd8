#include <doctest.h>

#include <random>
#include <sstream>

#include "culturestream/network.hpp"
#include "test_helpers.hpp"

using namespace culturestream;
using doctest::Approx;

namespace {

UserHandle u(const char* name) { return UserHandle(name); }

Roster roster_of(std::initializer_list<std::pair<const char*, const char*>> members) {
  Roster r;
  for (auto [user, group] : members) r.add(UserHandle(user), GroupId(group));
  return r;
}

Transaction mention(const char* id, const char* from, const char* group,
                    std::initializer_list<const char*> targets, Practice p = Practice::mentioning) {
  Transaction t{id, UserHandle(from), GroupId(group), 0, p, {}};
  for (const char* x : targets) t.facts.push_back(Fact::make(fact_kind_for(p), x));
  return t;
}

std::set<UserHandle> scope(std::initializer_list<const char*> names) {
  std::set<UserHandle> out;
  for (const char* n : names) out.insert(UserHandle(n));
  return out;
}

}  // namespace

TEST_CASE("graph construction") {
  const Roster r = roster_of({{"a", "x"}, {"b", "x"}, {"c", "y"}, {"d", "y"}});
  SUBCASE("repeated retweets accumulate on one arc") {
    std::vector<Transaction> ts{mention("1", "a", "x", {"b"}, Practice::retweeting),
                                mention("2", "a", "x", {"b"}, Practice::retweeting),
                                mention("3", "a", "x", {"b"}, Practice::retweeting)};
    const PracticeGraph g = build_graph(ts, Practice::retweeting, r);
    REQUIRE(g.arcs().size() == 1);
    CHECK(g.arcs().at({u("a"), u("b")}) == 3);
  }
  SUBCASE("self mention adds no arc") {
    std::vector<Transaction> ts{mention("1", "a", "x", {"a"})};
    CHECK(build_graph(ts, Practice::mentioning, r).arcs().empty());
  }
  SUBCASE("4 users, 5 events, 1 self") {
    std::vector<Transaction> ts{mention("1", "a", "x", {"b"}), mention("2", "a", "x", {"c"}),
                                mention("3", "b", "x", {"c"}), mention("4", "c", "y", {"d"}),
                                mention("5", "d", "y", {"d"})};
    const PracticeGraph g = build_graph(ts, Practice::mentioning, r);
    CHECK(g.arcs().size() == 4);
    CHECK(g.total_weight() == 4);
    CHECK(g.nodes().size() == 4);
  }
  SUBCASE("other practices and non-roster targets are ignored") {
    std::vector<Transaction> ts{mention("1", "a", "x", {"b"}, Practice::retweeting),
                                mention("2", "a", "x", {"zed"})};
    CHECK(build_graph(ts, Practice::mentioning, r).arcs().empty());
  }
}

TEST_CASE("follow graph keeps unit weights") {
  const Roster r = roster_of({{"a", "x"}, {"b", "y"}});
  std::istringstream in("source,target\na,b\na,b\nb,a\nb,b\nzed,a\n");
  const auto edges = read_follow_edges(in);
  CHECK(edges.size() == 5);
  const PracticeGraph g = build_follow_graph(edges, r);
  CHECK(g.arcs().size() == 2);
  CHECK(g.arcs().at({u("a"), u("b")}) == 1);

  std::istringstream bad("from,to\na,b\n");
  CHECK_THROWS_AS(read_follow_edges(bad), DataError);
}

TEST_CASE("density") {
  const Roster r = roster_of({{"a", "x"}, {"b", "x"}, {"c", "x"}, {"d", "x"}});
  PracticeGraph complete(Practice::mentioning);
  for (const char* s : {"a", "b", "c"})
    for (const char* t : {"a", "b", "c"}) complete.add_reference(r, u(s), u(t));
  CHECK(*density(complete, scope({"a", "b", "c"})) == 1.0);

  PracticeGraph empty(Practice::mentioning);
  CHECK(*density(empty, scope({"a", "b", "c"})) == 0.0);
  CHECK_FALSE(density(empty, scope({"a"})).has_value());

  PracticeGraph two(Practice::mentioning);
  two.add_reference(r, u("a"), u("b"));
  two.add_reference(r, u("c"), u("d"));
  CHECK(*density(two, scope({"a", "b", "c", "d"})) == Approx(2.0 / 12.0));
}

TEST_CASE("degrees and weights") {
  const Roster r = roster_of({{"c", "x"}, {"l1", "x"}, {"l2", "x"}, {"l3", "y"}, {"iso", "y"}});
  PracticeGraph star(Practice::mentioning);
  for (const char* leaf : {"l1", "l2", "l3"}) star.add_reference(r, u("c"), u(leaf), 2);

  const auto center = degree_weight_stats(star, scope({"c"}));
  CHECK(center.k_out == 3.0);
  CHECK(center.w_out == 6.0);
  CHECK(center.k_in == 0.0);

  const auto iso = degree_weight_stats(star, scope({"iso"}));
  CHECK(iso.k_out == 0.0);
  CHECK(iso.k_in == 0.0);
  CHECK(iso.w_out == 0.0);
  CHECK(iso.w_in == 0.0);

  // group x without l3: arc c -> l3 leaves the scope
  const auto x_all = degree_weight_stats(star, scope({"c", "l1", "l2"}));
  const auto x_within = degree_weight_stats(star, scope({"c", "l1", "l2"}), {true});
  CHECK(x_all.k_out == Approx(1.0));
  CHECK(x_within.k_out == Approx(2.0 / 3.0));

  CHECK_THROWS_AS(degree_weight_stats(star, {}), std::invalid_argument);
}

TEST_CASE("handshake identity on the TOTAL row") {
  std::mt19937_64 rng(37);
  Roster r;
  for (int i = 0; i < 30; ++i) r.add(UserHandle("n" + std::to_string(i)), GroupId(i < 15 ? "x" : "y"));
  PracticeGraph g(Practice::retweeting);
  std::uniform_int_distribution<int> node(0, 29), w(1, 5);
  for (int k = 0; k < 200; ++k)
    g.add_reference(r, UserHandle("n" + std::to_string(node(rng))),
                    UserHandle("n" + std::to_string(node(rng))), w(rng));
  const std::vector<GroupId> groups{GroupId("x"), GroupId("y")};
  const auto stats = network_stats(g, groups);
  REQUIRE(stats.size() == 3);
  const auto& total = stats.back();
  CHECK(total.group == kTotalGroup);
  REQUIRE(total.degrees);
  CHECK(total.degrees->k_out == Approx(total.degrees->k_in));
  CHECK(total.degrees->w_out == Approx(total.degrees->w_in));
  CHECK(total.degrees->w_out * static_cast<double>(total.members) ==
        Approx(static_cast<double>(g.total_weight())));
}

TEST_CASE("homophily") {
  const Roster r = roster_of({{"a", "x"}, {"b", "x"}, {"c", "x"}, {"d", "x"}, {"e", "y"}, {"f", "y"}});
  SUBCASE("all within group") {
    PracticeGraph g(Practice::mentioning);
    g.add_reference(r, u("a"), u("b"));
    g.add_reference(r, u("e"), u("f"));
    CHECK(*homophily(g).total == 1.0);
  }
  SUBCASE("all across groups") {
    PracticeGraph g(Practice::mentioning);
    g.add_reference(r, u("a"), u("e"));
    g.add_reference(r, u("f"), u("b"), 3);
    CHECK(*homophily(g).total == 0.0);
  }
  SUBCASE("3 in-group and 1 out-group reference") {
    PracticeGraph g(Practice::mentioning);
    for (const char* t : {"b", "c", "d", "e"}) g.add_reference(r, u("a"), u(t));
    const std::vector<GroupId> groups{GroupId("x"), GroupId("y")};
    const Homophily h = homophily(g, groups);
    CHECK(*h.total == Approx(0.75));
    CHECK(*h.by_group.at(GroupId("x")) == Approx(0.75));
    CHECK_FALSE(h.by_group.at(GroupId("y")).has_value());
  }
  SUBCASE("averaged over senders, not arcs") {
    PracticeGraph g(Practice::mentioning);
    g.add_reference(r, u("a"), u("b"), 9);
    g.add_reference(r, u("c"), u("e"), 1);
    CHECK(*homophily(g).total == Approx(0.5));
  }
}

TEST_CASE("network csv layout") {
  const Roster r = roster_of({{"a", "x"}, {"b", "y"}});
  PracticeGraph g(Practice::mentioning);
  g.add_reference(r, u("a"), u("b"), 2);
  std::ostringstream edges;
  write_edges_csv(edges, g);
  CHECK(edges.str() == "source,target,weight,source_group,target_group\na,b,2,x,y\n");

  const std::vector<GroupId> groups{GroupId("x"), GroupId("y")};
  std::ostringstream stats;
  write_network_stats_csv(stats, network_stats(g, groups));
  CHECK(stats.str() ==
        "group,members,D,k_out,k_in,w_out,w_in,H\n"
        "x,1,,1,0,2,0,0\n"
        "y,1,,0,1,0,2,\n"
        "TOTAL,2,0.5,0.5,0.5,1,1,0\n");
}
