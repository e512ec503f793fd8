#include "culturestream/selftest.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <random>

#include "culturestream/fact_measures.hpp"
#include "culturestream/network.hpp"
#include "culturestream/oracles.hpp"
#include "culturestream/practice_measures.hpp"

namespace culturestream {

namespace {

CultureVector vec(const std::map<std::string, std::int64_t>& counts) {
  CultureVector v;
  v.group = GroupId("g");
  v.window = 1;
  for (const auto& [k, c] : counts) v.add(Fact{FactKind::hashtag, k}, c);
  return v;
}

std::map<std::string, std::int64_t> random_counts(std::mt19937& rng, int max_facts, int max_count) {
  std::uniform_int_distribution<int> n_facts(1, max_facts), count(1, max_count), key(0, 3 * max_facts);
  std::map<std::string, std::int64_t> out;
  const int n = n_facts(rng);
  while (static_cast<int>(out.size()) < n) out[fmt::format("f{}", key(rng))] = count(rng);
  return out;
}

std::vector<std::string> keys_of(const RankedVector& r) {
  std::vector<std::string> out;
  for (const auto& [f, c] : r) out.push_back(f.key);
  return out;
}

RankedVector ranked(const std::vector<std::string>& keys) {
  RankedVector r;
  std::int64_t c = static_cast<std::int64_t>(keys.size());
  for (const std::string& k : keys) r.emplace_back(Fact{FactKind::hashtag, k}, c--);
  return r;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace

std::vector<SelftestCheck> selftest(const SelftestOptions& options) {
  std::vector<SelftestCheck> checks;
  auto run = [&](std::string name, const std::function<std::string()>& body) {
    SelftestCheck c{std::move(name), false, {}};
    try {
      c.detail = body();
      c.passed = c.detail.empty();
      if (c.passed) c.detail = "ok";
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    checks.push_back(std::move(c));
  };
  std::mt19937 rng(options.seed);
  const RboParams rbo{options.rbo_p};

  run("focus.single_fact", [] {
    double f = *focus(vec({{"a", 5}}));
    return f == 1.0 ? "" : fmt::format("F = {}", f);
  });
  run("focus.uniform", [] {
    double f = *focus(vec({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}));
    return near(f, 0.0, 1e-12) ? "" : fmt::format("F = {}", f);
  });
  run("focus.derived_3_1", [] {
    double f = *focus(vec({{"a", 3}, {"b", 1}}));
    return near(f, 0.1887, 1e-4) ? "" : fmt::format("F = {}, expected 0.1887", f);
  });
  run("focus.oracle_random", [&] {
    for (int i = 0; i < 200; ++i) {
      auto c = random_counts(rng, 30, 50);
      std::vector<std::int64_t> counts;
      for (const auto& [k, n] : c) counts.push_back(n);
      double got = *focus(vec(c)), want = oracle::focus(counts);
      if (!near(got, want, 1e-12)) return fmt::format("F = {} vs oracle {}", got, want);
      std::vector<std::int64_t> scaled;
      for (auto n : counts) scaled.push_back(n * 7);
      if (!near(*focus(scaled), got, 1e-12)) return std::string("not scale invariant");
    }
    return std::string();
  });
  run("cosine.derived", [] {
    double s = pair_similarity(vec({{"a", 1}, {"b", 1}}), vec({{"a", 1}}));
    return near(s, 0.7071, 1e-4) ? "" : fmt::format("S = {}, expected 0.7071", s);
  });
  run("cosine.identity_and_disjoint", [] {
    auto v = vec({{"a", 4}, {"b", 2}});
    double self = pair_similarity(v, v);
    double disjoint = pair_similarity(v, vec({{"c", 1}}));
    return near(self, 1.0, 1e-12) && disjoint == 0.0
               ? ""
               : fmt::format("self = {}, disjoint = {}", self, disjoint);
  });
  run("cosine.oracle_random", [&] {
    for (int i = 0; i < 200; ++i) {
      auto a = random_counts(rng, 20, 30), b = random_counts(rng, 20, 30);
      double got = pair_similarity(vec(a), vec(b)), want = oracle::cosine(a, b);
      if (!near(got, want, 1e-12)) return fmt::format("S = {} vs oracle {}", got, want);
      if (!near(got, pair_similarity(vec(b), vec(a)), 1e-15)) return std::string("asymmetric");
    }
    return std::string();
  });
  run("rbo.derived_swap", [&] {
    double r = reproduction(ranked({"a", "b"}), ranked({"b", "a"}), rbo);
    return near(r, 0.90, 1e-6) ? "" : fmt::format("R = {}, expected 0.90 (p = 0.9)", r);
  });
  run("rbo.identical", [&] {
    auto list = ranked({"a", "b", "c", "d"});
    double r = reproduction(list, list, rbo);
    return near(r, 1.0, 1e-12) ? "" : fmt::format("R = {}", r);
  });
  run("rbo.disjoint", [&] {
    double r = reproduction(ranked({"a", "b"}), ranked({"c", "d"}), rbo);
    return r == 0.0 ? "" : fmt::format("R = {}", r);
  });
  run("rbo.oracle_random", [&] {
    for (int i = 0; i < 100; ++i) {
      auto a = rank(vec(random_counts(rng, 15, 10))), b = rank(vec(random_counts(rng, 15, 10)));
      double got = reproduction(a, b, rbo), want = oracle::rbo(keys_of(a), keys_of(b), rbo.p);
      if (!near(got, want, 1e-9)) return fmt::format("R = {} vs oracle {}", got, want);
    }
    return std::string();
  });
  run("rbo.top10_weight", [&] {
    double w = rbo_depth_weight(rbo.p, 10);
    return near(w, 0.8556, 5e-4) ? "" : fmt::format("top-10 weight {} , expected 0.8556 (p = 0.9)", w);
  });
  run("institutionness.five_weeks", [] {
    FactSeries s;
    s.r = {5, 5, 5, 5, 5, 0, 0, 0, 0, 0, 0, 0, 0};
    s.d = {9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9};
    std::vector<std::optional<double>> h0(13, 1.0);
    int i = institutionness(s, h0);
    return i == 5 ? "" : fmt::format("I = {}", i);
  });
  run("institutionness.cap", [] {
    FactSeries s;
    s.r.assign(13, 100);
    s.d.assign(13, 200);
    std::vector<std::optional<double>> h0(13, 2.0);
    int i = institutionness(s, h0);
    return i == 13 ? "" : fmt::format("I = {}", i);
  });
  for (InstitutionVariant variant : {InstitutionVariant::literal, InstitutionVariant::normalized}) {
    run(fmt::format("institutionness.bruteforce_{}", to_string(variant)), [&, variant] {
      std::uniform_int_distribution<int> count(0, 50);
      std::uniform_real_distribution<double> rate(0.5, 6.0);
      for (int i = 0; i < 200; ++i) {
        FactSeries s;
        std::vector<std::optional<double>> h0;
        for (int t = 0; t < 13; ++t) {
          s.r.push_back(count(rng));
          s.d.push_back(s.r.back() + 10);
          h0.push_back(rate(rng));
        }
        int got = institutionness(s, h0, variant);
        int want = oracle::institutionness(s.r, h0, variant);
        if (got != want) return fmt::format("scan {} vs brute force {}", got, want);
      }
      return std::string();
    });
  }
  run("burst.derived", [] {
    FactSeries s;
    s.r = {1, 5};
    s.d = {10, 10};
    auto costs = burst_costs(s);
    double via_lgamma = costs[1].improvement();
    double closed = burst_improvement(5, 10, 0.3, 0.6);
    double product = oracle::burst_improvement(5, 10, 0.3, 0.6);
    if (!near(via_lgamma, 0.6675, 1e-3) || !near(closed, 0.6675, 1e-3) ||
        !near(product, 0.6675, 1e-3))
      return fmt::format("lgamma {}, closed form {}, product {}; expected 0.6675", via_lgamma,
                         closed, product);
    return std::string();
  });
  run("burst.closed_form_random", [&] {
    std::uniform_int_distribution<int> total(0, 60);
    for (int i = 0; i < 200; ++i) {
      FactSeries s;
      for (int t = 0; t < 13; ++t) {
        s.d.push_back(total(rng));
        s.r.push_back(std::uniform_int_distribution<int>(0, static_cast<int>(s.d.back()))(rng));
      }
      auto costs = burst_costs(s);
      if (costs.empty()) continue;
      auto [p0, p1] = burst_rates(s);
      for (int t = 0; t < 13; ++t) {
        if (s.d[t] == 0) continue;
        double a = costs[t].improvement(), b = burst_improvement(s.r[t], s.d[t], p0, p1);
        if (!near(a, b, 1e-9)) return fmt::format("lgamma {} vs closed form {}", a, b);
      }
    }
    return std::string();
  });
  run("burst.episode_runs", [] {
    // improvements (+,+,-,+): high share in windows 1, 2 and 4
    FactSeries s;
    s.r = {8, 8, 0, 8, 0, 0};
    s.d = {10, 10, 10, 10, 10, 10};
    auto eps = burst_episodes(s);
    if (eps.size() != 2 || eps[0].onset != 1 || eps[0].end != 2 || eps[1].onset != 4 ||
        eps[1].end != 4)
      return fmt::format("{} episodes", eps.size());
    return std::string();
  });
  run("average_rate.derived", [] {
    CultureSet set(WindowSpec{0, 10, 1});
    set.at({Practice::tagging, GroupId("g"), 1}).add(Fact{FactKind::hashtag, "a"}, 3);
    set.at({Practice::tagging, GroupId("g"), 1}).add(Fact{FactKind::hashtag, "b"}, 1);
    auto h0 = average_rates(set, Practice::tagging);
    return h0[0] && *h0[0] == 2.0 ? "" : std::string("h0 != 2");
  });
  run("network.density_and_homophily", [] {
    Roster roster;
    for (const char* u : {"a", "b", "c", "d", "e"}) roster.add(UserHandle(u), GroupId("x"));
    roster.add(UserHandle("f"), GroupId("y"));
    PracticeGraph g(Practice::mentioning);
    g.add_reference(roster, UserHandle("a"), UserHandle("b"));
    g.add_reference(roster, UserHandle("a"), UserHandle("c"));
    g.add_reference(roster, UserHandle("a"), UserHandle("d"));
    g.add_reference(roster, UserHandle("a"), UserHandle("f"));
    auto h = homophily(g);
    double hu = *h.total;
    std::set<UserHandle> scope{UserHandle("a"), UserHandle("b"), UserHandle("c"), UserHandle("e")};
    double d = *density(g, scope);
    if (!near(hu, 0.75, 1e-12) || !near(d, 2.0 / 12.0, 1e-12))
      return fmt::format("H = {}, D = {}", hu, d);
    return std::string();
  });
  return checks;
}

bool print_selftest(std::ostream& out, const std::vector<SelftestCheck>& checks) {
  bool all = true;
  for (const SelftestCheck& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) out << "  " << c.detail;
    out << '\n';
    all = all && c.passed;
  }
  out << fmt::format("{}/{} checks passed\n",
                     std::count_if(checks.begin(), checks.end(),
                                   [](const SelftestCheck& c) { return c.passed; }),
                     checks.size());
  return all;
}

}  // namespace culturestream
