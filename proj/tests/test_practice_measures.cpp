#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "culturestream/oracles.hpp"
#include "culturestream/practice_measures.hpp"
#include "test_helpers.hpp"

using namespace culturestream;
using doctest::Approx;
using testing::tag;
using testing::vec;

namespace {

std::vector<std::string> keys_of(const RankedVector& r) {
  std::vector<std::string> out;
  for (const auto& [f, n] : r) out.push_back(f.key);
  return out;
}

std::map<std::string, std::int64_t> as_map(const CultureVector& v) {
  std::map<std::string, std::int64_t> out;
  for (const auto& [f, n] : v.counts) out[f.key] = n;
  return out;
}

RankedVector ranked(std::initializer_list<const char*> keys) {
  RankedVector out;
  std::int64_t n = static_cast<std::int64_t>(keys.size());
  for (const char* k : keys) out.emplace_back(tag(k), n--);
  return out;
}

CultureSet three_groups(const CultureVector& a, const CultureVector& b, const CultureVector& c) {
  CultureSet set(WindowSpec{0, 10, 1});
  int i = 0;
  for (const CultureVector* v : {&a, &b, &c}) {
    CultureVector& slot = set.at({Practice::tagging, GroupId(std::string(1, char('a' + i++))), 1});
    for (const auto& [f, n] : v->counts) slot.add(f, n);
  }
  return set;
}

}  // namespace

TEST_CASE("focus examples") {
  CHECK(*focus(vec({{"a", 5}})) == 1.0);
  CHECK(*focus(vec({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}})) == Approx(0.0).epsilon(1e-12));
  CHECK(*focus(vec({{"a", 3}, {"b", 1}})) == Approx(0.1887).epsilon(1e-4));
  CHECK_FALSE(focus(CultureVector{}).has_value());
}

TEST_CASE("focus properties") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const CultureVector v = testing::random_vector(rng);
    std::vector<std::int64_t> counts;
    for (const auto& [f, n] : v.counts) counts.push_back(n);
    const double f = *focus(counts);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f == Approx(oracle::focus(counts)).epsilon(1e-9));

    // scale invariance
    std::vector<std::int64_t> scaled = counts;
    for (auto& n : scaled) n *= 7;
    CHECK(*focus(scaled) == Approx(f).epsilon(1e-9));

    // moving a reference from a smaller onto the largest count increases focus
    if (counts.size() >= 2) {
      auto hi = std::max_element(counts.begin(), counts.end());
      auto lo = std::min_element(counts.begin(), counts.end());
      if (hi != lo && *lo > 1) {
        std::vector<std::int64_t> sharper = counts;
        ++sharper[hi - counts.begin()];
        --sharper[lo - counts.begin()];
        CHECK(*focus(sharper) >= f - 1e-12);
      }
    }
  }
}

TEST_CASE("pair similarity examples") {
  const CultureVector v = vec({{"a", 2}, {"b", 3}});
  CHECK(pair_similarity(v, v) == Approx(1.0).epsilon(1e-12));
  CHECK(pair_similarity(vec({{"a", 1}}), vec({{"b", 1}})) == 0.0);
  CHECK(pair_similarity(vec({{"a", 1}, {"b", 1}}), vec({{"a", 1}})) == Approx(0.7071).epsilon(1e-4));
  CHECK(pair_similarity(v, CultureVector{}) == 0.0);
}

TEST_CASE("pair similarity matches the dense oracle and is symmetric") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const CultureVector a = testing::random_vector(rng), b = testing::random_vector(rng);
    const double s = pair_similarity(a, b);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(s == Approx(pair_similarity(b, a)).epsilon(1e-12));
    CHECK(s == Approx(oracle::cosine(as_map(a), as_map(b))).epsilon(1e-9));
  }
}

TEST_CASE("group similarity is the mean over the other groups") {
  const CultureVector v = vec({{"a", 1}, {"b", 2}});
  CultureSet same = three_groups(v, v, v);
  for (const char* g : {"a", "b", "c"})
    CHECK(*group_similarity(same, Practice::tagging, GroupId(g), 1) == Approx(1.0));

  CultureSet apart = three_groups(vec({{"x", 1}}), v, v);
  CHECK(*group_similarity(apart, Practice::tagging, GroupId("a"), 1) == 0.0);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const CultureVector a = testing::random_vector(rng), b = testing::random_vector(rng),
                        c = testing::random_vector(rng);
    CultureSet set = three_groups(a, b, c);
    const double expected = (pair_similarity(a, b) + pair_similarity(a, c)) / 2.0;
    CHECK(*group_similarity(set, Practice::tagging, GroupId("a"), 1) == Approx(expected));
  }

  CultureSet lonely(WindowSpec{0, 10, 1});
  lonely.at({Practice::tagging, GroupId("a"), 1}).add(tag("x"));
  CHECK_FALSE(group_similarity(lonely, Practice::tagging, GroupId("a"), 1).has_value());
}

TEST_CASE("reproduction examples") {
  CHECK(reproduction(ranked({"a", "b", "c"}), ranked({"a", "b", "c"})) == Approx(1.0).epsilon(1e-12));
  CHECK(reproduction(ranked({"a", "b"}), ranked({"c", "d"})) == 0.0);
  CHECK(reproduction(ranked({"a", "b"}), ranked({"b", "a"}), RboParams{0.9}) ==
        Approx(0.90).epsilon(1e-6));
  CHECK_THROWS_AS(reproduction({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(RboParams{1.0}.check(), std::invalid_argument);
}

TEST_CASE("reproduction matches the term-by-term oracle, bounded and symmetric") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pd(0.05, 0.95);
  for (int i = 0; i < 300; ++i) {
    const RankedVector a = rank(testing::random_vector(rng, 15, 25)),
                       b = rank(testing::random_vector(rng, 15, 25));
    const RboParams params{i % 3 == 0 ? 0.9 : pd(rng)};
    const double r = reproduction(a, b, params);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0 + 1e-12);
    CHECK(r == Approx(reproduction(b, a, params)).epsilon(1e-12));
    CHECK(r == Approx(oracle::rbo(keys_of(a), keys_of(b), params.p)).epsilon(1e-9));
  }
}

TEST_CASE("depth weights at p = 0.9") {
  CHECK(rbo_prefix_weight(0.9, 10) == Approx(1 - std::pow(0.9, 10)));
  CHECK(rbo_depth_weight(0.9, 10) == Approx(0.8556).epsilon(5e-4));
  CHECK(rbo_depth_weight(0.9, 1) == Approx(0.1 / 0.9 * std::log(10.0)));
  for (int d = 1; d < 60; ++d) CHECK(rbo_depth_weight(0.9, d) < rbo_depth_weight(0.9, d + 1));
}

TEST_CASE("series over a binned stream") {
  CultureSet set(WindowSpec{0, 10, 4});
  auto put = [&](const char* g, int w, const CultureVector& v) {
    CultureVector& slot = set.at({Practice::tagging, GroupId(g), w});
    for (const auto& [f, n] : v.counts) slot.add(f, n);
  };
  put("a", 1, vec({{"x", 3}, {"y", 1}}));
  put("a", 2, vec({{"x", 3}, {"y", 1}}));
  put("a", 4, vec({{"z", 2}}));
  put("b", 1, vec({{"x", 1}}));

  const MeasureSeries f = focus_series(set, Practice::tagging, GroupId("a"));
  REQUIRE(f.points.size() == 4);
  CHECK(*f.points[0].value == Approx(0.1887).epsilon(1e-4));
  CHECK_FALSE(f.points[2].value.has_value());
  CHECK(*f.points[3].value == 1.0);

  const MeasureSeries r = reproduction_series(set, Practice::tagging, GroupId("a"));
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0].window == 2);
  CHECK(*r.points[0].value == Approx(1.0));
  CHECK_FALSE(r.points[1].value.has_value());
  CHECK_FALSE(r.points[2].value.has_value());

  const MeasureSeries q = frequency_series(set, Practice::tagging, GroupId("a"));
  CHECK(*q.points[0].value == 4.0);
  CHECK_FALSE(q.points[2].value.has_value());

  const MeasureSeries s = similarity_series(set, Practice::tagging, GroupId("a"));
  CHECK(*s.points[0].value == Approx(3 / std::sqrt(10.0)));
  CHECK_FALSE(s.points[1].value.has_value());
}

TEST_CASE("average series") {
  auto series = [](const char* g, std::vector<std::optional<double>> vals) {
    MeasureSeries s;
    s.group = g;
    int w = 1;
    for (auto v : vals) s.points.push_back({w++, v, std::nullopt});
    return s;
  };
  SUBCASE("one group") {
    std::vector<MeasureSeries> one{series("a", {0.3})};
    const MeasureSeries avg = average_series(one);
    CHECK(avg.is_average());
    CHECK(*avg.points[0].value == Approx(0.3));
    CHECK(*avg.points[0].sd == 0.0);
  }
  SUBCASE("two values") {
    std::vector<MeasureSeries> two{series("a", {0.2, std::nullopt}), series("b", {0.4, std::nullopt})};
    const MeasureSeries avg = average_series(two);
    CHECK(*avg.points[0].value == Approx(0.3));
    CHECK(*avg.points[0].sd == Approx(0.1));
    CHECK_FALSE(avg.points[1].value.has_value());
  }
  SUBCASE("mean lies between min and max") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
      std::vector<MeasureSeries> many{series("a", {u(rng)}), series("b", {u(rng)}),
                                      series("c", {u(rng)})};
      const double m = *average_series(many).points[0].value;
      double lo = 1, hi = 0;
      for (const auto& s : many) {
        lo = std::min(lo, *s.points[0].value);
        hi = std::max(hi, *s.points[0].value);
      }
      CHECK(m >= lo - 1e-12);
      CHECK(m <= hi + 1e-12);
    }
  }
}

TEST_CASE("series csv") {
  MeasureSeries a;
  a.group = "a";
  a.points = {{1, 0.5, std::nullopt}, {2, std::nullopt, std::nullopt}};
  std::vector<MeasureSeries> all{a};
  all.push_back(average_series(all));
  std::ostringstream out;
  write_series_csv(out, all);
  CHECK(out.str() ==
        "group,window,value,sd\n"
        "a,1,0.5,\n"
        "a,2,,\n"
        "AVERAGE,1,0.5,0\n"
        "AVERAGE,2,,\n");
}
