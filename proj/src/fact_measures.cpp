#include "culturestream/fact_measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "culturestream/csv.hpp"

namespace culturestream {

void FactSeries::check() const {
  if (r.size() != d.size()) throw std::invalid_argument("fact series r and d differ in length");
  for (std::size_t t = 0; t < r.size(); ++t)
    if (r[t] < 0 || r[t] > d[t])
      throw std::invalid_argument("fact series needs 0 <= r <= d in every window");
}

std::vector<FactSeries> fact_series(const CultureSet& set, Practice practice) {
  const int n = set.spec().count;
  std::map<std::pair<GroupId, Fact>, FactSeries> by_fact;
  std::map<GroupId, std::vector<std::int64_t>> totals;
  for (const auto& [key, vec] : set.vectors()) {
    if (key.practice != practice) continue;
    auto& d = totals[key.group];
    d.resize(n, 0);
    d[key.window - 1] = vec.total;
    for (const auto& [fact, count] : vec.counts) {
      FactSeries& s = by_fact[{key.group, fact}];
      if (s.r.empty()) {
        s.group = key.group;
        s.practice = practice;
        s.fact = fact;
        s.r.assign(n, 0);
      }
      s.r[key.window - 1] = count;
    }
  }
  std::vector<FactSeries> out;
  out.reserve(by_fact.size());
  for (auto& [key, s] : by_fact) {
    s.d = totals[s.group];
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::optional<double>> average_rates(const CultureSet& set, Practice practice) {
  const int n = set.spec().count;
  std::vector<std::int64_t> refs(n, 0);
  std::vector<std::unordered_set<std::string>> facts(n);
  for (const auto& [key, vec] : set.vectors()) {
    if (key.practice != practice) continue;
    refs[key.window - 1] += vec.total;
    for (const auto& [fact, count] : vec.counts) facts[key.window - 1].insert(fact.key);
  }
  std::vector<std::optional<double>> h0(n);
  for (int t = 0; t < n; ++t)
    if (refs[t] > 0) h0[t] = static_cast<double>(refs[t]) / static_cast<double>(facts[t].size());
  return h0;
}

std::string_view to_string(InstitutionVariant v) {
  return v == InstitutionVariant::literal ? "literal" : "normalized";
}

InstitutionVariant parse_institution_variant(std::string_view s) {
  if (s == "literal") return InstitutionVariant::literal;
  if (s == "normalized") return InstitutionVariant::normalized;
  throw std::invalid_argument("institutionness variant must be 'literal' or 'normalized'");
}

bool meets_threshold(std::int64_t r, int h, std::optional<double> h0, InstitutionVariant variant) {
  if (h <= 0) return true;
  if (!h0 || *h0 <= 0.0) return false;
  const double refs = static_cast<double>(r);
  if (variant == InstitutionVariant::literal) return refs >= static_cast<double>(h) / *h0;
  return refs / *h0 >= static_cast<double>(h);
}

int institutionness(const FactSeries& series, std::span<const std::optional<double>> h0,
                    InstitutionVariant variant) {
  if (h0.size() != series.r.size())
    throw std::invalid_argument("average rates and fact series differ in length");
  const int n = static_cast<int>(series.r.size());
  for (int h = n; h > 0; --h) {
    int supporting = 0;
    for (int t = 0; t < n; ++t)
      if (meets_threshold(series.r[t], h, h0[t], variant)) ++supporting;
    if (supporting >= h) return h;
  }
  return 0;
}

namespace {

// k * ln(p), with 0 * ln(0) taken as 0.
double xlogp(std::int64_t k, double p) {
  return k == 0 ? 0.0 : static_cast<double>(k) * std::log(p);
}

double binomial_cost(std::int64_t r, std::int64_t d, double p) {
  const double log_choose = std::lgamma(static_cast<double>(d) + 1.0) -
                            std::lgamma(static_cast<double>(r) + 1.0) -
                            std::lgamma(static_cast<double>(d - r) + 1.0);
  return -(log_choose + xlogp(r, p) + xlogp(d - r, 1.0 - p));
}

}  // namespace

std::pair<double, double> burst_rates(const FactSeries& series) {
  std::int64_t refs = 0, total = 0;
  for (std::size_t t = 0; t < series.r.size(); ++t) {
    refs += series.r[t];
    total += series.d[t];
  }
  if (total == 0) return {0.0, 0.0};
  const double p0 = static_cast<double>(refs) / static_cast<double>(total);
  const double p1 = std::min(2.0 * p0, 1.0 - kBurstRateClamp);
  return {p0, p1};
}

std::vector<BurstCost> burst_costs(const FactSeries& series) {
  series.check();
  auto [p0, p1] = burst_rates(series);
  if (p0 <= 0.0) return {};
  std::vector<BurstCost> costs(series.r.size());
  for (std::size_t t = 0; t < series.r.size(); ++t) {
    if (series.d[t] == 0) continue;
    costs[t].base = binomial_cost(series.r[t], series.d[t], p0);
    costs[t].burst = binomial_cost(series.r[t], series.d[t], p1);
  }
  return costs;
}

double burst_improvement(std::int64_t r, std::int64_t d, double p0, double p1) {
  return xlogp(r, p1 / p0) + xlogp(d - r, (1.0 - p1) / (1.0 - p0));
}

std::vector<BurstEpisode> burst_episodes(const FactSeries& series) {
  std::vector<BurstCost> costs = burst_costs(series);
  std::vector<BurstEpisode> out;
  for (std::size_t t = 0; t < costs.size(); ++t) {
    double gain = costs[t].improvement();
    if (!(gain > 0.0)) continue;
    const int window = static_cast<int>(t) + 1;
    if (!out.empty() && out.back().end == window - 1) {
      out.back().end = window;
      out.back().weight += gain;
    } else {
      out.push_back(BurstEpisode{series.fact, series.group, series.practice, window, window, gain, 0.0});
    }
  }
  return out;
}

void normalize_bursts(std::vector<BurstEpisode>& episodes) {
  std::map<std::pair<GroupId, Practice>, double> strongest;
  for (const BurstEpisode& e : episodes) {
    double& m = strongest[{e.group, e.practice}];
    m = std::max(m, e.weight);
  }
  for (BurstEpisode& e : episodes) {
    double m = strongest[{e.group, e.practice}];
    e.normalized = m > 0.0 ? e.weight / m : 0.0;
  }
}

std::vector<FactScore> fact_measures(const CultureSet& set, Practice practice,
                                     InstitutionVariant variant) {
  const std::vector<FactSeries> all = fact_series(set, practice);
  const std::vector<std::optional<double>> h0 = average_rates(set, practice);

  std::vector<FactScore> scores;
  std::vector<BurstEpisode> episodes;
  std::vector<std::size_t> owner;
  scores.reserve(all.size());
  for (const FactSeries& s : all) {
    scores.push_back(FactScore{s.group, practice, s.fact, institutionness(s, h0, variant), {}});
    for (BurstEpisode& e : burst_episodes(s)) {
      episodes.push_back(std::move(e));
      owner.push_back(scores.size() - 1);
    }
  }
  normalize_bursts(episodes);
  for (std::size_t i = 0; i < episodes.size(); ++i)
    scores[owner[i]].episodes.push_back(std::move(episodes[i]));
  return scores;
}

void write_fact_csv(std::ostream& out, std::span<const FactScore> scores) {
  csv::Writer w(out);
  w.row({"group", "practice", "fact", "I", "B", "onset", "end"});
  for (const FactScore& s : scores) {
    const std::string practice(to_string(s.practice));
    const std::string inst = std::to_string(s.institutionness);
    if (s.episodes.empty()) {
      if (s.institutionness > 0) w.row({s.group.name(), practice, s.fact.key, inst, "0", "", ""});
      continue;
    }
    for (const BurstEpisode& e : s.episodes)
      w.row({s.group.name(), practice, s.fact.key, inst, csv::format_number(e.normalized),
             std::to_string(e.onset), std::to_string(e.end)});
  }
}

}  // namespace culturestream
