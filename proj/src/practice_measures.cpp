#include "culturestream/practice_measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "culturestream/csv.hpp"

namespace culturestream {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::focus: return "focus";
    case Measure::similarity: return "similarity";
    case Measure::reproduction: return "reproduction";
    case Measure::frequency: return "frequency";
  }
  return "?";
}

void RboParams::check() const {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("RBO persistence p must lie in [0,1)");
}

std::optional<double> focus(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  std::size_t n = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("negative count");
    if (c > 0) {
      total += c;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  if (n == 1) return 1.0;
  double entropy = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    entropy -= p * std::log2(p);
  }
  double f = 1.0 - entropy / std::log2(static_cast<double>(n));
  return std::clamp(f, 0.0, 1.0);
}

std::optional<double> focus(const CultureVector& vector) {
  std::vector<std::int64_t> counts;
  counts.reserve(vector.counts.size());
  for (const auto& [fact, c] : vector.counts) counts.push_back(c);
  return focus(counts);
}

double pair_similarity(const CultureVector& a, const CultureVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [fact, c] : a.counts) {
    na += static_cast<double>(c) * static_cast<double>(c);
    auto it = b.counts.find(fact);
    if (it != b.counts.end()) dot += static_cast<double>(c) * static_cast<double>(it->second);
  }
  for (const auto& [fact, c] : b.counts) nb += static_cast<double>(c) * static_cast<double>(c);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::optional<double> group_similarity(const CultureSet& set, Practice practice,
                                       const GroupId& group, int window) {
  const CultureVector* self = set.find(practice, group, window);
  if (!self) return std::nullopt;
  double sum = 0.0;
  int others = 0;
  for (const CultureVector* other : set.in_window(practice, window)) {
    if (other->group == group) continue;
    sum += pair_similarity(*self, *other);
    ++others;
  }
  if (others == 0) return std::nullopt;
  return sum / others;
}

double reproduction(const RankedVector& earlier, const RankedVector& later,
                    const RboParams& params) {
  params.check();
  const std::size_t depth = std::max(earlier.size(), later.size());
  if (depth == 0) throw std::invalid_argument("reproduction of two empty rankings");

  std::unordered_set<std::string> seen_a, seen_b;
  std::size_t overlap = 0;
  double sum = 0.0;
  double weight = 1.0;  // p^(d-1)
  double agreement = 0.0;
  for (std::size_t d = 1; d <= depth; ++d) {
    if (d <= earlier.size()) {
      const std::string& key = earlier[d - 1].first.key;
      if (seen_b.count(key)) ++overlap;
      seen_a.insert(key);
    }
    if (d <= later.size()) {
      const std::string& key = later[d - 1].first.key;
      if (seen_a.count(key)) ++overlap;
      seen_b.insert(key);
    }
    std::size_t len_a = std::min(d, earlier.size());
    std::size_t len_b = std::min(d, later.size());
    agreement = 2.0 * static_cast<double>(overlap) / static_cast<double>(len_a + len_b);
    sum += agreement * weight;
    weight *= params.p;
  }
  // weight now holds p^D
  double r = (1.0 - params.p) * sum + agreement * weight;
  return std::clamp(r, 0.0, 1.0);
}

double rbo_prefix_weight(double p, int depth) { return 1.0 - std::pow(p, depth); }

double rbo_depth_weight(double p, int depth) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("rbo_depth_weight needs 0 < p < 1");
  double partial = 0.0;
  for (int i = 1; i < depth; ++i) partial += std::pow(p, i) / i;
  return 1.0 - std::pow(p, depth - 1) +
         (1.0 - p) / p * depth * (std::log(1.0 / (1.0 - p)) - partial);
}

namespace {

MeasureSeries make_series(Measure m, Practice practice, const GroupId& group) {
  MeasureSeries s;
  s.measure = m;
  s.practice = practice;
  s.group = group.name();
  return s;
}

}  // namespace

MeasureSeries focus_series(const CultureSet& set, Practice practice, const GroupId& group) {
  MeasureSeries s = make_series(Measure::focus, practice, group);
  for (int w = 1; w <= set.spec().count; ++w) {
    const CultureVector* v = set.find(practice, group, w);
    s.points.push_back({w, v ? focus(*v) : std::nullopt, std::nullopt});
  }
  return s;
}

MeasureSeries similarity_series(const CultureSet& set, Practice practice, const GroupId& group) {
  MeasureSeries s = make_series(Measure::similarity, practice, group);
  for (int w = 1; w <= set.spec().count; ++w)
    s.points.push_back({w, group_similarity(set, practice, group, w), std::nullopt});
  return s;
}

MeasureSeries reproduction_series(const CultureSet& set, Practice practice, const GroupId& group,
                                  const RboParams& params) {
  MeasureSeries s = make_series(Measure::reproduction, practice, group);
  for (int w = 2; w <= set.spec().count; ++w) {
    const CultureVector* before = set.find(practice, group, w - 1);
    const CultureVector* after = set.find(practice, group, w);
    std::optional<double> value;
    if (before && after) value = reproduction(rank(*before), rank(*after), params);
    s.points.push_back({w, value, std::nullopt});
  }
  return s;
}

MeasureSeries frequency_series(const CultureSet& set, Practice practice, const GroupId& group) {
  MeasureSeries s = make_series(Measure::frequency, practice, group);
  for (int w = 1; w <= set.spec().count; ++w) {
    const CultureVector* v = set.find(practice, group, w);
    std::optional<double> value;
    if (v) value = static_cast<double>(v->total);
    s.points.push_back({w, value, std::nullopt});
  }
  return s;
}

MeasureSeries measure_series(Measure measure, const CultureSet& set, Practice practice,
                             const GroupId& group, const RboParams& params) {
  switch (measure) {
    case Measure::focus: return focus_series(set, practice, group);
    case Measure::similarity: return similarity_series(set, practice, group);
    case Measure::reproduction: return reproduction_series(set, practice, group, params);
    case Measure::frequency: return frequency_series(set, practice, group);
  }
  throw std::invalid_argument("unknown measure");
}

MeasureSeries average_series(std::span<const MeasureSeries> per_group) {
  if (per_group.empty()) throw std::invalid_argument("average of no series");
  MeasureSeries avg;
  avg.measure = per_group.front().measure;
  avg.practice = per_group.front().practice;
  avg.group = std::string(kAverageGroup);
  const std::size_t n = per_group.front().points.size();
  for (const MeasureSeries& s : per_group)
    if (s.points.size() != n || s.measure != avg.measure || s.practice != avg.practice)
      throw std::invalid_argument("series to average are not aligned");

  for (std::size_t i = 0; i < n; ++i) {
    SeriesPoint point;
    point.window = per_group.front().points[i].window;
    double sum = 0.0;
    int k = 0;
    for (const MeasureSeries& s : per_group) {
      if (s.points[i].window != point.window)
        throw std::invalid_argument("series to average have different windows");
      if (s.points[i].value) {
        sum += *s.points[i].value;
        ++k;
      }
    }
    if (k > 0) {
      double mean = sum / k;
      double ss = 0.0;
      for (const MeasureSeries& s : per_group)
        if (s.points[i].value) ss += (*s.points[i].value - mean) * (*s.points[i].value - mean);
      point.value = mean;
      point.sd = std::sqrt(ss / k);
    }
    avg.points.push_back(point);
  }
  return avg;
}

void write_series_csv(std::ostream& out, std::span<const MeasureSeries> series) {
  csv::Writer w(out);
  w.row({"group", "window", "value", "sd"});
  for (const MeasureSeries& s : series)
    for (const SeriesPoint& p : s.points)
      w.row({s.group, std::to_string(p.window), csv::format_number(p.value),
             s.is_average() ? csv::format_number(p.sd) : std::string()});
}

}  // namespace culturestream
