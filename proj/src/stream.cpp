#include "culturestream/stream.hpp"

#include <algorithm>
#include <stdexcept>

#include "culturestream/csv.hpp"

namespace culturestream {

void WindowSpec::check() const {
  if (width <= 0) throw std::invalid_argument("window width must be positive");
  if (count < 1) throw std::invalid_argument("window count must be at least 1");
}

std::optional<int> WindowSpec::window_of(Timestamp t) const {
  if (t < epoch) return std::nullopt;
  Timestamp idx = (t - epoch) / width;
  if (idx >= count) return std::nullopt;
  return static_cast<int>(idx) + 1;
}

void CultureVector::add(const Fact& f, std::int64_t n) {
  counts[f] += n;
  total += n;
}

RankedVector rank(const CultureVector& vector) {
  if (vector.empty()) throw std::invalid_argument("empty culture");
  RankedVector out(vector.counts.begin(), vector.counts.end());
  // counts is key-ordered, so a stable sort on count alone keeps ties lexicographic
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

const CultureVector* CultureSet::find(Practice practice, const GroupId& group, int window) const {
  auto it = vectors_.find(CultureKey{practice, group, window});
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<GroupId> CultureSet::active_groups(Practice practice, int window) const {
  std::vector<GroupId> out;
  for (const CultureVector* v : in_window(practice, window)) out.push_back(v->group);
  return out;
}

std::vector<const CultureVector*> CultureSet::in_window(Practice practice, int window) const {
  std::vector<const CultureVector*> out;
  for (const auto& [key, vec] : vectors_)
    if (key.practice == practice && key.window == window) out.push_back(&vec);
  return out;
}

std::vector<GroupId> CultureSet::groups(Practice practice) const {
  std::vector<GroupId> out;
  for (const auto& [key, vec] : vectors_)
    if (key.practice == practice && (out.empty() || out.back() != key.group))
      out.push_back(key.group);
  return out;
}

std::int64_t CultureSet::total_references(std::optional<Practice> practice) const {
  std::int64_t n = 0;
  for (const auto& [key, vec] : vectors_)
    if (!practice || key.practice == *practice) n += vec.total;
  return n;
}

CultureVector& CultureSet::at(const CultureKey& key) {
  auto [it, inserted] = vectors_.try_emplace(key);
  if (inserted) {
    it->second.group = key.group;
    it->second.window = key.window;
    it->second.practice = key.practice;
  }
  return it->second;
}

CultureSet bin(std::span<const Transaction> transactions, const WindowSpec& spec) {
  spec.check();
  CultureSet set(spec);
  for (const Transaction& t : transactions) {
    auto window = spec.window_of(t.timestamp);
    if (!window) {
      set.count_dropped();
      continue;
    }
    CultureVector& v = set.at(CultureKey{t.practice, t.group, *window});
    for (const Fact& f : t.facts) v.add(f);
  }
  return set;
}

void write_culture_csv(std::ostream& out, const CultureSet& set, std::optional<Practice> practice) {
  csv::Writer w(out);
  w.row({"group", "window", "practice", "fact_kind", "fact", "count"});
  for (const auto& [key, vec] : set.vectors()) {
    if (practice && key.practice != *practice) continue;
    for (const auto& [fact, count] : vec.counts)
      w.row({key.group.name(), std::to_string(key.window), std::string(to_string(key.practice)),
             std::string(to_string(fact.kind)), fact.key, std::to_string(count)});
  }
}

}  // namespace culturestream
