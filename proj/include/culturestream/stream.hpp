#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "culturestream/core.hpp"
#include "culturestream/corpus.hpp"

namespace culturestream {

inline constexpr Timestamp kSecondsPerWeek = 7 * 86400;

/// Fixed-width windows numbered 1..count; window w covers
/// [epoch + (w-1)*width, epoch + w*width).
struct WindowSpec {
  Timestamp epoch = 0;
  Timestamp width = kSecondsPerWeek;
  int count = 13;

  /// Throws std::invalid_argument unless width > 0 and count >= 1.
  void check() const;
  std::optional<int> window_of(Timestamp t) const;
  Timestamp start_of(int window) const { return epoch + (window - 1) * width; }
  ObservationWindow span() const { return {epoch, epoch + width * count}; }
};

/// Reference counts of one group's facts for one practice in one window.
struct CultureVector {
  GroupId group;
  int window = 0;
  Practice practice = Practice::tagging;
  std::map<Fact, std::int64_t> counts;
  std::int64_t total = 0;

  void add(const Fact& f, std::int64_t n = 1);
  bool empty() const { return counts.empty(); }
};

/// Facts by descending count; equal counts ordered by ascending key.
using RankedVector = std::vector<std::pair<Fact, std::int64_t>>;

/// Throws std::invalid_argument("empty culture") for an empty vector.
RankedVector rank(const CultureVector& vector);

struct CultureKey {
  Practice practice;
  GroupId group;
  int window;
  auto operator<=>(const CultureKey&) const = default;
};

/// All non-empty culture vectors of a stream. Absent (group, window) pairs
/// mean the group made no references in that window.
class CultureSet {
 public:
  CultureSet() = default;
  explicit CultureSet(WindowSpec spec) : spec_(spec) {}

  const WindowSpec& spec() const { return spec_; }
  const std::map<CultureKey, CultureVector>& vectors() const { return vectors_; }
  const CultureVector* find(Practice practice, const GroupId& group, int window) const;
  /// Groups with a vector for this practice and window, in ascending order.
  std::vector<GroupId> active_groups(Practice practice, int window) const;
  std::vector<GroupId> groups(Practice practice) const;
  std::vector<const CultureVector*> in_window(Practice practice, int window) const;
  std::int64_t total_references(std::optional<Practice> practice = std::nullopt) const;
  /// Transactions outside the window span, ignored by bin().
  std::size_t dropped() const { return dropped_; }

  CultureVector& at(const CultureKey& key);
  void count_dropped() { ++dropped_; }

 private:
  WindowSpec spec_;
  std::map<CultureKey, CultureVector> vectors_;
  std::size_t dropped_ = 0;
};

CultureSet bin(std::span<const Transaction> transactions, const WindowSpec& spec);

/// "group,window,practice,fact_kind,fact,count", one row per (vector, fact).
void write_culture_csv(std::ostream& out, const CultureSet& set,
                       std::optional<Practice> practice = std::nullopt);

}  // namespace culturestream
