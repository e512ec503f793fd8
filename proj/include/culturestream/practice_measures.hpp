#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "culturestream/core.hpp"
#include "culturestream/stream.hpp"

namespace culturestream {

enum class Measure { focus, similarity, reproduction, frequency };
std::string_view to_string(Measure m);

/// Group label used for the cross-group average series.
inline constexpr std::string_view kAverageGroup = "AVERAGE";

struct SeriesPoint {
  int window = 0;
  std::optional<double> value;
  /// Population standard deviation; only set on AVERAGE series.
  std::optional<double> sd;
};

struct MeasureSeries {
  Measure measure = Measure::focus;
  Practice practice = Practice::tagging;
  std::string group;
  std::vector<SeriesPoint> points;

  bool is_average() const { return group == kAverageGroup; }
};

/// Persistence of the rank-biased overlap; smaller values weight the top ranks more.
struct RboParams {
  double p = 0.9;
  /// Throws std::invalid_argument unless 0 <= p < 1.
  void check() const;
};

/// Cultural focus: one minus the normalized Shannon entropy of the count distribution.
/// A single distinct fact has focus 1. Empty input gives nullopt.
std::optional<double> focus(std::span<const std::int64_t> counts);
std::optional<double> focus(const CultureVector& vector);

/// Cosine similarity of two count vectors aligned on the union of their facts.
/// Zero when either vector is empty.
double pair_similarity(const CultureVector& a, const CultureVector& b);

/// Unweighted mean similarity of `group` to every other group active in the window.
/// Null when the group is inactive or no other group is active.
std::optional<double> group_similarity(const CultureSet& set, Practice practice,
                                       const GroupId& group, int window);

/// Extended rank-biased overlap between two rankings:
///
///   R = (1-p) * sum_{d=1..D} A_d p^(d-1) + A_D p^D
///
/// with A_d = 2|top_d(a) ∩ top_d(b)| / (|top_d(a)| + |top_d(b)|), prefixes truncated at
/// each list's length and D the longer length. The last term sums the geometric tail
/// with agreement frozen at A_D, so identical rankings score exactly 1.
/// Throws std::invalid_argument if both rankings are empty.
double reproduction(const RankedVector& earlier, const RankedVector& later,
                    const RboParams& params = {});

/// Share of the convergent rank weights (1-p) p^(d-1) carried by depths 1..depth: 1 - p^depth.
double rbo_prefix_weight(double p, int depth);

/// Weight of the top `depth` ranks in extrapolated RBO (Webber, Moffat & Zobel 2010):
///   1 - p^(d-1) + (1-p)/p * d * (ln(1/(1-p)) - sum_{i=1..d-1} p^i / i).
/// At p = 0.9 the top 10 ranks carry about 86% of the weight.
double rbo_depth_weight(double p, int depth);

/// Per-window series for every group in `groups`; points are null where the
/// required vectors are absent. Reproduction points are labelled by the later
/// window of each consecutive pair, so they run from window 2 to spec.count.
MeasureSeries focus_series(const CultureSet& set, Practice practice, const GroupId& group);
MeasureSeries similarity_series(const CultureSet& set, Practice practice, const GroupId& group);
MeasureSeries reproduction_series(const CultureSet& set, Practice practice, const GroupId& group,
                                  const RboParams& params = {});
/// Total references per window (null where the group made none).
MeasureSeries frequency_series(const CultureSet& set, Practice practice, const GroupId& group);

MeasureSeries measure_series(Measure measure, const CultureSet& set, Practice practice,
                             const GroupId& group, const RboParams& params = {});

/// Per-window mean and population standard deviation over the non-null group values.
/// All series must share measure, practice and window labels.
MeasureSeries average_series(std::span<const MeasureSeries> per_group);

/// "group,window,value,sd"; value and sd are empty where null, sd is filled on
/// AVERAGE rows only.
void write_series_csv(std::ostream& out, std::span<const MeasureSeries> series);

}  // namespace culturestream
