#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "culturestream/core.hpp"
#include "culturestream/stream.hpp"

namespace culturestream {

/// Weekly reference counts of one fact by one group. r[t] counts references to the
/// fact, d[t] all of the group's references in that practice (index 0 is window 1).
struct FactSeries {
  GroupId group;
  Practice practice = Practice::tagging;
  Fact fact;
  std::vector<std::int64_t> r;
  std::vector<std::int64_t> d;

  /// Throws std::invalid_argument unless r and d have equal length and 0 <= r <= d.
  void check() const;
};

/// One series per (group, fact) seen in the practice, ordered by group then fact.
std::vector<FactSeries> fact_series(const CultureSet& set, Practice practice);

/// Per-window reference rate of the average fact across all groups:
/// total references / distinct facts. Null for windows without references.
std::vector<std::optional<double>> average_rates(const CultureSet& set, Practice practice);

enum class InstitutionVariant {
  literal,     ///< a window counts toward h when r >= h / h0
  normalized,  ///< a window counts toward h when r / h0 >= h
};
std::string_view to_string(InstitutionVariant v);
InstitutionVariant parse_institution_variant(std::string_view s);

/// Whether a window with r references supports index h. Windows without a rate never do.
bool meets_threshold(std::int64_t r, int h, std::optional<double> h0, InstitutionVariant variant);

/// Temporal Hirsch index: the largest h such that at least h windows meet the
/// threshold for h. Ranges over [0, number of windows].
int institutionness(const FactSeries& series, std::span<const std::optional<double>> h0,
                    InstitutionVariant variant = InstitutionVariant::literal);

/// Negative log-likelihoods of the window counts under the base state (rate R/D)
/// and the burst state (rate 2R/D, clamped below 1).
struct BurstCost {
  double base = 0.0;
  double burst = 0.0;
  double improvement() const { return base - burst; }
};

inline constexpr double kBurstRateClamp = 1e-9;

/// Empty when the fact is never referenced. Windows with d = 0 cost nothing in
/// either state.
std::vector<BurstCost> burst_costs(const FactSeries& series);

/// Cost improvement of the burst state for one window, with the binomial
/// coefficients cancelled: r ln(p1/p0) + (d-r) ln((1-p1)/(1-p0)).
double burst_improvement(std::int64_t r, std::int64_t d, double p0, double p1);

/// Base and burst rates for the fact: p0 = R/D, p1 = min(2R/D, 1 - kBurstRateClamp).
std::pair<double, double> burst_rates(const FactSeries& series);

struct BurstEpisode {
  Fact fact;
  GroupId group;
  Practice practice = Practice::tagging;
  int onset = 0;  // first window, 1-based
  int end = 0;    // last window, inclusive
  double weight = 0.0;
  double normalized = 0.0;
};

/// Maximal runs of windows with positive improvement; weight is the summed improvement.
std::vector<BurstEpisode> burst_episodes(const FactSeries& series);

/// Divides each weight by the largest weight of its (group, practice).
void normalize_bursts(std::vector<BurstEpisode>& episodes);

struct FactScore {
  GroupId group;
  Practice practice = Practice::tagging;
  Fact fact;
  int institutionness = 0;
  std::vector<BurstEpisode> episodes;  // normalized
};

/// Institutionness and normalized burst episodes for every (group, fact) of a practice.
std::vector<FactScore> fact_measures(const CultureSet& set, Practice practice,
                                     InstitutionVariant variant = InstitutionVariant::literal);

/// "group,practice,fact,I,B,onset,end": one row per episode, plus one row with B = 0
/// and empty onset/end for each fact with I > 0 and no episode.
void write_fact_csv(std::ostream& out, std::span<const FactScore> scores);

}  // namespace culturestream
