#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "culturestream/core.hpp"
#include "culturestream/corpus.hpp"

namespace culturestream {

struct GroupSize {
  GroupId group;
  int members = 0;
};

/// Raises the selection probability of one fact during [first_window, last_window].
struct BurstInjection {
  Fact fact;
  int first_window = 1;
  int last_window = 1;
  double multiplier = 5.0;
};

struct SynthConfig {
  std::vector<GroupSize> groups;
  int windows = 13;
  Timestamp epoch = 1374278400;  // 2013-07-20T00:00:00Z
  Timestamp width = 7 * 86400;
  /// Expected transactions per member, window and practice (Poisson).
  double rate = 2.0;
  /// Probability that a tagging transaction introduces a brand-new hashtag.
  double alpha = 0.1;
  /// Probability that a retweet or mention targets a member of the author's own
  /// group; otherwise the target is uniform over all other roster members.
  double hom = 0.8;
  std::vector<BurstInjection> burst_injections;
  /// Per-transaction probability of picking an injected fact outside its interval;
  /// inside the interval it is multiplied (and capped at 1).
  double injection_share = 0.02;
  /// Hashtag draws made before window 1 to settle the cumulative-advantage urn.
  int warmup = 0;
  std::vector<Practice> practices = {Practice::tagging, Practice::retweeting,
                                     Practice::mentioning};
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument on out-of-range fields.
  void check() const;
};

struct SynthStream {
  Roster roster;
  std::vector<Transaction> transactions;  // ordered by timestamp, then id
};

/// Handle of the i-th member (0-based) of a group, e.g. "spd_007".
std::string member_handle(const GroupId& group, int index);

/// Deterministic for a given config (including seed).
SynthStream generate(const SynthConfig& config);

}  // namespace culturestream
