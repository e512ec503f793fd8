#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "culturestream/core.hpp"
#include "culturestream/corpus.hpp"

namespace culturestream {

/// Aggregate directed network of user-to-user references for one practice.
/// Nodes are the roster members that take part in at least one arc.
class PracticeGraph {
 public:
  using ArcKey = std::pair<UserHandle, UserHandle>;

  explicit PracticeGraph(Practice practice = Practice::retweeting) : practice_(practice) {}

  Practice practice() const { return practice_; }
  const std::map<UserHandle, GroupId>& nodes() const { return nodes_; }
  const std::map<ArcKey, std::int64_t>& arcs() const { return arcs_; }

  /// Adds `weight` to the arc source -> target. Self-references and endpoints
  /// missing from the roster are ignored; returns whether an arc was touched.
  /// Following arcs always keep weight 1.
  bool add_reference(const Roster& roster, const UserHandle& source, const UserHandle& target,
                     std::int64_t weight = 1);

  std::int64_t total_weight() const;
  std::vector<UserHandle> members_of(const GroupId& group) const;
  std::set<UserHandle> node_set() const;

 private:
  Practice practice_;
  std::map<UserHandle, GroupId> nodes_;
  std::map<ArcKey, std::int64_t> arcs_;
};

/// One arc per (author, referenced user) with weight = number of transactions.
PracticeGraph build_graph(std::span<const Transaction> transactions, Practice practice,
                          const Roster& roster);

struct FollowEdge {
  UserHandle source;
  UserHandle target;
};

/// CSV with header "source,target". Throws DataError on malformed rows.
std::vector<FollowEdge> read_follow_edges(std::istream& in);
PracticeGraph build_follow_graph(std::span<const FollowEdge> edges, const Roster& roster);

/// Arcs with both endpoints in scope over |scope|(|scope|-1). Null below two nodes.
std::optional<double> density(const PracticeGraph& graph, const std::set<UserHandle>& scope);

struct DegreeWeightStats {
  double k_out = 0.0;
  double k_in = 0.0;
  double w_out = 0.0;
  double w_in = 0.0;
};

struct NetworkOptions {
  /// Count only arcs whose other endpoint is also in scope when averaging degrees
  /// and weights. Off: arcs to or from any roster member count.
  bool degrees_within_scope = false;
};

/// Averages over the scope's members. Throws std::invalid_argument on an empty scope.
DegreeWeightStats degree_weight_stats(const PracticeGraph& graph, const std::set<UserHandle>& scope,
                                      const NetworkOptions& options = {});

struct Homophily {
  std::map<GroupId, std::optional<double>> by_group;
  std::optional<double> total;
};

/// Individual-level homophily: each sender's share of out-weight to its own group,
/// averaged over senders (per group and overall). Nodes without out-arcs are skipped.
Homophily homophily(const PracticeGraph& graph, std::span<const GroupId> groups = {});

inline constexpr std::string_view kTotalGroup = "TOTAL";

struct GroupNetworkStats {
  std::string group;
  std::size_t members = 0;
  std::optional<double> density;
  std::optional<DegreeWeightStats> degrees;
  std::optional<double> homophily;
};

/// One row per group (in the given order) followed by TOTAL.
std::vector<GroupNetworkStats> network_stats(const PracticeGraph& graph,
                                             std::span<const GroupId> groups,
                                             const NetworkOptions& options = {});

/// "source,target,weight,source_group,target_group"
void write_edges_csv(std::ostream& out, const PracticeGraph& graph);
/// "group,members,D,k_out,k_in,w_out,w_in,H"
void write_network_stats_csv(std::ostream& out, std::span<const GroupNetworkStats> stats);

}  // namespace culturestream
