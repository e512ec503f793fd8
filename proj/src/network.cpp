#include "culturestream/network.hpp"

#include <stdexcept>

#include "culturestream/csv.hpp"

namespace culturestream {

bool PracticeGraph::add_reference(const Roster& roster, const UserHandle& source,
                                  const UserHandle& target, std::int64_t weight) {
  if (source == target || weight <= 0) return false;
  const GroupId* sg = roster.find(source);
  const GroupId* tg = roster.find(target);
  if (!sg || !tg) return false;
  nodes_.emplace(source, *sg);
  nodes_.emplace(target, *tg);
  std::int64_t& w = arcs_[{source, target}];
  w = practice_ == Practice::following ? 1 : w + weight;
  return true;
}

std::int64_t PracticeGraph::total_weight() const {
  std::int64_t n = 0;
  for (const auto& [arc, w] : arcs_) n += w;
  return n;
}

std::vector<UserHandle> PracticeGraph::members_of(const GroupId& group) const {
  std::vector<UserHandle> out;
  for (const auto& [user, g] : nodes_)
    if (g == group) out.push_back(user);
  return out;
}

std::set<UserHandle> PracticeGraph::node_set() const {
  std::set<UserHandle> out;
  for (const auto& [user, g] : nodes_) out.insert(user);
  return out;
}

PracticeGraph build_graph(std::span<const Transaction> transactions, Practice practice,
                          const Roster& roster) {
  PracticeGraph graph(practice);
  if (!is_user_kind(fact_kind_for(practice))) return graph;
  for (const Transaction& t : transactions) {
    if (t.practice != practice) continue;
    for (const Fact& f : t.facts) graph.add_reference(roster, t.author, UserHandle(f.key));
  }
  return graph;
}

std::vector<FollowEdge> read_follow_edges(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() < 2 || (*header)[0] != "source" || (*header)[1] != "target")
    throw DataError("follow edge list must start with header 'source,target'");
  std::vector<FollowEdge> edges;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() < 2)
      throw DataError("follow edge line " + std::to_string(reader.line()) + ": expected 2 fields");
    try {
      edges.push_back({UserHandle((*row)[0]), UserHandle((*row)[1])});
    } catch (const std::invalid_argument& e) {
      throw DataError("follow edge line " + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  return edges;
}

PracticeGraph build_follow_graph(std::span<const FollowEdge> edges, const Roster& roster) {
  PracticeGraph graph(Practice::following);
  for (const FollowEdge& e : edges) graph.add_reference(roster, e.source, e.target);
  return graph;
}

std::optional<double> density(const PracticeGraph& graph, const std::set<UserHandle>& scope) {
  if (scope.size() < 2) return std::nullopt;
  std::size_t inside = 0;
  for (const auto& [arc, w] : graph.arcs())
    if (scope.count(arc.first) && scope.count(arc.second)) ++inside;
  const double n = static_cast<double>(scope.size());
  return static_cast<double>(inside) / (n * (n - 1.0));
}

DegreeWeightStats degree_weight_stats(const PracticeGraph& graph, const std::set<UserHandle>& scope,
                                      const NetworkOptions& options) {
  if (scope.empty()) throw std::invalid_argument("degree statistics of an empty scope");
  DegreeWeightStats s;
  for (const auto& [arc, w] : graph.arcs()) {
    const bool src = scope.count(arc.first) > 0;
    const bool dst = scope.count(arc.second) > 0;
    if (options.degrees_within_scope && !(src && dst)) continue;
    if (src) {
      s.k_out += 1.0;
      s.w_out += static_cast<double>(w);
    }
    if (dst) {
      s.k_in += 1.0;
      s.w_in += static_cast<double>(w);
    }
  }
  const double n = static_cast<double>(scope.size());
  s.k_out /= n;
  s.k_in /= n;
  s.w_out /= n;
  s.w_in /= n;
  return s;
}

Homophily homophily(const PracticeGraph& graph, std::span<const GroupId> groups) {
  std::map<UserHandle, std::pair<std::int64_t, std::int64_t>> out;  // (same group, all)
  for (const auto& [arc, w] : graph.arcs()) {
    auto& acc = out[arc.first];
    acc.second += w;
    if (graph.nodes().at(arc.first) == graph.nodes().at(arc.second)) acc.first += w;
  }

  Homophily h;
  for (const GroupId& g : groups) h.by_group[g] = std::nullopt;
  std::map<GroupId, std::pair<double, int>> per_group;
  double sum = 0.0;
  int senders = 0;
  for (const auto& [user, acc] : out) {
    const double hu = static_cast<double>(acc.first) / static_cast<double>(acc.second);
    auto& g = per_group[graph.nodes().at(user)];
    g.first += hu;
    g.second += 1;
    sum += hu;
    ++senders;
  }
  for (const auto& [group, acc] : per_group) h.by_group[group] = acc.first / acc.second;
  if (senders > 0) h.total = sum / senders;
  return h;
}

std::vector<GroupNetworkStats> network_stats(const PracticeGraph& graph,
                                             std::span<const GroupId> groups,
                                             const NetworkOptions& options) {
  const Homophily h = homophily(graph, groups);
  auto row = [&](std::string label, const std::set<UserHandle>& scope, std::optional<double> hom) {
    GroupNetworkStats s;
    s.group = std::move(label);
    s.members = scope.size();
    s.density = density(graph, scope);
    if (!scope.empty()) s.degrees = degree_weight_stats(graph, scope, options);
    s.homophily = hom;
    return s;
  };

  std::vector<GroupNetworkStats> stats;
  for (const GroupId& g : groups) {
    std::vector<UserHandle> members = graph.members_of(g);
    auto it = h.by_group.find(g);
    stats.push_back(row(g.name(), std::set<UserHandle>(members.begin(), members.end()),
                        it == h.by_group.end() ? std::nullopt : it->second));
  }
  stats.push_back(row(std::string(kTotalGroup), graph.node_set(), h.total));
  return stats;
}

void write_edges_csv(std::ostream& out, const PracticeGraph& graph) {
  csv::Writer w(out);
  w.row({"source", "target", "weight", "source_group", "target_group"});
  for (const auto& [arc, weight] : graph.arcs())
    w.row({arc.first.name(), arc.second.name(), std::to_string(weight),
           graph.nodes().at(arc.first).name(), graph.nodes().at(arc.second).name()});
}

void write_network_stats_csv(std::ostream& out, std::span<const GroupNetworkStats> stats) {
  csv::Writer w(out);
  w.row({"group", "members", "D", "k_out", "k_in", "w_out", "w_in", "H"});
  for (const GroupNetworkStats& s : stats) {
    auto field = [&](double DegreeWeightStats::*m) {
      return s.degrees ? csv::format_number((*s.degrees).*m) : std::string();
    };
    w.row({s.group, std::to_string(s.members), csv::format_number(s.density),
           field(&DegreeWeightStats::k_out), field(&DegreeWeightStats::k_in),
           field(&DegreeWeightStats::w_out), field(&DegreeWeightStats::w_in),
           csv::format_number(s.homophily)});
  }
}

}  // namespace culturestream
