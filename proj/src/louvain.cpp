#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "tristmf/network.hpp"

// Louvain modularity maximization with a resolution parameter.  Node visit
// order is drawn from the caller's rng; all tie-breaks prefer the smaller
// community index, so a seed fully determines the result.

namespace tristmf {

namespace {

struct LevelGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_weight;  // aggregated internal weight, counted once
  std::vector<double> degree;       // Σ_j w_ij + 2·self
  double two_w = 0.0;
};

LevelGraph from_network(const WeightedNetwork& net) {
  LevelGraph g;
  g.n = net.node_count();
  g.adj.resize(g.n);
  g.self_weight.assign(g.n, 0.0);
  for (const Edge& e : net.edges()) {
    const std::size_t a = net.node_index(e.u);
    const std::size_t b = net.node_index(e.v);
    if (a == b) {
      g.self_weight[a] += e.weight;
      continue;
    }
    g.adj[a].push_back({b, e.weight});
    g.adj[b].push_back({a, e.weight});
  }
  g.degree.assign(g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    double k = 2.0 * g.self_weight[i];
    for (const auto& [j, w] : g.adj[i]) k += w;
    g.degree[i] = k;
  }
  g.two_w = std::accumulate(g.degree.begin(), g.degree.end(), 0.0);
  return g;
}

// One local-moving phase; returns the community label per node (compacted,
// ordered by smallest member) and whether any node moved.
bool local_moving(const LevelGraph& g, std::mt19937_64& rng, double gamma,
                  std::vector<std::size_t>& community) {
  community.resize(g.n);
  std::iota(community.begin(), community.end(), std::size_t{0});
  std::vector<double> tot(g.degree);  // Σ degrees per community

  std::vector<std::size_t> order(g.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  if (g.two_w <= 0.0) return false;

  bool any_move = false;
  bool improved = true;
  std::vector<double> weight_to(g.n, 0.0);
  while (improved) {
    improved = false;
    for (const std::size_t i : order) {
      const std::size_t old_c = community[i];
      // neighbouring communities and edge weight into each
      std::vector<std::size_t> seen;
      for (const auto& [j, w] : g.adj[i]) {
        const std::size_t c = community[j];
        if (weight_to[c] == 0.0 && w != 0.0) seen.push_back(c);
        weight_to[c] += w;
      }
      tot[old_c] -= g.degree[i];

      const auto gain = [&](std::size_t c) {
        return weight_to[c] - gamma * tot[c] * g.degree[i] / g.two_w;
      };
      double best_gain = gain(old_c);
      std::size_t best_c = old_c;
      // ascending scan + strict improvement: ties keep the smaller index
      std::sort(seen.begin(), seen.end());
      for (const std::size_t c : seen) {
        const double gc = gain(c);
        if (gc > best_gain) {
          best_gain = gc;
          best_c = c;
        }
      }
      tot[best_c] += g.degree[i];
      community[i] = best_c;
      if (best_c != old_c) {
        improved = true;
        any_move = true;
      }
      for (const auto& [j, w] : g.adj[i]) weight_to[community[j]] = 0.0;
      weight_to[old_c] = 0.0;
      weight_to[best_c] = 0.0;
    }
  }

  // compact labels in order of first appearance over node index
  std::vector<std::size_t> remap(g.n, static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (remap[community[i]] == static_cast<std::size_t>(-1))
      remap[community[i]] = next++;
    community[i] = remap[community[i]];
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& g,
                     const std::vector<std::size_t>& community,
                     std::size_t community_count) {
  LevelGraph out;
  out.n = community_count;
  out.adj.resize(out.n);
  out.self_weight.assign(out.n, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> between;
  for (std::size_t i = 0; i < g.n; ++i) {
    out.self_weight[community[i]] += g.self_weight[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (j < i) continue;  // each undirected edge once
      const std::size_t a = community[i];
      const std::size_t b = community[j];
      if (a == b)
        out.self_weight[a] += w;
      else
        between[{std::min(a, b), std::max(a, b)}] += w;
    }
  }
  for (const auto& [pair, w] : between) {
    out.adj[pair.first].push_back({pair.second, w});
    out.adj[pair.second].push_back({pair.first, w});
  }
  out.degree.assign(out.n, 0.0);
  for (std::size_t i = 0; i < out.n; ++i) {
    double k = 2.0 * out.self_weight[i];
    for (const auto& [j, w] : out.adj[i]) k += w;
    out.degree[i] = k;
  }
  out.two_w = g.two_w;
  return out;
}

}  // namespace

std::vector<std::vector<NodeId>> louvain_partition(
    const WeightedNetwork& network, double gamma, std::mt19937_64& rng) {
  const std::size_t n = network.node_count();
  if (n == 0) return {};

  // node_to_comm maps original nodes through all aggregation levels
  std::vector<std::size_t> node_to_comm(n);
  std::iota(node_to_comm.begin(), node_to_comm.end(), std::size_t{0});

  LevelGraph g = from_network(network);
  while (true) {
    std::vector<std::size_t> community;
    const bool moved = local_moving(g, rng, gamma, community);
    const std::size_t count =
        community.empty()
            ? 0
            : *std::max_element(community.begin(), community.end()) + 1;
    for (std::size_t& c : node_to_comm) c = community[c];
    if (!moved || count == g.n) break;
    g = aggregate(g, community, count);
  }

  std::map<std::size_t, std::vector<NodeId>> groups;
  for (std::size_t i = 0; i < n; ++i)
    groups[node_to_comm[i]].push_back(network.node_ids()[i]);
  std::vector<std::vector<NodeId>> out;
  out.reserve(groups.size());
  for (auto& [label, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

double modularity(const WeightedNetwork& network,
                  const std::vector<std::vector<NodeId>>& communities,
                  double gamma) {
  const std::size_t n = network.node_count();
  std::vector<int> label(n, -1);
  for (std::size_t c = 0; c < communities.size(); ++c)
    for (NodeId id : communities[c])
      label[network.node_index(id)] = static_cast<int>(c);
  for (int l : label)
    if (l < 0) throw std::invalid_argument("modularity: uncovered node");

  std::vector<double> degree(n, 0.0);
  double two_w = 0.0;
  std::vector<double> in_c(communities.size(), 0.0);
  std::vector<double> tot_c(communities.size(), 0.0);
  for (const Edge& e : network.edges()) {
    const std::size_t a = network.node_index(e.u);
    const std::size_t b = network.node_index(e.v);
    const double w = a == b ? 2.0 * e.weight : e.weight;
    degree[a] += w;
    if (a != b) degree[b] += w;
    if (label[a] == label[b])
      in_c[label[a]] += a == b ? w : 2.0 * e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    two_w += degree[i];
    tot_c[label[i]] += degree[i];
  }
  if (two_w <= 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < communities.size(); ++c) {
    const double frac_tot = tot_c[c] / two_w;
    q += in_c[c] / two_w - gamma * frac_tot * frac_tot;
  }
  return q;
}

FourPartitionSelection select_four_partition(
    const std::vector<std::vector<NodeId>>& communities,
    const WeightedNetwork& network) {
  if (communities.size() != 4)
    throw std::invalid_argument(
        "select_four_partition: need exactly four communities");
  std::vector<std::vector<NodeId>> sorted = communities;
  for (auto& c : sorted) std::sort(c.begin(), c.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });

  FourPartitionSelection sel;
  sel.partition.x = sorted[0];
  sel.partition.z = sorted[1];
  sel.partition.y = sorted[2];
  sel.partition.w = sorted[3];

  // connectivity of the induced four-partite block structure
  const std::size_t n = network.node_count();
  std::vector<std::vector<std::size_t>> adj(n);
  const auto blocks_edge = [&](Role a, Role b) {
    if (static_cast<int>(a) > static_cast<int>(b)) std::swap(a, b);
    return (a == Role::kX && b == Role::kY) ||
           (a == Role::kY && b == Role::kW) ||
           (a == Role::kW && b == Role::kZ) ||
           (a == Role::kX && b == Role::kZ);
  };
  for (const Edge& e : network.edges()) {
    const auto ra = sel.partition.role_of(e.u);
    const auto rb = sel.partition.role_of(e.v);
    if (!ra || !rb || *ra == *rb) continue;
    if (!blocks_edge(*ra, *rb)) continue;
    adj[network.node_index(e.u)].push_back(network.node_index(e.v));
    adj[network.node_index(e.v)].push_back(network.node_index(e.u));
  }
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop();
    for (const std::size_t nxt : adj[cur])
      if (!seen[nxt]) {
        seen[nxt] = 1;
        ++reached;
        frontier.push(nxt);
      }
  }
  if (reached != n)
    throw std::runtime_error(
        "select_four_partition: induced four-partite structure is "
        "disconnected; try a different gamma");

  const std::size_t min_outer =
      std::min(sel.partition.x.size(), sel.partition.z.size());
  sel.ranks_within_outer = sel.partition.y.size() <= min_outer &&
                           sel.partition.w.size() <= min_outer;
  return sel;
}

std::optional<FourPartitionSelection> louvain_four_partition(
    const WeightedNetwork& network, const std::vector<double>& gamma_grid,
    double mu_threshold_percent, std::mt19937_64& rng) {
  for (const double gamma : gamma_grid) {
    const auto communities = louvain_partition(network, gamma, rng);
    if (communities.size() != 4) continue;
    try {
      FourPartitionSelection sel = select_four_partition(communities, network);
      if (sel.partition.mu_percent() >= mu_threshold_percent) return sel;
    } catch (const std::runtime_error&) {
      continue;  // disconnected; next gamma
    }
  }
  return std::nullopt;
}

}  // namespace tristmf
