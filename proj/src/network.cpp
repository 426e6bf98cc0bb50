#include "tristmf/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "tristmf/ops.hpp"

namespace tristmf {

WeightedNetwork::WeightedNetwork(std::vector<NodeId> node_ids,
                                 std::vector<Edge> edges, bool directed)
    : node_ids_(std::move(node_ids)),
      edges_(std::move(edges)),
      directed_(directed) {
  index_.reserve(node_ids_.size());
  for (std::size_t i = 0; i < node_ids_.size(); ++i) {
    if (!index_.emplace(node_ids_[i], i).second)
      throw std::invalid_argument("WeightedNetwork: duplicate node id");
  }
  weight_by_pair_.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (!index_.count(e.u) || !index_.count(e.v))
      throw std::invalid_argument("WeightedNetwork: edge endpoint unknown");
    if (!std::isfinite(e.weight))
      throw std::invalid_argument("WeightedNetwork: non-finite weight");
    if (!weight_by_pair_.emplace(pair_key(e.u, e.v), e.weight).second)
      throw std::invalid_argument("WeightedNetwork: duplicate edge");
  }
}

std::uint64_t WeightedNetwork::pair_key(NodeId u, NodeId v) const {
  std::uint64_t a = index_.at(u);
  std::uint64_t b = index_.at(v);
  if (!directed_ && a > b) std::swap(a, b);
  return a * static_cast<std::uint64_t>(node_ids_.size()) + b;
}

std::optional<double> WeightedNetwork::weight(NodeId u, NodeId v) const {
  if (!index_.count(u) || !index_.count(v)) return std::nullopt;
  const auto it = weight_by_pair_.find(pair_key(u, v));
  if (it == weight_by_pair_.end()) return std::nullopt;
  return it->second;
}

std::size_t WeightedNetwork::node_index(NodeId id) const {
  return index_.at(id);
}

bool WeightedNetwork::has_node(NodeId id) const {
  return index_.count(id) != 0;
}

const char* role_name(Role role) {
  switch (role) {
    case Role::kX: return "X";
    case Role::kY: return "Y";
    case Role::kW: return "W";
    case Role::kZ: return "Z";
  }
  return "?";
}

std::optional<Role> role_from_name(const std::string& name) {
  if (name == "X") return Role::kX;
  if (name == "Y") return Role::kY;
  if (name == "W") return Role::kW;
  if (name == "Z") return Role::kZ;
  return std::nullopt;
}

std::optional<Role> FourPartition::role_of(NodeId id) const {
  const auto contains = [id](const std::vector<NodeId>& xs) {
    return std::binary_search(xs.begin(), xs.end(), id);
  };
  if (contains(x)) return Role::kX;
  if (contains(y)) return Role::kY;
  if (contains(w)) return Role::kW;
  if (contains(z)) return Role::kZ;
  return std::nullopt;
}

const std::vector<NodeId>& FourPartition::nodes_in(Role role) const {
  switch (role) {
    case Role::kX: return x;
    case Role::kY: return y;
    case Role::kW: return w;
    case Role::kZ: return z;
  }
  throw std::logic_error("nodes_in: bad role");
}

double FourPartition::mu_percent() const {
  const double outer = static_cast<double>(x.size() + z.size());
  const double total = static_cast<double>(node_count());
  return 100.0 * outer / total;
}

int FourPartition::mu_percent_rounded() const {
  return static_cast<int>(std::llround(mu_percent()));
}

SyntheticNetwork gen_synthetic_tropical_network(std::size_t m, std::size_t r1,
                                                std::size_t r2, std::size_t n,
                                                std::mt19937_64& rng) {
  if (m == 0 || r1 == 0 || r2 == 0 || n == 0)
    throw std::invalid_argument("gen_synthetic_tropical_network: sizes >= 1");
  std::uniform_real_distribution<double> weight(0.0, 10.0);

  const auto fill = [&](std::size_t rows, std::size_t cols) {
    MaskedMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = weight(rng);
    return out;
  };
  const MaskedMatrix m1 = fill(m, r1);
  const MaskedMatrix t = fill(r1, r2);
  const MaskedMatrix m2 = fill(r2, n);
  const MaskedMatrix e = maxplus_matmul(m1, maxplus_matmul(t, m2));

  SyntheticNetwork out;
  auto& part = out.truth;
  NodeId next = 0;
  for (std::size_t i = 0; i < m; ++i) part.x.push_back(next++);
  for (std::size_t i = 0; i < r1; ++i) part.y.push_back(next++);
  for (std::size_t i = 0; i < r2; ++i) part.w.push_back(next++);
  for (std::size_t i = 0; i < n; ++i) part.z.push_back(next++);

  std::vector<NodeId> nodes(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    nodes[i] = static_cast<NodeId>(i);

  std::vector<Edge> edges;
  edges.reserve(m * r1 + r1 * r2 + r2 * n + m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < r1; ++j)
      edges.push_back({part.x[i], part.y[j], m1.at(i, j)});
  for (std::size_t j = 0; j < r1; ++j)
    for (std::size_t k = 0; k < r2; ++k)
      edges.push_back({part.y[j], part.w[k], t.at(j, k)});
  for (std::size_t k = 0; k < r2; ++k)
    for (std::size_t l = 0; l < n; ++l)
      edges.push_back({part.w[k], part.z[l], m2.at(k, l)});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < n; ++l)
      edges.push_back({part.x[i], part.z[l], e.at(i, l)});

  out.network = WeightedNetwork(std::move(nodes), std::move(edges), false);
  out.blocks.r = e;
  out.blocks.g1 = m1;
  out.blocks.s = t;
  out.blocks.g2 = m2;
  return out;
}

FourPartition random_partition(const std::vector<NodeId>& nodes,
                               const std::array<std::size_t, 4>& sizes,
                               std::mt19937_64& rng) {
  if (sizes[0] + sizes[1] + sizes[2] + sizes[3] != nodes.size())
    throw std::invalid_argument("random_partition: sizes do not sum");
  std::vector<NodeId> pool = nodes;
  std::shuffle(pool.begin(), pool.end(), rng);
  FourPartition part;
  auto take = [&](std::vector<NodeId>& dst, std::size_t count,
                  std::size_t offset) {
    dst.assign(pool.begin() + offset, pool.begin() + offset + count);
    std::sort(dst.begin(), dst.end());
  };
  take(part.x, sizes[0], 0);
  take(part.y, sizes[1], sizes[0]);
  take(part.w, sizes[2], sizes[0] + sizes[1]);
  take(part.z, sizes[3], sizes[0] + sizes[1] + sizes[2]);
  return part;
}

FourPartition partially_random_partition(const std::vector<NodeId>& x_nodes,
                                         const std::vector<NodeId>& z_nodes,
                                         const std::vector<NodeId>& all_nodes,
                                         std::size_t r1, std::size_t r2,
                                         std::mt19937_64& rng) {
  std::set<NodeId> fixed(x_nodes.begin(), x_nodes.end());
  for (NodeId id : z_nodes)
    if (!fixed.insert(id).second)
      throw std::invalid_argument(
          "partially_random_partition: X and Z overlap");
  std::vector<NodeId> rest;
  for (NodeId id : all_nodes)
    if (!fixed.count(id)) rest.push_back(id);
  if (rest.size() != r1 + r2)
    throw std::invalid_argument(
        "partially_random_partition: remaining nodes != r1 + r2");
  std::shuffle(rest.begin(), rest.end(), rng);
  FourPartition part;
  part.x = x_nodes;
  part.z = z_nodes;
  std::sort(part.x.begin(), part.x.end());
  std::sort(part.z.begin(), part.z.end());
  part.y.assign(rest.begin(), rest.begin() + r1);
  part.w.assign(rest.begin() + r1, rest.end());
  std::sort(part.y.begin(), part.y.end());
  std::sort(part.w.begin(), part.w.end());
  return part;
}

BlockMatrices build_matrices(const WeightedNetwork& network,
                             const FourPartition& partition,
                             std::mt19937_64& rng,
                             const BuildMatricesOptions& options) {
  for (NodeId id : network.node_ids())
    if (!partition.role_of(id))
      throw std::invalid_argument("build_matrices: node without a role");

  const auto& xs = partition.x;
  const auto& ys = partition.y;
  const auto& ws = partition.w;
  const auto& zs = partition.z;

  BlockMatrices out;
  out.r = MaskedMatrix(xs.size(), zs.size(), 0.0, false);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t l = 0; l < zs.size(); ++l)
      if (const auto w = network.weight(xs[i], zs[l])) {
        if (options.mask_zeros && *w == 0.0) continue;
        out.r.set(i, l, *w, true);
      }

  // factor blocks: place the existing edges, pool their values, then fill
  // the gaps from the pool
  struct Gap {
    MaskedMatrix* mat;
    std::size_t i, j;
  };
  std::vector<Gap> gaps;
  std::vector<double> pool;

  const auto fill_block = [&](MaskedMatrix& mat,
                              const std::vector<NodeId>& rows,
                              const std::vector<NodeId>& cols) {
    mat = MaskedMatrix(rows.size(), cols.size(), 0.0, true);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (const auto w = network.weight(rows[i], cols[j])) {
          mat.at(i, j) = *w;
          pool.push_back(*w);
        } else {
          gaps.push_back({&mat, i, j});
        }
      }
  };
  fill_block(out.g1, xs, ys);
  fill_block(out.s, ys, ws);
  fill_block(out.g2, ws, zs);

  if (!pool.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (const Gap& g : gaps) g.mat->at(g.i, g.j) = pool[pick(rng)];
  }
  return out;
}

std::vector<SampledNetwork> sample_networks(const WeightedNetwork& network,
                                            std::size_t count,
                                            double max_missing_fraction,
                                            std::mt19937_64& rng) {
  if (count == 0) throw std::invalid_argument("sample_networks: count >= 1");
  if (max_missing_fraction < 0.0 || max_missing_fraction >= 1.0)
    throw std::invalid_argument("sample_networks: fraction in [0,1)");
  const std::vector<Edge>& edges = network.edges();
  const std::size_t e_count = edges.size();
  const std::size_t allowed_missing = static_cast<std::size_t>(
      std::floor(max_missing_fraction * static_cast<double>(e_count)));

  std::vector<SampledNetwork> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<char> drawn(e_count, 0);
    std::size_t distinct = 0;
    if (e_count > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, e_count - 1);
      for (std::size_t d = 0; d < e_count; ++d) {
        const std::size_t idx = pick(rng);
        if (!drawn[idx]) {
          drawn[idx] = 1;
          ++distinct;
        }
      }
      // keep drawing until the sample misses at most the allowed number
      while (e_count - distinct > allowed_missing) {
        const std::size_t idx = pick(rng);
        if (!drawn[idx]) {
          drawn[idx] = 1;
          ++distinct;
        }
      }
    }
    SampledNetwork sample;
    std::vector<Edge> kept;
    kept.reserve(distinct);
    for (std::size_t i = 0; i < e_count; ++i)
      (drawn[i] ? kept : sample.held_out).push_back(edges[i]);
    sample.network =
        WeightedNetwork(network.node_ids(), std::move(kept),
                        network.directed());
    out.push_back(std::move(sample));
  }
  return out;
}

std::optional<double> WholeNetworkPrediction::lookup(
    const FourPartition& partition, NodeId u, NodeId v) const {
  const auto ru = partition.role_of(u);
  const auto rv = partition.role_of(v);
  if (!ru || !rv || *ru == *rv) return std::nullopt;

  const auto pos = [&](Role role, NodeId id) {
    const auto& nodes = partition.nodes_in(role);
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  Role a = *ru, b = *rv;
  NodeId na = u, nb = v;
  if (static_cast<int>(a) > static_cast<int>(b)) {
    std::swap(a, b);
    std::swap(na, nb);
  }
  const std::size_t i = pos(a, na);
  const std::size_t j = pos(b, nb);
  if (a == Role::kX && b == Role::kY) return xy.at(i, j);
  if (a == Role::kY && b == Role::kW) return yw.at(i, j);
  if (a == Role::kW && b == Role::kZ) return wz.at(i, j);
  if (a == Role::kX && b == Role::kW) return xw.at(i, j);
  if (a == Role::kY && b == Role::kZ) return yz.at(i, j);
  if (a == Role::kX && b == Role::kZ) return xz.at(i, j);
  return std::nullopt;
}

WholeNetworkPrediction predict_whole_network(const TriFactorization& factors,
                                             const FourPartition& partition) {
  const auto sizes = partition.sizes();
  if (factors.g1.rows() != sizes[0] || factors.g1.cols() != sizes[1] ||
      factors.s.rows() != sizes[1] || factors.s.cols() != sizes[2] ||
      factors.g2.rows() != sizes[2] || factors.g2.cols() != sizes[3])
    throw std::invalid_argument(
        "predict_whole_network: factor shapes do not match the partition");
  WholeNetworkPrediction p;
  p.xy = factors.g1;
  p.yw = factors.s;
  p.wz = factors.g2;
  p.xw = maxplus_matmul(factors.g1, factors.s);
  p.yz = maxplus_matmul(factors.s, factors.g2);
  p.xz = factors.product();
  return p;
}

std::vector<InteractionRecord> ingest_interactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_interactions: cannot open " + path);

  std::map<std::tuple<NodeId, NodeId, int>, double> agg;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%' || line[first] == '#') continue;
    std::istringstream ss(line.substr(first));
    NodeId u, v;
    double weight;
    if (!(ss >> u >> v >> weight))
      throw std::runtime_error("ingest_interactions: malformed line: " + line);
    int day = 1;
    ss >> day;  // optional; keeps 1 when absent
    if (u == v) continue;  // self-interactions carry no weight
    if (u > v) std::swap(u, v);
    agg[{u, v, day}] += weight;
  }

  std::vector<InteractionRecord> out;
  out.reserve(agg.size());
  for (const auto& [key, weight] : agg)
    out.push_back(
        {std::get<0>(key), std::get<1>(key), weight, std::get<2>(key)});
  return out;
}

WeightedNetwork day_group_network(const std::vector<InteractionRecord>& table,
                                  int day_from, int day_to) {
  if (day_from > day_to)
    throw std::invalid_argument("day_group_network: empty day range");
  const double days = static_cast<double>(day_to - day_from + 1);

  std::map<std::pair<NodeId, NodeId>, double> sums;
  for (const InteractionRecord& rec : table) {
    if (rec.day < day_from || rec.day > day_to) continue;
    sums[{rec.u, rec.v}] += rec.weight;
  }

  std::set<NodeId> nodes;
  std::vector<Edge> edges;
  for (const auto& [pair, total] : sums) {
    const double avg = total / days;
    if (avg == 0.0) continue;
    edges.push_back({pair.first, pair.second, avg});
    nodes.insert(pair.first);
    nodes.insert(pair.second);
  }
  return WeightedNetwork(std::vector<NodeId>(nodes.begin(), nodes.end()),
                         std::move(edges), false);
}

std::pair<MaskedMatrix, std::vector<std::pair<NodeId, NodeId>>>
build_pair_day_matrix(const std::vector<InteractionRecord>& table) {
  std::set<std::pair<NodeId, NodeId>> pair_set;
  int max_day = 0;
  for (const InteractionRecord& rec : table) {
    pair_set.insert({rec.u, rec.v});
    max_day = std::max(max_day, rec.day);
  }
  std::vector<std::pair<NodeId, NodeId>> pairs(pair_set.begin(),
                                               pair_set.end());
  MaskedMatrix h(pairs.size(), static_cast<std::size_t>(max_day), 0.0);
  std::map<std::pair<NodeId, NodeId>, std::size_t> row_of;
  for (std::size_t i = 0; i < pairs.size(); ++i) row_of[pairs[i]] = i;
  for (const InteractionRecord& rec : table)
    h.at(row_of[{rec.u, rec.v}], static_cast<std::size_t>(rec.day - 1)) +=
        rec.weight;
  return {std::move(h), std::move(pairs)};
}

KMeansResult kmeans_rows(const MaskedMatrix& h, std::size_t k,
                         std::mt19937_64& rng, std::size_t max_iters) {
  if (k == 0 || k > h.rows())
    throw std::invalid_argument("kmeans_rows: need 1 <= k <= rows");
  const std::size_t n = h.rows(), d = h.cols();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  MaskedMatrix centroids(k, d, 0.0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < d; ++j)
      centroids.at(c, j) = h.at(order[c], j);

  std::vector<std::size_t> assign(n, 0);
  double objective = 0.0;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_c = 0;
      for (std::size_t c = 0; c < k; ++c) {
        double dist = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = h.at(i, j) - centroids.at(c, j);
          dist += diff * diff;
        }
        if (dist < best) {
          best = dist;
          best_c = c;
        }
      }
      if (assign[i] != best_c) {
        assign[i] = best_c;
        changed = true;
      }
      objective += best;
    }
    if (!changed && iter > 0) break;

    std::vector<std::size_t> counts(k, 0);
    MaskedMatrix sums(k, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t j = 0; j < d; ++j)
        sums.at(assign[i], j) += h.at(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t j = 0; j < d; ++j)
        centroids.at(c, j) = sums.at(c, j) / static_cast<double>(counts[c]);
    }
  }
  return {std::move(centroids), std::move(assign), objective};
}

}  // namespace tristmf
