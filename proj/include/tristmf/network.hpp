#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "tristmf/matrix.hpp"
#include "tristmf/trifactor.hpp"

// Four-partition networks: construction, partitioning strategies, block
// matrix extraction, edge sampling and whole-network prediction, plus the
// interaction-data ingestion pipeline.

namespace tristmf {

using NodeId = std::int64_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
};

class WeightedNetwork {
 public:
  WeightedNetwork() = default;
  WeightedNetwork(std::vector<NodeId> node_ids, std::vector<Edge> edges,
                  bool directed);

  const std::vector<NodeId>& node_ids() const { return node_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool directed() const { return directed_; }
  std::size_t node_count() const { return node_ids_.size(); }

  /// Edge weight between u and v, orientation-insensitive for undirected
  /// networks; nullopt when absent.
  std::optional<double> weight(NodeId u, NodeId v) const;
  std::size_t node_index(NodeId id) const;
  bool has_node(NodeId id) const;

 private:
  std::vector<NodeId> node_ids_;
  std::vector<Edge> edges_;
  bool directed_ = false;
  std::unordered_map<NodeId, std::size_t> index_;
  std::unordered_map<std::uint64_t, double> weight_by_pair_;

  std::uint64_t pair_key(NodeId u, NodeId v) const;
};

enum class Role { kX, kY, kW, kZ };

const char* role_name(Role role);
std::optional<Role> role_from_name(const std::string& name);

// Role lists are kept sorted by node id; block matrix rows/columns follow
// these orderings.
struct FourPartition {
  std::vector<NodeId> x, y, w, z;

  std::array<std::size_t, 4> sizes() const {
    return {x.size(), y.size(), w.size(), z.size()};
  }
  std::size_t node_count() const {
    return x.size() + y.size() + w.size() + z.size();
  }
  std::optional<Role> role_of(NodeId id) const;
  const std::vector<NodeId>& nodes_in(Role role) const;

  /// 100·(m+n)/(m+r1+r2+n).
  double mu_percent() const;
  /// Rounded to the nearest integer percent, as reported.
  int mu_percent_rounded() const;
};

struct BlockMatrices {
  MaskedMatrix r;   // m×n, X–Z weights, absent edges masked
  MaskedMatrix g1;  // m×r1
  MaskedMatrix s;   // r1×r2
  MaskedMatrix g2;  // r2×n
  std::vector<Edge> held_out;
};

struct SyntheticNetwork {
  WeightedNetwork network;
  FourPartition truth;
  BlockMatrices blocks;
};

/// Complete four-partite network on m+r1+r2+n nodes with uniform [0,10)
/// weights on the X–Y/Y–W/W–Z blocks and the tropical triple product on X–Z.
SyntheticNetwork gen_synthetic_tropical_network(std::size_t m, std::size_t r1,
                                                std::size_t r2, std::size_t n,
                                                std::mt19937_64& rng);

FourPartition random_partition(const std::vector<NodeId>& nodes,
                               const std::array<std::size_t, 4>& sizes,
                               std::mt19937_64& rng);

/// X and Z are fixed; the remaining nodes are split into Y and W at random.
FourPartition partially_random_partition(const std::vector<NodeId>& x_nodes,
                                         const std::vector<NodeId>& z_nodes,
                                         const std::vector<NodeId>& all_nodes,
                                         std::size_t r1, std::size_t r2,
                                         std::mt19937_64& rng);

struct BuildMatricesOptions {
  /// Real-data pipeline: additionally mask R entries equal to 0.
  bool mask_zeros = false;
};

/// R from X–Z edges; G1/S/G2 from the X–Y/Y–W/W–Z blocks with absent edges
/// filled by values drawn from the observed factor-entry pool.
BlockMatrices build_matrices(const WeightedNetwork& network,
                             const FourPartition& partition,
                             std::mt19937_64& rng,
                             const BuildMatricesOptions& options = {});

struct SampledNetwork {
  WeightedNetwork network;
  std::vector<Edge> held_out;
};

/// Edge sampling with replacement; drawing continues until the sample misses
/// at most max_missing_fraction·|E| edges, so the bound holds by
/// construction.  Held-out edges are the ones the sample missed.
std::vector<SampledNetwork> sample_networks(const WeightedNetwork& network,
                                            std::size_t count,
                                            double max_missing_fraction,
                                            std::mt19937_64& rng);

struct WholeNetworkPrediction {
  MaskedMatrix xy;  // G1
  MaskedMatrix yw;  // S
  MaskedMatrix wz;  // G2
  MaskedMatrix xw;  // G1 ⊗ S
  MaskedMatrix yz;  // S ⊗ G2
  MaskedMatrix xz;  // G1 ⊗ S ⊗ G2

  /// Prediction for a node pair, or nullopt when both nodes share a role
  /// (no block covers such pairs).
  std::optional<double> lookup(const FourPartition& partition, NodeId u,
                               NodeId v) const;
};

WholeNetworkPrediction predict_whole_network(const TriFactorization& factors,
                                             const FourPartition& partition);

// --- interaction-data pipeline ----------------------------------------

struct InteractionRecord {
  NodeId u = 0;
  NodeId v = 0;  // normalized so u < v
  double weight = 0.0;
  int day = 0;
};

/// Parses whitespace-separated `u v weight day` records, skipping %/# comment
/// lines; duplicate (u,v,day) records are summed.
std::vector<InteractionRecord> ingest_interactions(const std::string& path);

/// Undirected network whose weights are the daily averages over
/// [day_from, day_to]; zero-weight pairs are omitted and only incident nodes
/// are kept.
WeightedNetwork day_group_network(const std::vector<InteractionRecord>& table,
                                  int day_from, int day_to);

/// Ant-pair × day matrix for clustering: one row per unordered pair seen in
/// the table, one column per day in [1, max_day].
std::pair<MaskedMatrix, std::vector<std::pair<NodeId, NodeId>>>
build_pair_day_matrix(const std::vector<InteractionRecord>& table);

struct KMeansResult {
  MaskedMatrix centroids;  // k×d
  std::vector<std::size_t> assignments;
  double objective = 0.0;  // final within-cluster sum of squares
};

KMeansResult kmeans_rows(const MaskedMatrix& h, std::size_t k,
                         std::mt19937_64& rng, std::size_t max_iters = 100);

// --- community partitioning -------------------------------------------

/// Louvain modularity maximization with resolution gamma; node visit order
/// is shuffled from rng, so results are deterministic under a seed.
std::vector<std::vector<NodeId>> louvain_partition(
    const WeightedNetwork& network, double gamma, std::mt19937_64& rng);

struct FourPartitionSelection {
  FourPartition partition;
  /// r1, r2 <= min(m, n); the embedding is low-dimensional when true.
  bool ranks_within_outer = true;
};

/// Maps exactly four communities onto roles: two largest outer (largest → X),
/// remaining two inner (larger → Y), ties by smallest member id.  Throws if
/// the community count differs from four or the induced four-partite block
/// structure is disconnected.
FourPartitionSelection select_four_partition(
    const std::vector<std::vector<NodeId>>& communities,
    const WeightedNetwork& network);

/// Sweeps the gamma grid and returns the first partition that is connected
/// and reaches the mu threshold (percent).
std::optional<FourPartitionSelection> louvain_four_partition(
    const WeightedNetwork& network, const std::vector<double>& gamma_grid,
    double mu_threshold_percent, std::mt19937_64& rng);

/// Modularity of a node labeling at resolution gamma (used by tests and the
/// gamma sweep).
double modularity(const WeightedNetwork& network,
                  const std::vector<std::vector<NodeId>>& communities,
                  double gamma);

}  // namespace tristmf
