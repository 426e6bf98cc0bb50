#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tristmf/baselines.hpp"
#include "tristmf/network.hpp"
#include "tristmf/trifactor.hpp"

// Edge-list files, partition JSON and fit-result JSON.

namespace tristmf {

/// `u v weight [day]`, whitespace-separated, %/# comment lines.
std::vector<Edge> read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const std::vector<Edge>& edges);

/// Undirected network from an edge-list file; nodes are the sorted endpoint
/// ids.
WeightedNetwork network_from_edge_list(const std::string& path);

/// {"<node id>": "X"|"Y"|"W"|"Z"}
FourPartition read_partition_json(const std::string& path);
void write_partition_json(const std::string& path,
                          const FourPartition& partition);

nlohmann::json matrix_to_json(const MaskedMatrix& m);
MaskedMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const MetricsRecord& record);

nlohmann::json fit_result_to_json(const FitResult& result,
                                  const nlohmann::json& config_echo);
void write_fit_result_json(const std::string& path, const FitResult& result,
                           const nlohmann::json& config_echo);

/// Factors + record back from a result file (for predict-network).
FitResult read_fit_result_json(const std::string& path);

}  // namespace tristmf
