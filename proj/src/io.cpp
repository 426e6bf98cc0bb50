#include "tristmf/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tristmf/matrix_io.hpp"

namespace tristmf {

std::vector<Edge> read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<Edge> edges;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%' || line[first] == '#') continue;
    std::istringstream ss(line.substr(first));
    Edge e;
    if (!(ss >> e.u >> e.v >> e.weight))
      throw std::runtime_error("edge list: malformed line: " + line);
    edges.push_back(e);  // trailing day field, when present, is ignored here
  }
  return edges;
}

void write_edge_list(const std::string& path, const std::vector<Edge>& edges) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (const Edge& e : edges)
    out << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
}

WeightedNetwork network_from_edge_list(const std::string& path) {
  const std::vector<Edge> edges = read_edge_list(path);
  std::set<NodeId> nodes;
  for (const Edge& e : edges) {
    nodes.insert(e.u);
    nodes.insert(e.v);
  }
  return WeightedNetwork(std::vector<NodeId>(nodes.begin(), nodes.end()),
                         edges, false);
}

FourPartition read_partition_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition json: " + path);
  nlohmann::json j;
  in >> j;
  FourPartition part;
  for (const auto& [key, value] : j.items()) {
    const NodeId id = std::stoll(key);
    const auto role = role_from_name(value.get<std::string>());
    if (!role)
      throw std::runtime_error("partition json: bad role for node " + key);
    switch (*role) {
      case Role::kX: part.x.push_back(id); break;
      case Role::kY: part.y.push_back(id); break;
      case Role::kW: part.w.push_back(id); break;
      case Role::kZ: part.z.push_back(id); break;
    }
  }
  std::sort(part.x.begin(), part.x.end());
  std::sort(part.y.begin(), part.y.end());
  std::sort(part.w.begin(), part.w.end());
  std::sort(part.z.begin(), part.z.end());
  return part;
}

void write_partition_json(const std::string& path,
                          const FourPartition& partition) {
  nlohmann::json j = nlohmann::json::object();
  const auto add = [&](const std::vector<NodeId>& nodes, const char* role) {
    for (NodeId id : nodes) j[std::to_string(id)] = role;
  };
  add(partition.x, "X");
  add(partition.y, "Y");
  add(partition.w, "W");
  add(partition.z, "Z");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write partition json: " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json matrix_to_json(const MaskedMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m.observed(i, j)) {
        row.push_back(nullptr);
      } else {
        const double v = m.at(i, j);
        if (v == kNegInf)
          row.push_back("-inf");
        else if (v == kPosInf)
          row.push_back("inf");
        else
          row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()},
                        {"values", std::move(rows)}};
}

MaskedMatrix matrix_from_json(const nlohmann::json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  MaskedMatrix m(rows, cols);
  const nlohmann::json& values = j.at("values");
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) {
      const nlohmann::json& cell = values.at(i).at(c);
      if (cell.is_null())
        m.set(i, c, 0.0, false);
      else if (cell.is_string())
        m.set(i, c, cell.get<std::string>() == "-inf" ? kNegInf : kPosInf,
              true);
      else
        m.set(i, c, cell.get<double>(), true);
    }
  return m;
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::json record_to_json(const MetricsRecord& record) {
  nlohmann::json j{{"method", record.method},
                   {"dataset", record.dataset},
                   {"seed", record.seed},
                   {"rmse_a", finite_or_null(record.rmse_a)},
                   {"rmse_p", finite_or_null(record.rmse_p)},
                   {"final_b_norm", finite_or_null(record.final_b_norm)},
                   {"elapsed_seconds", record.elapsed_seconds},
                   {"rank_exceeds_dim", record.rank_exceeds_dim}};
  nlohmann::json trace = nlohmann::json::array();
  for (const TracePoint& p : record.trace)
    trace.push_back(nlohmann::json{{"elapsed_seconds", p.elapsed_seconds},
                                   {"b_norm", p.b_norm},
                                   {"phase", p.phase}});
  j["trace"] = std::move(trace);
  if (record.partition_sizes) {
    j["partition_sizes"] = *record.partition_sizes;
  }
  if (record.mu_percent) j["mu_percent"] = *record.mu_percent;
  if (record.rand_score) j["rand_score"] = *record.rand_score;
  if (!record.extra.empty()) j["extra"] = record.extra;
  return j;
}

nlohmann::json fit_result_to_json(const FitResult& result,
                                  const nlohmann::json& config_echo) {
  return nlohmann::json{
      {"method", result.record.method},
      {"config", config_echo},
      {"factors",
       {{"g1", matrix_to_json(result.factors.g1)},
        {"s", matrix_to_json(result.factors.s)},
        {"g2", matrix_to_json(result.factors.g2)},
        {"r1", result.factors.r1},
        {"r2", result.factors.r2}}},
      {"metrics", record_to_json(result.record)}};
}

void write_fit_result_json(const std::string& path, const FitResult& result,
                           const nlohmann::json& config_echo) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write result json: " + path);
  out << fit_result_to_json(result, config_echo).dump(2) << '\n';
}

FitResult read_fit_result_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open result json: " + path);
  nlohmann::json j;
  in >> j;
  FitResult result;
  const nlohmann::json& f = j.at("factors");
  result.factors.g1 = matrix_from_json(f.at("g1"));
  result.factors.s = matrix_from_json(f.at("s"));
  result.factors.g2 = matrix_from_json(f.at("g2"));
  result.factors.r1 = f.at("r1").get<std::size_t>();
  result.factors.r2 = f.at("r2").get<std::size_t>();
  const nlohmann::json& m = j.at("metrics");
  result.record.method = m.at("method").get<std::string>();
  result.record.seed = m.at("seed").get<std::uint64_t>();
  if (!m.at("rmse_a").is_null())
    result.record.rmse_a = m.at("rmse_a").get<double>();
  if (!m.at("rmse_p").is_null())
    result.record.rmse_p = m.at("rmse_p").get<double>();
  if (!m.at("final_b_norm").is_null())
    result.record.final_b_norm = m.at("final_b_norm").get<double>();
  result.record.elapsed_seconds = m.at("elapsed_seconds").get<double>();
  result.record.rank_exceeds_dim = m.at("rank_exceeds_dim").get<bool>();
  for (const nlohmann::json& p : m.at("trace"))
    result.record.trace.push_back({p.at("elapsed_seconds").get<double>(),
                                   p.at("b_norm").get<double>(),
                                   p.at("phase").get<int>()});
  return result;
}

}  // namespace tristmf
