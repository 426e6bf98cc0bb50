#include <stdexcept>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tristmf/io.hpp"
#include "tristmf/matrix_io.hpp"

using namespace tristmf;

namespace {

std::string temp_path(const std::string& name) {
  return "/tmp/tristmf_io_" + name;
}

}  // namespace

TEST_CASE("matrix csv") {
  SUBCASE("reader handles missing, -inf and plain values") {
    std::istringstream in("1.5,,3\n-inf,NaN,-2.25\n");
    const MaskedMatrix m = read_matrix_csv(in);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.at(0, 0) == 1.5);
    CHECK_FALSE(m.observed(0, 1));
    CHECK(m.at(1, 0) == kNegInf);
    CHECK_FALSE(m.observed(1, 1));
    CHECK(m.at(1, 2) == -2.25);
  }

  SUBCASE("writer round-trips the reader bit-exactly") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    MaskedMatrix m(17, 13);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const double p = coin(rng);
        if (p < 0.1)
          m.set(i, j, 0.0, false);
        else if (p < 0.2)
          m.set(i, j, kNegInf, true);
        else if (p < 0.3)
          m.set(i, j, val(rng) * 1e-300, true);  // subnormal-ish magnitudes
        else
          m.set(i, j, val(rng), true);
      }
    std::ostringstream out;
    write_matrix_csv(out, m);
    std::istringstream in(out.str());
    const MaskedMatrix back = read_matrix_csv(in);
    CHECK(back == m);

    // and the text itself is stable under a second pass
    std::ostringstream out2;
    write_matrix_csv(out2, back);
    CHECK(out.str() == out2.str());
  }

  SUBCASE("ragged input is rejected") {
    std::istringstream in("1,2\n3\n");
    CHECK_THROWS_AS(read_matrix_csv(in), std::runtime_error);
  }

  SUBCASE("garbage is rejected") {
    std::istringstream in("1,foo\n");
    CHECK_THROWS_AS(read_matrix_csv(in), std::runtime_error);
  }
}

TEST_CASE("edge list files") {
  const std::string path = temp_path("edges.txt");
  {
    std::ofstream out(path);
    out << "% comment\n"
        << "1 2 1.5\n"
        << "# another\n"
        << "2 3 -0.25 7\n";  // trailing day column is ignored
  }
  const std::vector<Edge> edges = read_edge_list(path);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].u == 1);
  CHECK(edges[0].weight == 1.5);
  CHECK(edges[1].v == 3);

  const std::string out_path = temp_path("edges_out.txt");
  write_edge_list(out_path, edges);
  const std::vector<Edge> back = read_edge_list(out_path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].weight == edges[0].weight);
  CHECK(back[1].weight == edges[1].weight);

  const WeightedNetwork net = network_from_edge_list(path);
  CHECK(net.node_count() == 3);
  CHECK(*net.weight(2, 1) == 1.5);
}

TEST_CASE("partition json round-trip") {
  FourPartition p;
  p.x = {1, 5};
  p.y = {2};
  p.w = {7};
  p.z = {3, 4};
  const std::string path = temp_path("partition.json");
  write_partition_json(path, p);
  const FourPartition back = read_partition_json(path);
  CHECK(back.x == p.x);
  CHECK(back.y == p.y);
  CHECK(back.w == p.w);
  CHECK(back.z == p.z);
}

TEST_CASE("matrix json keeps masks and -inf") {
  std::mt19937_64 rng(42);
  MaskedMatrix m = tristmf::testing::random_int_matrix(rng, 5, 4, -9, 9,
                                                       0.15, 0.2);
  const MaskedMatrix back = matrix_from_json(matrix_to_json(m));
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  // values behind the mask are not representable (and not meaningful)
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      CHECK(back.observed(i, j) == m.observed(i, j));
      if (m.observed(i, j)) CHECK(back.at(i, j) == m.at(i, j));
    }
}

TEST_CASE("fit result json round-trip") {
  std::mt19937_64 rng(43);
  FitResult result;
  result.factors.g1 = tristmf::testing::random_int_matrix(rng, 4, 2, -5, 5);
  result.factors.s = tristmf::testing::random_int_matrix(rng, 2, 3, -5, 5);
  result.factors.g2 = tristmf::testing::random_int_matrix(rng, 3, 6, -5, 5);
  result.factors.r1 = 2;
  result.factors.r2 = 3;
  result.record.method = "triFastSTMF";
  result.record.seed = 99;
  result.record.rmse_a = 1.25;
  result.record.final_b_norm = 10.5;
  result.record.trace = {{0.0, 12.0, 1}, {0.5, 10.5, 1}};

  const std::string path = temp_path("result.json");
  write_fit_result_json(path, result, nlohmann::json{{"note", "unit"}});
  const FitResult back = read_fit_result_json(path);
  CHECK(back.factors.g1 == result.factors.g1);
  CHECK(back.factors.s == result.factors.s);
  CHECK(back.factors.g2 == result.factors.g2);
  CHECK(back.record.method == "triFastSTMF");
  CHECK(back.record.seed == 99);
  CHECK(back.record.rmse_a == 1.25);
  REQUIRE(back.record.trace.size() == 2);
  CHECK(back.record.trace[1].b_norm == 10.5);
}
