#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hetsim/operators.hpp"
#include "hetsim/synth.hpp"

using namespace hetsim;

TEST_CASE("build_network: toy network") {
  const auto net = testing::toy_network();
  CHECK(net.num_types() == 2);
  CHECK(net.type(0).size() == 2);
  CHECK(net.type(1).size() == 1);
  CHECK(net.num_relations() == 1);
  CHECK(net.relation(0).edges == std::vector<Edge>{{0, 0}, {1, 0}});
  CHECK(net.type(0).find("a2") == 1);
  CHECK_FALSE(net.type(0).find("zz").has_value());
}

TEST_CASE("build_network: empty relation list is valid") {
  const auto net = HeteroNetwork::build({{"A", {"x", "y"}}}, {});
  CHECK(net.num_relations() == 0);
  CHECK(net.incident_relations(0).empty());
}

TEST_CASE("build_network: book-shaped schema sizes") {
  const auto net = book_shaped_network({3625, 99, 65, 554, 7});
  REQUIRE(net.num_types() == 4);
  CHECK(net.type(0).size() == 3625);
  CHECK(net.type(1).size() == 99);
  CHECK(net.type(2).size() == 65);
  CHECK(net.type(3).size() == 554);
  CHECK(net.num_relations() == 3);
}

TEST_CASE("build_network: errors") {
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {"x"}}, {"A", {"y"}}}, {}), NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {"x"}}}, {{"r", "A", "A", {}}, {"r", "A", "A", {}}}),
                  NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {"x"}}}, {{"r", "A", "A", {{"x", "nope"}}}}),
                  NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {"x"}}}, {{"r", "A", "B", {}}}), NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {"x", "x"}}}, {}), NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {}}}, {}), NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::build({{"A", {"x"}}}, {{"r", "A", "A", {{"x", "x"}, {"x", "x"}}}}),
                  NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::from_indexed({EntityType("A", {"x"})}, {{"r", 0, 0, {{0, 1}}}}),
                  NetworkError);
  CHECK_THROWS_AS(HeteroNetwork::from_indexed({EntityType("A", {"x"})}, {{"r", 0, 3, {}}}),
                  NetworkError);
}

TEST_CASE("column_stochastic: toy operators") {
  const auto net = testing::toy_network();
  const auto fwd = column_stochastic(net, 0, Direction::forward);
  REQUIRE(fwd.values.rows() == 2);
  REQUIRE(fwd.values.cols() == 1);
  CHECK(fwd.values.coeff(0, 0) == 0.5);
  CHECK(fwd.values.coeff(1, 0) == 0.5);

  const auto rev = column_stochastic(net, 0, Direction::reverse);
  REQUIRE(rev.values.rows() == 1);
  REQUIRE(rev.values.cols() == 2);
  CHECK(rev.values.coeff(0, 0) == 1.0);
  CHECK(rev.values.coeff(0, 1) == 1.0);
}

TEST_CASE("column_stochastic: isolated dst entity gives a zero column") {
  const auto net = HeteroNetwork::build({{"A", {"a"}}, {"B", {"b1", "b2"}}},
                                        {{"r", "A", "B", {{"a", "b1"}}}});
  const auto fwd = column_stochastic(net, 0, Direction::forward);
  CHECK(fwd.values.coeff(0, 0) == 1.0);
  CHECK(fwd.values.col(1).nonZeros() == 0);
}

TEST_CASE("column_stochastic: column sums and transposed patterns (property)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto net = testing::random_hetero(rng, 80);
    for (std::size_t r = 0; r < net.num_relations(); ++r) {
      const auto f = column_stochastic(net, r, Direction::forward).values;
      const auto b = column_stochastic(net, r, Direction::reverse).values;
      for (const auto* m : {&f, &b}) {
        const Eigen::RowVectorXd sums = Eigen::RowVectorXd::Ones(m->rows()) * (*m);
        for (Index c = 0; c < sums.size(); ++c) {
          const bool zero = m->col(c).nonZeros() == 0;
          CHECK((zero || std::abs(sums(c) - 1.0) <= 1e-12));
        }
      }
      // Same pattern up to transposition.
      const Eigen::MatrixXd fp = Eigen::MatrixXd(f).unaryExpr([](double v) { return v != 0.0 ? 1.0 : 0.0; });
      const Eigen::MatrixXd bp = Eigen::MatrixXd(b).unaryExpr([](double v) { return v != 0.0 ? 1.0 : 0.0; });
      CHECK(fp == bp.transpose());
    }
  }
}

TEST_CASE("default_weights: book schema gives 1/3 on the Book side") {
  const auto net = book_shaped_network({40, 5, 6, 7, 1});
  const auto w = default_weights(net);
  const std::size_t book = *net.find_type("Book");
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& rel = net.relation(r);
    const std::size_t partner = rel.src_type == book ? rel.dst_type : rel.src_type;
    CHECK(w.get({book, partner, r}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  // Each other type has a single relation.
  for (const char* name : {"Author", "Year", "Publisher"}) {
    CHECK(w.incident_sum(*net.find_type(name)) == 1.0);
  }
}

TEST_CASE("default_weights: singleton self relation and parallel relations") {
  const auto self = HeteroNetwork::build({{"V", {"x", "y"}}}, {{"e", "V", "V", {{"x", "y"}}}});
  const auto ws = default_weights(self);
  CHECK(ws.get({0, 0, 0}) == 1.0);
  CHECK(ws.entries().size() == 1);

  const auto par = HeteroNetwork::build(
      {{"A", {"a"}}, {"B", {"b"}}},
      {{"r1", "A", "B", {{"a", "b"}}}, {"r2", "A", "B", {{"a", "b"}}}});
  const auto wp = default_weights(par);
  CHECK(wp.get({0, 1, 0}) == 0.5);
  CHECK(wp.get({0, 1, 1}) == 0.5);
  CHECK(wp.get({1, 0, 0}) == 0.5);
  CHECK(wp.get({1, 0, 1}) == 0.5);
}

TEST_CASE("default_weights: isolated type gets no weights") {
  const auto net = HeteroNetwork::build({{"A", {"a"}}, {"B", {"b"}}, {"C", {"c"}}},
                                        {{"r", "A", "B", {{"a", "b"}}}});
  const auto w = default_weights(net);
  CHECK(w.incident_sum(2) == 0.0);
  CHECK(w.entries().size() == 2);
}

TEST_CASE("check_convergence_conditions: default weights never flag (property)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    const auto net = testing::random_hetero(rng, 120);
    const auto report = check_convergence_conditions(net, default_weights(net));
    CHECK(report.ok());
    for (std::size_t t = 0; t < net.num_types(); ++t) {
      CHECK(report.lyapunov_bound[t] <= 1.0 + 1e-12);
    }
  }
  for (int k : {3, 5, 7, 10}) {
    const auto net = random_network({k, 40, static_cast<std::uint64_t>(k)});
    CHECK(check_convergence_conditions(net, default_weights(net)).ok());
  }
}

TEST_CASE("check_convergence_conditions: overweight and unknown weights are flagged") {
  const auto net = testing::toy_network();
  WeightMatrix w = default_weights(net);
  w.set({0, 1, 0}, 1.5);
  const auto report = check_convergence_conditions(net, w);
  CHECK_FALSE(report.ok());
  REQUIRE(report.overweight_types.size() == 1);
  CHECK(report.overweight_types[0].type == 0);
  CHECK(report.overweight_types[0].sum == 1.5);
  CHECK(report.lyapunov_bound[0] == 1.5);

  WeightMatrix bad;
  bad.set({0, 0, 0}, 1.0);  // A is not related to itself
  const auto r2 = check_convergence_conditions(net, bad);
  CHECK(r2.unknown_weights.size() == 1);
  CHECK_THROWS_AS(CouplingPlan(net, bad), std::invalid_argument);

  WeightMatrix neg;
  neg.set({0, 1, 0}, -0.1);
  CHECK(check_convergence_conditions(net, neg).negative_weights.size() == 1);
}

TEST_CASE("CouplingPlan: self relation drives its type once, through in-neighbours") {
  const auto net = HeteroNetwork::build({{"V", {"1", "2", "3"}}},
                                        {{"e", "V", "V", {{"3", "1"}, {"3", "2"}}}});
  const CouplingPlan plan(net, default_weights(net));
  REQUIRE(plan.couplings(0).size() == 1);
  const auto& c = plan.couplings(0)[0];
  // Column a of the operator holds a's in-neighbours.
  CHECK(c.op.coeff(2, 0) == 1.0);
  CHECK(c.op.coeff(2, 1) == 1.0);
  CHECK(c.op.col(2).nonZeros() == 0);
}
