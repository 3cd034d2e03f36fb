#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hetsim/lowrank.hpp"
#include "hetsim/synth.hpp"

using namespace hetsim;

namespace {

FactoredSet identity_state(const HeteroNetwork& net) {
  FactoredSet s;
  for (const auto& t : net.types()) s.push_back(FactoredSimilarity::identity(t.size()));
  return s;
}

SimilaritySet densify(const FactoredSet& f) {
  SimilaritySet s;
  for (const auto& b : f) s.blocks.push_back(b.to_dense());
  return s;
}

LowRankConfig full_rank(const HeteroNetwork& net, std::uint64_t seed = 0) {
  LowRankConfig cfg;
  for (const auto& t : net.types()) cfg.ranks.push_back(t.size());
  cfg.seed = seed;
  return cfg;
}

// Random symmetric factored state with a few components per type.
FactoredSet random_state(const HeteroNetwork& net, std::mt19937_64& rng) {
  FactoredSet out;
  std::normal_distribution<double> g;
  for (const auto& t : net.types()) {
    const Index r = std::min<Index>(3, t.size());
    Eigen::MatrixXd m(t.size(), r);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(r);
    Eigen::VectorXd d(r);
    for (Index i = 0; i < r; ++i) d(i) = g(rng);
    out.push_back({std::move(q), std::move(d)});
  }
  return out;
}

}  // namespace

TEST_CASE("UpdateOperator: self-adjoint on random pairs") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = testing::random_hetero(rng, 80);
    const CouplingPlan plan(net, default_weights(net));
    const auto state = random_state(net, rng);
    for (std::size_t t = 0; t < net.num_types(); ++t) {
      const UpdateOperator op(plan, t, state);
      const Index n = op.dim();
      Eigen::VectorXd x(n), y(n);
      for (Index i = 0; i < n; ++i) {
        x(i) = g(rng);
        y(i) = g(rng);
      }
      const double lhs = x.dot(op.apply(y).col(0));
      const double rhs = op.apply(x).col(0).dot(y);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("UpdateOperator: matches the dense coupling sum with the diagonal removed") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = testing::random_hetero(rng, 60);
    const auto w = default_weights(net);
    const CouplingPlan plan(net, w);
    const auto state = random_state(net, rng);
    const auto expected = testing::oracle_coupling_sum(net, w, densify(state));
    for (std::size_t t = 0; t < net.num_types(); ++t) {
      const UpdateOperator keep(plan, t, state, false);
      const UpdateOperator drop(plan, t, state, true);
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(keep.dim(), keep.dim());
      const Eigen::MatrixXd full = keep.apply(id);
      CHECK((full - expected.blocks[t]).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((drop.diagonal() - expected.blocks[t].diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(drop.apply(id).diagonal().cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("UpdateOperator: counts edge visits per apply") {
  const auto net = testing::toy_network();
  const CouplingPlan plan(net, default_weights(net));
  const auto state = identity_state(net);
  const UpdateOperator op(plan, 0, state);
  CHECK(op.edge_visits() == 0);
  (void)op.apply(Eigen::MatrixXd::Ones(2, 3));
  // One coupling with 2 stored entries, 3 columns, two sparse products.
  CHECK(op.edge_visits() == 2 * 2 * 3);
  (void)op.apply(Eigen::MatrixXd::Ones(2, 1));
  CHECK(op.edge_visits() == 12 + 4);
}

TEST_CASE("sweep_lowrank: type without relations stays the identity") {
  const auto net = HeteroNetwork::build({{"A", {"a1", "a2"}}, {"B", {"b1"}}, {"C", {"c1", "c2", "c3"}}},
                                        {{"r", "A", "B", {{"a1", "b1"}, {"a2", "b1"}}}});
  const CouplingPlan plan(net, default_weights(net));
  LowRankConfig cfg;
  cfg.ranks = {2, 1, 2};
  const auto next = sweep_lowrank(plan, identity_state(net), cfg, 0);
  CHECK(next[2].rank() == 0);
  CHECK(next[2].to_dense() == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("sweep_lowrank: full rank reproduces the dense sweep (property)") {
  std::mt19937_64 rng(31);
  int count = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = testing::random_hetero(rng, 60);
    const auto w = default_weights(net);
    const CouplingPlan plan(net, w);
    const auto cfg = full_rank(net, static_cast<std::uint64_t>(trial));
    FactoredSet f = identity_state(net);
    SimilaritySet d = SimilaritySet::identity(net);
    for (int k = 0; k < 4; ++k) {
      f = sweep_lowrank(plan, f, cfg, static_cast<std::uint64_t>(k));
      d = sweep(plan, d);
      CHECK(testing::max_abs_diff(densify(f), d) <= 1e-6);
    }
    ++count;
  }
  CHECK(count == 50);
}

TEST_CASE("solve_lowrank: full rank matches solve_dense and its residuals") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto net = random_network({3, 25, seed});
    const auto w = default_weights(net);
    SolverConfig solver;
    solver.max_iter = 8;
    solver.tol = 1e-300;
    const auto dense = solve_dense(net, w, solver);
    const auto low = solve_lowrank(net, w, solver, full_rank(net, seed));
    REQUIRE(low.trace.iterations() == dense.trace.iterations());
    CHECK(testing::max_abs_diff(densify(low.factors), dense.similarity) <= 1e-6);
    for (std::size_t k = 0; k < dense.trace.residuals.size(); ++k) {
      CHECK(low.trace.residuals[k] == doctest::Approx(dense.trace.residuals[k]).epsilon(1e-6));
    }
  }
}

TEST_CASE("factored_residual: equals the dense Frobenius difference") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = testing::random_hetero(rng, 50);
    const auto a = random_state(net, rng);
    const auto b = random_state(net, rng);
    for (std::size_t t = 0; t < a.size(); ++t) {
      const double dense = (a[t].to_dense() - b[t].to_dense()).norm();
      CHECK(std::abs(factored_residual(a[t], b[t]) - dense) <= 1e-8);
    }
    CHECK(factored_residual(a[0], a[0]) <= 1e-12);
  }
  CHECK(factored_residual(FactoredSimilarity::identity(4), FactoredSimilarity::identity(4)) == 0.0);
  CHECK_THROWS_AS(factored_residual(FactoredSimilarity::identity(4), FactoredSimilarity::identity(3)),
                  std::invalid_argument);
}

TEST_CASE("solve_lowrank: thread count and repeat runs give identical factors") {
  const auto net = random_network({5, 60, 3});
  const auto w = default_weights(net);
  LowRankConfig cfg;
  cfg.ranks.assign(net.num_types(), 6);
  cfg.seed = 12;
  SolverConfig one;
  one.max_iter = 5;
  SolverConfig four = one;
  four.threads = 4;
  const auto a = solve_lowrank(net, w, one, cfg);
  const auto b = solve_lowrank(net, w, four, cfg);
  const auto c = solve_lowrank(net, w, one, cfg);
  for (std::size_t t = 0; t < a.factors.size(); ++t) {
    CHECK(a.factors[t].basis == b.factors[t].basis);
    CHECK(a.factors[t].values == b.factors[t].values);
    CHECK(a.factors[t].basis == c.factors[t].basis);
  }
  CHECK(a.trace.residuals == b.trace.residuals);
}

TEST_CASE("solve_lowrank: diagonal drift is reported, not corrected") {
  const auto net = random_network({3, 40, 9});
  LowRankConfig cfg;
  cfg.ranks.assign(3, 2);
  SolverConfig solver;
  solver.max_iter = 5;
  const auto sol = solve_lowrank(net, default_weights(net), solver, cfg);
  for (const auto& f : sol.factors) {
    const Eigen::MatrixXd s = f.to_dense();
    const double drift = (s.diagonal().array() - 1.0).abs().maxCoeff();
    CHECK(f.diagonal_drift() == doctest::Approx(drift).epsilon(1e-12));
  }
}

TEST_CASE("LowRankConfig: validation") {
  const auto net = testing::toy_network();
  SolverConfig solver;
  LowRankConfig cfg;
  cfg.ranks = {1};
  CHECK_THROWS_AS(solve_lowrank(net, default_weights(net), solver, cfg), std::invalid_argument);
  cfg.ranks = {1, 0};
  CHECK_THROWS_AS(solve_lowrank(net, default_weights(net), solver, cfg), std::invalid_argument);
  cfg.ranks = {5, 5};  // clamped to type sizes
  CHECK_NOTHROW(solve_lowrank(net, default_weights(net), solver, cfg));
}

TEST_CASE("similarity_query and top_k: contracts") {
  FactoredSimilarity f;
  f.basis = Eigen::MatrixXd(4, 1);
  f.basis << 0.5, 0.5, 0.5, -0.5;
  f.values = Eigen::VectorXd::Constant(1, 0.8);
  const Eigen::MatrixXd dense = f.to_dense();
  for (Index a = 0; a < 4; ++a) {
    for (Index b = 0; b < 4; ++b) CHECK(similarity_query(f, a, b) == doctest::Approx(dense(a, b)));
  }
  CHECK(similarity_query(f, 2, 2) == doctest::Approx(1.2));
  CHECK_THROWS_AS(similarity_query(f, 4, 0), std::out_of_range);
  CHECK_THROWS_AS(similarity_query(f, 0, -1), std::out_of_range);

  // Ties broken by index, self excluded, k clamped.
  const auto top = top_k(f, 0, 10);
  REQUIRE(top.size() == 3);
  CHECK(top[0].index == 1);
  CHECK(top[1].index == 2);
  CHECK(top[2].index == 3);
  CHECK(top[0].score == doctest::Approx(0.2));
  CHECK(top[2].score == doctest::Approx(-0.2));
  CHECK(top_k(f, 0, 1).size() == 1);
  CHECK(top_k(dense, 0, 10) == top_k(f, 0, 10));
  CHECK_THROWS_AS(top_k(f, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(top_k(f, 9, 1), std::out_of_range);
  CHECK_THROWS_AS(top_k(dense, -1, 1), std::out_of_range);
}

TEST_CASE("top_k: factored and dense rankings agree at full rank") {
  const auto net = random_network({3, 30, 4});
  const auto w = default_weights(net);
  SolverConfig solver;
  solver.max_iter = 6;
  const auto dense = solve_dense(net, w, solver);
  const auto low = solve_lowrank(net, w, solver, full_rank(net));
  for (Index a = 0; a < net.type(0).size(); ++a) {
    const auto x = top_k(dense.similarity.blocks[0], a, 3);
    const auto y = top_k(low.factors[0], a, 3);
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i].score == doctest::Approx(x[i].score).epsilon(1e-6));
  }
}
