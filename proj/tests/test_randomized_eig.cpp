#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hetsim/randomized_eig.hpp"

using namespace hetsim;

TEST_CASE("randomized_eig: exact on a rank-one matrix") {
  Eigen::VectorXd v(4);
  v << 1, 2, 3, 4;
  const Eigen::MatrixXd a = v * v.transpose();
  const DenseSymmetricOperator op(a);
  const auto pairs = randomized_eig(op, {1, 3, 2, 42});
  REQUIRE(pairs.values.size() == 1);
  CHECK(pairs.values(0) == doctest::Approx(30.0).epsilon(1e-12));
  const Eigen::VectorXd expected = v / std::sqrt(30.0);
  CHECK((pairs.vectors.col(0) - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("randomized_eig: zero operator gives zero eigenvalues") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  const DenseSymmetricOperator op(a);
  const auto pairs = randomized_eig(op, {2, 2, 1, 1});
  REQUIRE(pairs.values.size() == 2);
  CHECK(pairs.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(pairs.vectors.allFinite());
}

TEST_CASE("randomized_eig: rank 0 returns no pairs") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const DenseSymmetricOperator op(a);
  const auto pairs = randomized_eig(op, {0, 0, 0, 0});
  CHECK(pairs.values.size() == 0);
  CHECK(pairs.vectors.rows() == 3);
  CHECK(pairs.vectors.cols() == 0);
}

TEST_CASE("randomized_eig: sketch wider than the operator is rejected") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(5, 5);
  const DenseSymmetricOperator op(a);
  CHECK_THROWS_AS(randomized_eig(op, {3, 3, 1, 0}), std::invalid_argument);
  CHECK_NOTHROW(randomized_eig(op, {3, 2, 1, 0}));
  CHECK_THROWS_AS(randomized_eig(op, {-1, 0, 1, 0}), std::invalid_argument);
}

TEST_CASE("randomized_eig: planted spectrum, error within twice the first dropped eigenvalue") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(50);
    lambda.head(5) << 10, -8, 6, 4, -3;
    for (Index i = 5; i < 50; ++i) lambda(i) = 1e-3 * std::pow(0.8, static_cast<double>(i - 5));
    const Eigen::MatrixXd a = testing::planted_symmetric(lambda, rng);
    const DenseSymmetricOperator op(a);
    const auto pairs = randomized_eig(op, {5, 10, 2, static_cast<std::uint64_t>(trial)});
    const Eigen::MatrixXd approx = pairs.vectors * pairs.values.asDiagonal() * pairs.vectors.transpose();
    const double err = (a - approx).operatorNorm();
    CHECK(err <= 2.0 * 1e-3);
    // Values come out ordered by magnitude.
    for (Index i = 1; i < 5; ++i) {
      CHECK(std::abs(pairs.values(i)) <= std::abs(pairs.values(i - 1)));
    }
    // Orthonormal basis.
    const Eigen::MatrixXd gram = pairs.vectors.transpose() * pairs.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("randomized_eig: same seed, same bits; different seed still accurate") {
  std::mt19937_64 rng(1);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(30);
  lambda.head(3) << 5, 3, 1;
  const Eigen::MatrixXd a = testing::planted_symmetric(lambda, rng);
  const DenseSymmetricOperator op(a);
  const auto x = randomized_eig(op, {3, 5, 2, 7});
  const auto y = randomized_eig(op, {3, 5, 2, 7});
  CHECK(x.vectors == y.vectors);
  CHECK(x.values == y.values);
  const auto z = randomized_eig(op, {3, 5, 2, 8});
  CHECK((x.values - z.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("randomized_eig: sign convention makes the largest entry positive") {
  std::mt19937_64 rng(4);
  Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(12, 1.0, 12.0);
  const Eigen::MatrixXd a = testing::planted_symmetric(lambda, rng);
  const DenseSymmetricOperator op(a);
  const auto pairs = randomized_eig(op, {4, 8, 2, 3});
  for (Index k = 0; k < 4; ++k) {
    Index arg = 0;
    pairs.vectors.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(pairs.vectors(arg, k) > 0.0);
  }
}

TEST_CASE("derive_seed: distinct inputs give distinct seeds") {
  CHECK(derive_seed(0, 0, 0) == derive_seed(0, 0, 0));
  CHECK(derive_seed(0, 0, 1) != derive_seed(0, 1, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(0, 0, 0));
}
