#include "hetsim/randomized_eig.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

EigPairs randomized_eig(const SymmetricOperator& op, const EigConfig& config) {
  const Index n = op.dim();
  if (config.rank < 0 || config.oversampling < 0 || config.power_iterations < 0) {
    throw std::invalid_argument("rank, oversampling and power iterations must be non-negative");
  }
  const Index width = config.rank + config.oversampling;
  if (width > n) {
    throw std::invalid_argument("rank + oversampling (" + std::to_string(width) +
                                ") exceeds operator dimension " + std::to_string(n));
  }
  if (config.rank == 0) return {Eigen::MatrixXd(n, 0), Eigen::VectorXd(0)};

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd sketch(n, width);
  for (Index j = 0; j < width; ++j) {
    for (Index i = 0; i < n; ++i) sketch(i, j) = gauss(rng);
  }

  Eigen::MatrixXd q = orthonormal_basis(op.apply(sketch));
  for (int k = 0; k < config.power_iterations; ++k) q = orthonormal_basis(op.apply(q));

  Eigen::MatrixXd b = q.transpose() * op.apply(q);
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const Eigen::VectorXd& lambda = eig.eigenvalues();

  std::vector<Index> order(static_cast<std::size_t>(width));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    return std::abs(lambda(x)) > std::abs(lambda(y));
  });

  EigPairs out{Eigen::MatrixXd(n, config.rank), Eigen::VectorXd(config.rank)};
  for (Index j = 0; j < config.rank; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    Eigen::VectorXd v = q * eig.eigenvectors().col(src);
    Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    out.vectors.col(j) = v;
    out.values(j) = lambda(src);
  }
  return out;
}

}  // namespace hetsim
