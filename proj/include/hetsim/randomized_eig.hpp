#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "hetsim/network.hpp"

namespace hetsim {

/// A self-adjoint linear map known only through products with blocks of
/// vectors.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual Index dim() const = 0;
  virtual Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const = 0;
};

class DenseSymmetricOperator final : public SymmetricOperator {
 public:
  explicit DenseSymmetricOperator(const Eigen::MatrixXd& a) : a_(a) {}
  Index dim() const override { return a_.rows(); }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const override { return a_ * x; }

 private:
  const Eigen::MatrixXd& a_;
};

struct EigConfig {
  Index rank = 1;
  Index oversampling = 10;
  int power_iterations = 2;
  std::uint64_t seed = 0;
};

/// A ≈ U diag(d) Uᵀ with orthonormal U.
struct EigPairs {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

/// Randomized range finder on a symmetric operator: Gaussian sketch of width
/// rank + oversampling, `power_iterations` further applications with
/// re-orthonormalization after each, then the exact eigendecomposition of
/// QᵀAQ. Keeps the `rank` eigenpairs of largest magnitude (negative values
/// included), ordered by decreasing magnitude. Each vector's largest entry is
/// made positive. Deterministic for a given seed.
///
/// Throws std::invalid_argument when rank < 0, or rank + oversampling exceeds
/// the operator dimension.
EigPairs randomized_eig(const SymmetricOperator& op, const EigConfig& config);

/// Independent stream seed for (base, a, b); used to give every type and
/// iteration its own generator.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace hetsim
