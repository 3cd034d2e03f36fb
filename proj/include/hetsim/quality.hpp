#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace hetsim {

/// Number of ordered triples (a, b, c) with S_ab < S_ac and Ŝ_ab < Ŝ_ac.
/// O(n^2 log n): per row, a dominance count over (S, Ŝ) pairs.
std::uint64_t concordant_triples(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate);

/// Fraction of all n^3 ordered triples whose strict "a is closer to c than to
/// b" ordering holds in both matrices. Self pairs take part like any other.
/// Throws std::invalid_argument on shape mismatch or n < 2.
double ordering_quality(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate);

}  // namespace hetsim
