#include "hetsim/quality.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hetsim {

namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  /// Count of inserted positions < i.
  std::uint64_t below(std::size_t i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

}  // namespace

std::uint64_t concordant_triples(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  if (truth.rows() != truth.cols() || estimate.rows() != estimate.cols() ||
      truth.rows() != estimate.rows()) {
    throw std::invalid_argument("ordering_quality: matrices must be square and of equal size");
  }
  const auto n = static_cast<std::size_t>(truth.rows());
  std::uint64_t total = 0;
  std::vector<std::size_t> by_truth(n);
  std::vector<std::size_t> est_rank(n);
  std::vector<double> est_sorted(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto row_s = truth.row(static_cast<Eigen::Index>(a));
    const auto row_e = estimate.row(static_cast<Eigen::Index>(a));
    // Dense ranks of the estimate row so that equal values share a rank.
    for (std::size_t j = 0; j < n; ++j) est_sorted[j] = row_e(static_cast<Eigen::Index>(j));
    std::sort(est_sorted.begin(), est_sorted.end());
    for (std::size_t j = 0; j < n; ++j) {
      est_rank[j] = static_cast<std::size_t>(
          std::lower_bound(est_sorted.begin(), est_sorted.end(), row_e(static_cast<Eigen::Index>(j))) -
          est_sorted.begin());
    }
    std::iota(by_truth.begin(), by_truth.end(), std::size_t{0});
    std::sort(by_truth.begin(), by_truth.end(), [&](std::size_t x, std::size_t y) {
      return row_s(static_cast<Eigen::Index>(x)) < row_s(static_cast<Eigen::Index>(y));
    });
    // Walk c in increasing S; b counts if it was inserted strictly earlier in
    // S (ties are queried before insertion) and has a strictly smaller Ŝ.
    Fenwick seen(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      const double v = row_s(static_cast<Eigen::Index>(by_truth[i]));
      while (j < n && row_s(static_cast<Eigen::Index>(by_truth[j])) == v) ++j;
      for (std::size_t q = i; q < j; ++q) total += seen.below(est_rank[by_truth[q]]);
      for (std::size_t q = i; q < j; ++q) seen.add(est_rank[by_truth[q]]);
      i = j;
    }
  }
  return total;
}

double ordering_quality(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  if (truth.rows() < 2) throw std::invalid_argument("ordering_quality: need at least 2 items");
  const std::uint64_t hits = concordant_triples(truth, estimate);
  const double n = static_cast<double>(truth.rows());
  return static_cast<double>(hits) / (n * n * n);
}

}  // namespace hetsim
