#include "hetsim/lowrank.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hetsim/parallel.hpp"

namespace hetsim {

FactoredSimilarity FactoredSimilarity::identity(Index n) {
  return {Eigen::MatrixXd(n, 0), Eigen::VectorXd(0)};
}

Eigen::MatrixXd FactoredSimilarity::to_dense() const {
  Eigen::MatrixXd s = basis * values.asDiagonal() * basis.transpose();
  s.diagonal().array() += 1.0;
  return s;
}

double FactoredSimilarity::diagonal_drift() const {
  if (rank() == 0) return 0.0;
  const Eigen::VectorXd diag = (basis.array().square().matrix() * values);
  return diag.cwiseAbs().maxCoeff();
}

UpdateOperator::UpdateOperator(const CouplingPlan& plan, std::size_t type,
                               const FactoredSet& state, bool remove_diagonal)
    : n_(plan.size(type)),
      couplings_(plan.couplings(type)),
      state_(state),
      remove_diagonal_(remove_diagonal),
      diagonal_(Eigen::VectorXd::Zero(plan.size(type))) {
  for (const auto& c : couplings_) {
    const auto& partner = state_.at(c.partner);
    if (partner.dim() != plan.size(c.partner)) {
      throw std::invalid_argument("factored state does not match the network shapes");
    }
    // diag(Wᵀ W): squared column norms.
    for (Index col = 0; col < c.op.outerSize(); ++col) {
      double s = 0.0;
      for (SparseMatrix::InnerIterator it(c.op, col); it; ++it) s += it.value() * it.value();
      diagonal_(col) += c.weight * s;
    }
    // diag(Wᵀ U D Uᵀ W): row-wise evaluation of G = Wᵀ U.
    if (partner.rank() > 0) {
      const Eigen::MatrixXd g = c.op_t * partner.basis;  // |t| x rank
      diagonal_ += c.weight * (g.array().square().matrix() * partner.values);
    }
  }
}

Eigen::MatrixXd UpdateOperator::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != n_) throw std::invalid_argument("UpdateOperator: input size mismatch");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n_, x.cols());
  for (const auto& c : couplings_) {
    const auto& partner = state_[c.partner];
    Eigen::MatrixXd z = c.op * x;  // |p| x m
    if (partner.rank() > 0) {
      const Eigen::MatrixXd coeff = partner.values.asDiagonal() * (partner.basis.transpose() * z);
      z.noalias() += partner.basis * coeff;
    }
    y.noalias() += c.weight * (c.op_t * z);
    edge_visits_ += 2 * static_cast<std::uint64_t>(c.op.nonZeros()) *
                    static_cast<std::uint64_t>(x.cols());
  }
  if (remove_diagonal_) y -= diagonal_.asDiagonal() * x;
  return y;
}

void LowRankConfig::validate(std::size_t num_types) const {
  if (ranks.size() != num_types) {
    throw std::invalid_argument("expected " + std::to_string(num_types) + " ranks, got " +
                                std::to_string(ranks.size()));
  }
  for (Index r : ranks) {
    if (r < 1) throw std::invalid_argument("ranks must be at least 1");
  }
  if (oversampling < 0) throw std::invalid_argument("oversampling must be non-negative");
  if (power_iterations < 0) throw std::invalid_argument("power iterations must be non-negative");
}

FactoredSet sweep_lowrank(const CouplingPlan& plan, const FactoredSet& state,
                          const LowRankConfig& config, std::uint64_t iteration, int threads) {
  config.validate(plan.num_types());
  if (state.size() != plan.num_types()) {
    throw std::invalid_argument("factored state has the wrong number of types");
  }
  FactoredSet next(plan.num_types());
  parallel_for(plan.num_types(), threads, [&](std::size_t t) {
    const Index n = plan.size(t);
    const UpdateOperator op(plan, t, state, true);
    if (op.empty()) {
      next[t] = FactoredSimilarity::identity(n);
      return;
    }
    const Index rank = std::min(config.ranks[t], n);
    EigConfig eig{rank, std::min(config.oversampling, n - rank), config.power_iterations,
                  derive_seed(config.seed, iteration, t)};
    auto pairs = randomized_eig(op, eig);
    next[t] = {std::move(pairs.vectors), std::move(pairs.values)};
  });
  return next;
}

double factored_residual(const FactoredSimilarity& prev, const FactoredSimilarity& next) {
  if (prev.dim() != next.dim()) throw std::invalid_argument("factored_residual: shape mismatch");
  const Index m = prev.rank() + next.rank();
  if (m == 0) return 0.0;
  // X M Xᵀ with X = [U' U], M = diag(d', -d); with X = QR, the norm is ‖R M Rᵀ‖_F.
  Eigen::MatrixXd x(prev.dim(), m);
  x << next.basis, prev.basis;
  Eigen::VectorXd mid(m);
  mid << next.values, -prev.values;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Index k = std::min(prev.dim(), m);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return (r * mid.asDiagonal() * r.transpose()).norm();
}

LowRankSolution solve_lowrank(const HeteroNetwork& network, const WeightMatrix& weights,
                              const SolverConfig& solver, const LowRankConfig& config) {
  solver.validate(false);
  config.validate(network.num_types());
  if (!solver.skip_condition_check) {
    const auto report = check_convergence_conditions(network, weights);
    if (!report.ok()) throw ConditionError("convergence conditions not met");
  }
  const CouplingPlan plan(network, weights);
  LowRankSolution out;
  for (std::size_t t = 0; t < plan.num_types(); ++t) {
    out.factors.push_back(FactoredSimilarity::identity(plan.size(t)));
  }
  using Clock = std::chrono::steady_clock;
  for (int k = 0; k < solver.max_iter; ++k) {
    const auto t0 = Clock::now();
    FactoredSet next =
        sweep_lowrank(plan, out.factors, config, static_cast<std::uint64_t>(k), solver.threads);
    std::vector<double> per_type(next.size());
    double total = 0.0;
    for (std::size_t t = 0; t < next.size(); ++t) {
      if (!next[t].basis.allFinite() || !next[t].values.allFinite()) {
        throw DivergenceError("non-finite factors in type '" + network.type(t).name() +
                              "' at iteration " + std::to_string(k + 1));
      }
      per_type[t] = factored_residual(out.factors[t], next[t]);
      total += per_type[t];
    }
    out.factors = std::move(next);
    out.trace.residuals.push_back(total);
    out.trace.per_type.push_back(std::move(per_type));
    out.trace.seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
    if (total <= solver.tol) {
      out.trace.converged = true;
      break;
    }
  }
  return out;
}

double similarity_query(const FactoredSimilarity& state, Index a, Index b) {
  if (a < 0 || b < 0 || a >= state.dim() || b >= state.dim()) {
    throw std::out_of_range("similarity_query: index out of range");
  }
  double s = a == b ? 1.0 : 0.0;
  for (Index k = 0; k < state.rank(); ++k) {
    s += state.basis(a, k) * state.values(k) * state.basis(b, k);
  }
  return s;
}

namespace {

std::vector<Neighbor> rank_scores(const Eigen::VectorXd& scores, Index a, Index k) {
  if (k < 1) throw std::invalid_argument("top_k: k must be at least 1");
  std::vector<Neighbor> all;
  all.reserve(static_cast<std::size_t>(scores.size()));
  for (Index i = 0; i < scores.size(); ++i) {
    if (i != a) all.push_back({i, scores(i)});
  }
  const auto keep = static_cast<std::size_t>(std::min<Index>(k, static_cast<Index>(all.size())));
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    [](const Neighbor& x, const Neighbor& y) {
                      if (x.score != y.score) return x.score > y.score;
                      return x.index < y.index;
                    });
  all.resize(keep);
  return all;
}

}  // namespace

std::vector<Neighbor> top_k(const FactoredSimilarity& state, Index a, Index k) {
  if (a < 0 || a >= state.dim()) throw std::out_of_range("top_k: index out of range");
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(state.dim());
  if (state.rank() > 0) {
    const Eigen::VectorXd coeff = state.values.cwiseProduct(state.basis.row(a).transpose());
    scores = state.basis * coeff;
  }
  return rank_scores(scores, a, k);
}

std::vector<Neighbor> top_k(const Eigen::MatrixXd& similarity, Index a, Index k) {
  if (a < 0 || a >= similarity.rows()) throw std::out_of_range("top_k: index out of range");
  return rank_scores(similarity.row(a).transpose(), a, k);
}

}  // namespace hetsim
