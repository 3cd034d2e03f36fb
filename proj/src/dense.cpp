#include "hetsim/dense.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "hetsim/parallel.hpp"

namespace hetsim {

namespace {

void check_shapes(const CouplingPlan& plan, const SimilaritySet& state) {
  if (state.size() != plan.num_types()) {
    throw std::invalid_argument("state has " + std::to_string(state.size()) +
                                " blocks, network has " + std::to_string(plan.num_types()) +
                                " types");
  }
  for (std::size_t t = 0; t < state.size(); ++t) {
    const auto& b = state.blocks[t];
    if (b.rows() != plan.size(t) || b.cols() != plan.size(t)) {
      throw std::invalid_argument("state block " + std::to_string(t) + " has shape " +
                                  std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                  ", expected " + std::to_string(plan.size(t)));
    }
  }
}

void check_finite(const SimilaritySet& s, std::size_t iteration) {
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (!s.blocks[t].allFinite()) {
      throw DivergenceError("non-finite similarity in type " + std::to_string(t) +
                            " at iteration " + std::to_string(iteration));
    }
  }
}

std::string describe(const HeteroNetwork& net, const ConditionReport& report) {
  std::string msg = "convergence conditions not met:";
  if (!report.non_stochastic_columns.empty()) {
    msg += " " + std::to_string(report.non_stochastic_columns.size()) +
           " non-stochastic column(s);";
  }
  for (const auto& v : report.overweight_types) {
    msg += " type '" + net.type(v.type).name() + "' weight sum " + std::to_string(v.sum) + ";";
  }
  if (!report.negative_weights.empty()) msg += " negative or non-finite weights;";
  if (!report.unknown_weights.empty()) msg += " weights for unknown relations;";
  return msg;
}

using Clock = std::chrono::steady_clock;

template <typename Step>
DenseSolution iterate(const SimilaritySet& start, const SolverConfig& config, Step&& step) {
  DenseSolution out{start, {}};
  for (int k = 0; k < config.max_iter; ++k) {
    const auto t0 = Clock::now();
    SimilaritySet next = step(out.similarity);
    check_finite(next, static_cast<std::size_t>(k) + 1);
    auto per_type = residual_per_type(out.similarity, next);
    double total = 0.0;
    for (double r : per_type) total += r;
    out.similarity = std::move(next);
    out.trace.residuals.push_back(total);
    out.trace.per_type.push_back(std::move(per_type));
    out.trace.seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
    if (total <= config.tol) {
      out.trace.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

SimilaritySet SimilaritySet::identity(const std::vector<Index>& sizes) {
  SimilaritySet s;
  s.blocks.reserve(sizes.size());
  for (Index n : sizes) s.blocks.push_back(Eigen::MatrixXd::Identity(n, n));
  return s;
}

SimilaritySet SimilaritySet::identity(const HeteroNetwork& network) {
  std::vector<Index> sizes;
  for (const auto& t : network.types()) sizes.push_back(t.size());
  return identity(sizes);
}

void SolverConfig::validate(bool uses_damping) const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (uses_damping && !(damping > 0.0 && damping < 1.0)) {
    throw std::invalid_argument("damping c must lie in (0, 1)");
  }
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

std::vector<double> residual_per_type(const SimilaritySet& prev, const SimilaritySet& next) {
  if (prev.size() != next.size()) {
    throw std::invalid_argument("residual: block count mismatch");
  }
  std::vector<double> out(prev.size());
  for (std::size_t t = 0; t < prev.size(); ++t) {
    const auto& a = prev.blocks[t];
    const auto& b = next.blocks[t];
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw std::invalid_argument("residual: shape mismatch in block " + std::to_string(t));
    }
    out[t] = (b - a).norm();
  }
  return out;
}

double residual(const SimilaritySet& prev, const SimilaritySet& next) {
  double total = 0.0;
  for (double r : residual_per_type(prev, next)) total += r;
  return total;
}

SimilaritySet coupling_sum(const CouplingPlan& plan, const SimilaritySet& state, int threads) {
  check_shapes(plan, state);
  SimilaritySet out;
  out.blocks.resize(plan.num_types());
  parallel_for(plan.num_types(), threads, [&](std::size_t t) {
    const Index n = plan.size(t);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (const auto& c : plan.couplings(t)) {
      const Eigen::MatrixXd right = state.blocks[c.partner] * c.op;  // |p| x |t|
      acc.noalias() += c.weight * (c.op_t * right);
    }
    // Exact symmetry; the two triangles differ only by summation order.
    out.blocks[t] = 0.5 * (acc + acc.transpose());
  });
  return out;
}

SimilaritySet sweep(const CouplingPlan& plan, const SimilaritySet& state, int threads) {
  SimilaritySet next = coupling_sum(plan, state, threads);
  for (auto& b : next.blocks) b.diagonal().setOnes();
  return next;
}

SimilaritySet sweep(const HeteroNetwork& network, const WeightMatrix& weights,
                    const SimilaritySet& state) {
  return sweep(CouplingPlan(network, weights), state);
}

DenseSolution solve_dense(const HeteroNetwork& network, const WeightMatrix& weights,
                          const SolverConfig& config) {
  config.validate(false);
  if (!config.skip_condition_check) {
    const auto report = check_convergence_conditions(network, weights);
    if (!report.ok()) throw ConditionError(describe(network, report));
  }
  const CouplingPlan plan(network, weights);
  return iterate(SimilaritySet::identity(plan.sizes()), config,
                 [&](const SimilaritySet& s) { return sweep(plan, s, config.threads); });
}

DenseSolution solve_lyapunov(const HeteroNetwork& network, const WeightMatrix& weights,
                             const SolverConfig& config) {
  config.validate(true);
  const double c = config.damping;
  if (!config.skip_condition_check) {
    const auto report = check_convergence_conditions(network, weights);
    if (!report.ok()) throw ConditionError(describe(network, report));
    for (std::size_t t = 0; t < report.lyapunov_bound.size(); ++t) {
      if (c * report.lyapunov_bound[t] > 1.0 + 1e-12) {
        throw ConditionError("contraction bound violated for type '" +
                             network.type(t).name() + "': c * sum w ||W||_1^2 = " +
                             std::to_string(c * report.lyapunov_bound[t]));
      }
    }
  }
  const CouplingPlan plan(network, weights);
  return iterate(SimilaritySet::identity(plan.sizes()), config, [&](const SimilaritySet& s) {
    SimilaritySet next = coupling_sum(plan, s, config.threads);
    for (auto& b : next.blocks) {
      b *= c;
      b.diagonal().array() += 1.0 - c;
    }
    return next;
  });
}

Eigen::MatrixXd classical_simrank(const HeteroNetwork& network, std::size_t relation,
                                  double decay, int iterations) {
  const auto& rel = network.relation(relation);
  if (!rel.is_self()) {
    throw std::invalid_argument("classical_simrank needs a relation on a single type");
  }
  const Index n = network.type(rel.src_type).size();
  std::vector<std::vector<Index>> in(static_cast<std::size_t>(n));
  for (const auto& e : rel.edges) in[static_cast<std::size_t>(e.dst)].push_back(e.src);

  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < iterations; ++k) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Identity(n, n);
    for (Index a = 0; a < n; ++a) {
      const auto& ia = in[static_cast<std::size_t>(a)];
      for (Index b = a + 1; b < n; ++b) {
        const auto& ib = in[static_cast<std::size_t>(b)];
        if (ia.empty() || ib.empty()) continue;
        double sum = 0.0;
        for (Index v : ia) {
          for (Index u : ib) sum += s(v, u);
        }
        next(a, b) = next(b, a) =
            decay * sum / static_cast<double>(ia.size() * ib.size());
      }
    }
    s = std::move(next);
  }
  return s;
}

}  // namespace hetsim
