#include "hetsim/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetsim {

namespace {

constexpr double kColumnTol = 1e-12;
constexpr double kWeightTol = 1e-12;

std::string key_string(const HeteroNetwork& net, const WeightKey& k) {
  auto type_name = [&](std::size_t t) {
    return t < net.num_types() ? net.type(t).name() : "#" + std::to_string(t);
  };
  auto rel_name = k.relation < net.num_relations() ? net.relation(k.relation).name
                                                   : "#" + std::to_string(k.relation);
  return "(" + type_name(k.type) + ", " + type_name(k.partner) + ", " + rel_name + ")";
}

}  // namespace

StochasticOperator column_stochastic(const HeteroNetwork& network, std::size_t relation,
                                     Direction direction) {
  const Relation& rel = network.relation(relation);
  const Index ns = network.type(rel.src_type).size();
  const Index nd = network.type(rel.dst_type).size();
  const bool fwd = direction == Direction::forward;
  const Index rows = fwd ? ns : nd;
  const Index cols = fwd ? nd : ns;

  std::vector<Index> degree(static_cast<std::size_t>(cols), 0);
  for (const auto& e : rel.edges) ++degree[static_cast<std::size_t>(fwd ? e.dst : e.src)];

  std::vector<Eigen::Triplet<double, Index>> triplets;
  triplets.reserve(rel.edges.size());
  for (const auto& e : rel.edges) {
    const Index r = fwd ? e.src : e.dst;
    const Index c = fwd ? e.dst : e.src;
    triplets.emplace_back(r, c, 1.0 / static_cast<double>(degree[static_cast<std::size_t>(c)]));
  }
  SparseMatrix values(rows, cols);
  values.setFromTriplets(triplets.begin(), triplets.end());
  values.makeCompressed();
  return {relation, direction, std::move(values)};
}

double WeightMatrix::get(const WeightKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

double WeightMatrix::incident_sum(std::size_t type) const {
  double s = 0.0;
  for (const auto& [k, w] : entries_) {
    if (k.type == type) s += w;
  }
  return s;
}

std::vector<WeightKey> admissible_weight_keys(const HeteroNetwork& network) {
  std::vector<WeightKey> keys;
  for (std::size_t r = 0; r < network.num_relations(); ++r) {
    const auto& rel = network.relation(r);
    keys.push_back({rel.src_type, rel.dst_type, r});
    if (!rel.is_self()) keys.push_back({rel.dst_type, rel.src_type, r});
  }
  return keys;
}

WeightMatrix default_weights(const HeteroNetwork& network) {
  WeightMatrix w;
  for (std::size_t t = 0; t < network.num_types(); ++t) {
    const auto incident = network.incident_relations(t);
    if (incident.empty()) continue;
    const double share = 1.0 / static_cast<double>(incident.size());
    for (std::size_t r : incident) {
      const auto& rel = network.relation(r);
      const std::size_t partner = rel.src_type == t ? rel.dst_type : rel.src_type;
      w.set({t, partner, r}, share);
    }
  }
  return w;
}

double norm1(const SparseMatrix& m) {
  double best = 0.0;
  for (Index c = 0; c < m.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

ConditionReport check_convergence_conditions(const HeteroNetwork& network,
                                             const WeightMatrix& weights) {
  ConditionReport report;
  for (std::size_t r = 0; r < network.num_relations(); ++r) {
    for (Direction dir : {Direction::forward, Direction::reverse}) {
      const auto op = column_stochastic(network, r, dir);
      for (Index c = 0; c < op.values.outerSize(); ++c) {
        double s = 0.0;
        bool any = false;
        for (SparseMatrix::InnerIterator it(op.values, c); it; ++it) {
          s += it.value();
          any = true;
        }
        if (any && std::abs(s - 1.0) > kColumnTol) {
          report.non_stochastic_columns.push_back({r, dir, c, s});
        }
      }
    }
  }

  const auto admissible = admissible_weight_keys(network);
  for (const auto& [key, w] : weights.entries()) {
    if (std::find(admissible.begin(), admissible.end(), key) == admissible.end()) {
      report.unknown_weights.push_back(key);
    }
    if (w < 0.0 || !std::isfinite(w)) report.negative_weights.push_back(key);
  }

  report.lyapunov_bound.assign(network.num_types(), 0.0);
  for (std::size_t t = 0; t < network.num_types(); ++t) {
    const double s = weights.incident_sum(t);
    if (s > 1.0 + kWeightTol) report.overweight_types.push_back({t, s});
  }
  if (report.unknown_weights.empty()) {
    const CouplingPlan plan(network, weights);
    for (std::size_t t = 0; t < plan.num_types(); ++t) {
      for (const auto& c : plan.couplings(t)) {
        const double n1 = norm1(c.op);
        report.lyapunov_bound[t] += c.weight * n1 * n1;
      }
    }
  }
  return report;
}

CouplingPlan::CouplingPlan(const HeteroNetwork& network, const WeightMatrix& weights) {
  const auto admissible = admissible_weight_keys(network);
  for (const auto& [key, w] : weights.entries()) {
    if (std::find(admissible.begin(), admissible.end(), key) == admissible.end()) {
      throw std::invalid_argument("weight " + key_string(network, key) +
                                  " does not match any relation of the network");
    }
  }

  sizes_.reserve(network.num_types());
  for (const auto& t : network.types()) sizes_.push_back(t.size());
  couplings_.resize(network.num_types());

  for (std::size_t r = 0; r < network.num_relations(); ++r) {
    const auto& rel = network.relation(r);
    // dst entities average over their src neighbours.
    if (const double w = weights.get({rel.dst_type, rel.src_type, r}); w != 0.0) {
      auto op = column_stochastic(network, r, Direction::forward).values;
      SparseMatrix op_t = op.transpose();
      couplings_[rel.dst_type].push_back({rel.src_type, r, w, std::move(op), std::move(op_t)});
    }
    if (rel.is_self()) continue;
    // src entities average over their dst neighbours.
    if (const double w = weights.get({rel.src_type, rel.dst_type, r}); w != 0.0) {
      auto op = column_stochastic(network, r, Direction::reverse).values;
      SparseMatrix op_t = op.transpose();
      couplings_[rel.src_type].push_back({rel.dst_type, r, w, std::move(op), std::move(op_t)});
    }
  }
}

}  // namespace hetsim
