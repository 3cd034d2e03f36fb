#pragma once

// Shared fixtures and independent oracles. The oracles work on neighbour
// lists and plain loops; they never touch CouplingPlan or the sparse
// operators.

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "hetsim/dense.hpp"
#include "hetsim/network.hpp"
#include "hetsim/operators.hpp"

namespace hetsim::testing {

/// A = {a1, a2}, B = {b1}, r: A x B = {(a1,b1), (a2,b1)}.
inline HeteroNetwork toy_network() {
  return HeteroNetwork::build({{"A", {"a1", "a2"}}, {"B", {"b1"}}},
                              {{"r", "A", "B", {{"a1", "b1"}, {"a2", "b1"}}}});
}

/// Random directed graph on one type with a single self relation.
inline HeteroNetwork random_single_type(std::mt19937_64& rng, Index max_n = 30) {
  std::uniform_int_distribution<Index> size(2, max_n);
  const Index n = size(rng);
  std::bernoulli_distribution edge(std::uniform_real_distribution<double>(0.05, 0.4)(rng));
  Relation rel{"links", 0, 0, {}};
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (edge(rng)) rel.edges.push_back({a, b});
    }
  }
  return HeteroNetwork::from_indexed({EntityType("V", sequential_ids(n))}, {std::move(rel)});
}

/// Random network with 2-4 types, random relations (some parallel, some
/// self), total entities <= max_total.
inline HeteroNetwork random_hetero(std::mt19937_64& rng, Index max_total = 200) {
  std::uniform_int_distribution<int> ntypes(2, 4);
  const int k = ntypes(rng);
  const Index per = std::max<Index>(2, max_total / k);
  std::uniform_int_distribution<Index> size(2, per);
  std::vector<EntityType> types;
  std::vector<Index> sizes;
  for (int t = 0; t < k; ++t) {
    sizes.push_back(size(rng));
    types.emplace_back("T" + std::to_string(t), sequential_ids(sizes.back()));
  }
  std::uniform_int_distribution<int> nrel(1, 2 * k);
  std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(k) - 1);
  std::vector<Relation> rels;
  const int m = nrel(rng);
  for (int r = 0; r < m; ++r) {
    const std::size_t s = pick(rng);
    const std::size_t d = pick(rng);
    std::bernoulli_distribution edge(std::uniform_real_distribution<double>(0.02, 0.3)(rng));
    Relation rel{"R" + std::to_string(r), s, d, {}};
    for (Index a = 0; a < sizes[s]; ++a) {
      for (Index b = 0; b < sizes[d]; ++b) {
        if (edge(rng)) rel.edges.push_back({a, b});
      }
    }
    rels.push_back(std::move(rel));
  }
  return HeteroNetwork::from_indexed(std::move(types), std::move(rels));
}

/// Neighbour-average form of one coupling sum:
/// out_t(a,b) = sum over relations incident to t of
///   w / (|N(a)||N(b)|) * sum_{c in N(a), d in N(b)} S_p(c,d),
/// where N(.) are neighbours across the relation (in-neighbours for a self
/// relation) and empty neighbourhoods contribute 0.
inline SimilaritySet oracle_coupling_sum(const HeteroNetwork& net, const WeightMatrix& w,
                                         const SimilaritySet& state) {
  SimilaritySet out;
  for (const auto& t : net.types()) out.blocks.push_back(Eigen::MatrixXd::Zero(t.size(), t.size()));
  for (std::size_t r = 0; r < net.num_relations(); ++r) {
    const auto& rel = net.relation(r);
    // role: (updated type, partner type, neighbour lists of updated entities)
    struct Role {
      std::size_t type;
      std::size_t partner;
      std::vector<std::vector<Index>> nbrs;
    };
    std::vector<Role> roles;
    Role dst_role{rel.dst_type, rel.src_type,
                  std::vector<std::vector<Index>>(static_cast<std::size_t>(net.type(rel.dst_type).size()))};
    for (const auto& e : rel.edges) dst_role.nbrs[static_cast<std::size_t>(e.dst)].push_back(e.src);
    roles.push_back(std::move(dst_role));
    if (!rel.is_self()) {
      Role src_role{rel.src_type, rel.dst_type,
                    std::vector<std::vector<Index>>(static_cast<std::size_t>(net.type(rel.src_type).size()))};
      for (const auto& e : rel.edges) src_role.nbrs[static_cast<std::size_t>(e.src)].push_back(e.dst);
      roles.push_back(std::move(src_role));
    }
    for (const auto& role : roles) {
      const double weight = w.get({role.type, role.partner, r});
      const auto& sp = state.blocks[role.partner];
      auto& acc = out.blocks[role.type];
      const Index n = acc.rows();
      for (Index a = 0; a < n; ++a) {
        const auto& na = role.nbrs[static_cast<std::size_t>(a)];
        for (Index b = 0; b < n; ++b) {
          const auto& nb = role.nbrs[static_cast<std::size_t>(b)];
          if (na.empty() || nb.empty()) continue;
          double s = 0.0;
          for (Index c : na) {
            for (Index d : nb) s += sp(c, d);
          }
          acc(a, b) += weight * s / static_cast<double>(na.size() * nb.size());
        }
      }
    }
  }
  return out;
}

inline SimilaritySet oracle_sweep(const HeteroNetwork& net, const WeightMatrix& w,
                                  const SimilaritySet& state) {
  auto out = oracle_coupling_sum(net, w, state);
  for (auto& b : out.blocks) b.diagonal().setOnes();
  return out;
}

/// Literal triple count for the ordering metric.
inline std::uint64_t brute_force_triples(const Eigen::MatrixXd& s, const Eigen::MatrixXd& h) {
  std::uint64_t count = 0;
  const Index n = s.rows();
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      for (Index c = 0; c < n; ++c) {
        if (s(a, b) < s(a, c) && h(a, b) < h(a, c)) ++count;
      }
    }
  }
  return count;
}

inline double max_abs_diff(const SimilaritySet& x, const SimilaritySet& y) {
  double m = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    m = std::max(m, (x.blocks[t] - y.blocks[t]).cwiseAbs().maxCoeff());
  }
  return m;
}

/// Random symmetric matrix Q diag(lambda) Qᵀ with Haar-like Q.
inline Eigen::MatrixXd planted_symmetric(const Eigen::VectorXd& lambda, std::mt19937_64& rng) {
  const Index n = lambda.size();
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ();
  return q * lambda.asDiagonal() * q.transpose();
}

}  // namespace hetsim::testing
