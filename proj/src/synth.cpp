#include "hetsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace hetsim {

namespace {

std::vector<Edge> sample_edges(Index rows, Index cols, Index count, std::mt19937_64& rng) {
  const auto cells = static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  // Floyd's algorithm: uniform subset of size `count` from [0, cells).
  std::unordered_set<std::uint64_t> picked;
  picked.reserve(static_cast<std::size_t>(count) * 2);
  for (std::uint64_t j = cells - static_cast<std::uint64_t>(count); j < cells; ++j) {
    std::uniform_int_distribution<std::uint64_t> dist(0, j);
    const std::uint64_t v = dist(rng);
    if (!picked.insert(v).second) picked.insert(j);
  }
  std::vector<std::uint64_t> sorted(picked.begin(), picked.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Edge> edges;
  edges.reserve(sorted.size());
  for (auto cell : sorted) {
    edges.push_back({static_cast<Index>(cell / static_cast<std::uint64_t>(cols)),
                     static_cast<Index>(cell % static_cast<std::uint64_t>(cols))});
  }
  return edges;
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

void RandomNetworkSpec::validate() const {
  if (classes < 2) throw std::invalid_argument("K must be at least 2");
  if (max_size < 2) throw std::invalid_argument("N must be at least 2");
}

HeteroNetwork random_network(const RandomNetworkSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const Index lo = std::max<Index>(1, spec.max_size / 2);
  std::uniform_int_distribution<Index> size_dist(lo, spec.max_size);

  std::vector<EntityType> types;
  std::vector<Index> sizes;
  for (int k = 0; k < spec.classes; ++k) {
    sizes.push_back(size_dist(rng));
    types.emplace_back("T" + std::to_string(k), sequential_ids(sizes.back()));
  }
  std::vector<Relation> relations;
  for (int i = 0; i < spec.classes; ++i) {
    for (int j = i + 1; j < spec.classes; ++j) {
      const Index ni = sizes[static_cast<std::size_t>(i)];
      const Index nj = sizes[static_cast<std::size_t>(j)];
      const Index count = 2 * std::min(ni, nj);
      if (count > ni * nj) {
        throw std::invalid_argument(
            "cannot place " + std::to_string(count) + " distinct edges between types of size " +
            std::to_string(ni) + " and " + std::to_string(nj) +
            " (only " + std::to_string(ni * nj) + " pairs); increase N");
      }
      relations.push_back({"R" + std::to_string(i) + "_" + std::to_string(j),
                           static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                           sample_edges(ni, nj, count, rng)});
    }
  }
  return HeteroNetwork::from_indexed(std::move(types), std::move(relations));
}

void LayeredGraphSpec::validate() const {
  if (counts.size() < 2) throw std::invalid_argument("need at least two layers");
  for (Index c : counts) {
    if (c < 1) throw std::invalid_argument("every layer needs at least one point");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
}

std::pair<HeteroNetwork, PointCloud> layered_points_graph(const LayeredGraphSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud;
  for (Index count : spec.counts) {
    std::vector<Point> layer(static_cast<std::size_t>(count));
    for (auto& p : layer) {
      p[0] = unit(rng);
      p[1] = unit(rng);
    }
    cloud.layers.push_back(std::move(layer));
  }
  auto net = layered_graph_from_points(cloud, spec.radius);
  return {std::move(net), std::move(cloud)};
}

HeteroNetwork layered_graph_from_points(const PointCloud& points, double radius) {
  if (points.layers.size() < 2) throw std::invalid_argument("need at least two layers");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");

  std::vector<EntityType> types;
  for (std::size_t k = 0; k < points.layers.size(); ++k) {
    types.emplace_back("L" + std::to_string(k),
                       sequential_ids(static_cast<Index>(points.layers[k].size())));
  }

  std::vector<Relation> relations;
  for (std::size_t k = 1; k < points.layers.size(); ++k) {
    const auto& upper = points.layers[k];
    const auto& lower = points.layers[k - 1];
    // Bucket the lower layer on a grid with cells no smaller than the radius;
    // candidates of a point lie in the 3x3 block of cells around it.
    const double h = std::max(radius, 1.0 / 1024.0);
    const int cells = std::max(1, static_cast<int>(std::ceil(1.0 / h)));
    auto cell_of = [&](double v) {
      return std::clamp(static_cast<int>(v / h), 0, cells - 1);
    };
    std::vector<std::vector<Index>> grid(static_cast<std::size_t>(cells) *
                                         static_cast<std::size_t>(cells));
    for (std::size_t j = 0; j < lower.size(); ++j) {
      grid[static_cast<std::size_t>(cell_of(lower[j][0]) * cells + cell_of(lower[j][1]))]
          .push_back(static_cast<Index>(j));
    }
    Relation rel{"r" + std::to_string(k), k, k - 1, {}};
    for (std::size_t i = 0; i < upper.size(); ++i) {
      const int cx = cell_of(upper[i][0]);
      const int cy = cell_of(upper[i][1]);
      std::vector<Index> hits;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          const int x = cx + dx;
          const int y = cy + dy;
          if (x < 0 || y < 0 || x >= cells || y >= cells) continue;
          for (Index j : grid[static_cast<std::size_t>(x * cells + y)]) {
            if (distance(upper[i], lower[static_cast<std::size_t>(j)]) < radius) hits.push_back(j);
          }
        }
      }
      std::sort(hits.begin(), hits.end());
      for (Index j : hits) rel.edges.push_back({static_cast<Index>(i), j});
    }
    relations.push_back(std::move(rel));
  }
  return HeteroNetwork::from_indexed(std::move(types), std::move(relations));
}

Eigen::MatrixXd geometric_ground_truth(const std::vector<Point>& points) {
  const auto n = static_cast<Index>(points.size());
  Eigen::MatrixXd s(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      s(a, b) = -distance(points[static_cast<std::size_t>(a)], points[static_cast<std::size_t>(b)]);
    }
  }
  return s;
}

HeteroNetwork book_shaped_network(const BookShapedSpec& spec) {
  if (spec.books < 1 || spec.authors < 1 || spec.years < 1 || spec.publishers < 1) {
    throw std::invalid_argument("all type sizes must be positive");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<EntityType> types;
  types.emplace_back("Book", sequential_ids(spec.books));
  types.emplace_back("Author", sequential_ids(spec.authors));
  // Years are labelled chronologically from 1940.
  std::vector<std::string> year_ids;
  for (Index y = 0; y < spec.years; ++y) year_ids.push_back(std::to_string(1940 + y));
  types.emplace_back("Year", std::move(year_ids));
  types.emplace_back("Publisher", sequential_ids(spec.publishers));

  // Author profiles: a home window of years and a few publishers.
  struct Profile {
    Index first_year;
    Index span;
    std::vector<Index> publishers;
  };
  std::uniform_int_distribution<Index> year_dist(0, spec.years - 1);
  std::uniform_int_distribution<Index> pub_dist(0, spec.publishers - 1);
  std::uniform_int_distribution<Index> span_dist(1, std::max<Index>(1, std::min<Index>(12, spec.years)));
  std::uniform_int_distribution<int> npub_dist(1, 4);
  std::vector<Profile> profiles(static_cast<std::size_t>(spec.authors));
  for (auto& p : profiles) {
    p.span = span_dist(rng);
    p.first_year = std::min(year_dist(rng), spec.years - p.span);
    const int np = npub_dist(rng);
    for (int i = 0; i < np; ++i) p.publishers.push_back(pub_dist(rng));
  }

  // Heavy-tailed author productivity; every author gets at least one book
  // when there are enough books.
  std::vector<double> productivity(static_cast<std::size_t>(spec.authors));
  for (std::size_t a = 0; a < productivity.size(); ++a) {
    productivity[a] = 1.0 / std::sqrt(static_cast<double>(a) + 1.0);
  }
  std::discrete_distribution<Index> author_dist(productivity.begin(), productivity.end());
  std::bernoulli_distribution stray(0.1);

  Relation wrote{"isAuthorOf", 1, 0, {}};
  Relation published_by{"publishedBy", 0, 3, {}};
  Relation published_in{"publishedIn", 0, 2, {}};
  for (Index b = 0; b < spec.books; ++b) {
    const Index author = b < spec.authors ? b : author_dist(rng);
    const auto& prof = profiles[static_cast<std::size_t>(author)];
    std::uniform_int_distribution<Index> in_window(prof.first_year, prof.first_year + prof.span - 1);
    std::uniform_int_distribution<std::size_t> pick_pub(0, prof.publishers.size() - 1);
    const Index year = stray(rng) ? year_dist(rng) : in_window(rng);
    const Index publisher = stray(rng) ? pub_dist(rng) : prof.publishers[pick_pub(rng)];
    wrote.edges.push_back({author, b});
    published_by.edges.push_back({b, publisher});
    published_in.edges.push_back({b, year});
  }
  return HeteroNetwork::from_indexed(
      std::move(types), {std::move(wrote), std::move(published_by), std::move(published_in)});
}

}  // namespace hetsim
