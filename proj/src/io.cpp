#include "hetsim/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "csv.hpp"

namespace hetsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string file_stem(std::size_t index, const std::string& name) {
  std::string safe;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
    safe.push_back(ok ? ch : '_');
  }
  return std::to_string(index) + "_" + safe;
}

const json& require(const json& obj, const char* key, const fs::path& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(path.string() + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const fs::path& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw FormatError(path.string() + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

NetworkBundle load_bundle(const fs::path& path) {
  const fs::path schema_path = fs::is_directory(path) ? path / "schema.json" : path;
  const fs::path root = schema_path.parent_path();
  std::ifstream in(schema_path);
  if (!in) throw IoError("cannot open '" + schema_path.string() + "'");
  json schema;
  try {
    in >> schema;
  } catch (const json::parse_error& e) {
    throw FormatError(schema_path.string() + ": " + e.what());
  }

  std::vector<TypeSpec> types;
  for (const auto& t : require(schema, "types", schema_path)) {
    TypeSpec spec{require_string(t, "name", schema_path), {}};
    const fs::path file = root / require_string(t, "entities_csv", schema_path);
    for (auto& row : csv::read(file, {"id"})) spec.entity_ids.push_back(std::move(row.fields[0]));
    types.push_back(std::move(spec));
  }

  // Resolve ids here so that errors carry the offending line.
  std::unordered_map<std::string, std::size_t> type_pos;
  for (std::size_t i = 0; i < types.size(); ++i) type_pos.emplace(types[i].name, i);
  std::vector<std::unordered_map<std::string, bool>> known(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (const auto& id : types[i].entity_ids) known[i].emplace(id, true);
  }

  std::vector<RelationSpec> relations;
  for (const auto& r : require(schema, "relations", schema_path)) {
    RelationSpec spec{require_string(r, "name", schema_path), require_string(r, "src", schema_path),
                      require_string(r, "dst", schema_path), {}};
    const fs::path file = root / require_string(r, "edges_csv", schema_path);
    auto src = type_pos.find(spec.src_type);
    auto dst = type_pos.find(spec.dst_type);
    if (src == type_pos.end() || dst == type_pos.end()) {
      throw FormatError(schema_path.string() + ": relation '" + spec.name +
                        "' references an undeclared type");
    }
    for (auto& row : csv::read(file, {"src_id", "dst_id"})) {
      if (!known[src->second].count(row.fields[0])) {
        csv::fail(file, row.line, "unknown " + spec.src_type + " id '" + row.fields[0] + "'");
      }
      if (!known[dst->second].count(row.fields[1])) {
        csv::fail(file, row.line, "unknown " + spec.dst_type + " id '" + row.fields[1] + "'");
      }
      spec.edges.emplace_back(std::move(row.fields[0]), std::move(row.fields[1]));
    }
    relations.push_back(std::move(spec));
  }

  NetworkBundle bundle{[&] {
                         try {
                           return HeteroNetwork::build(types, relations);
                         } catch (const NetworkError& e) {
                           throw FormatError(schema_path.string() + ": " + e.what());
                         }
                       }(),
                       std::nullopt};

  if (schema.contains("weights") && !schema.at("weights").is_null()) {
    WeightMatrix w;
    const auto& net = bundle.network;
    for (const auto& entry : schema.at("weights")) {
      const auto t = net.find_type(require_string(entry, "type", schema_path));
      const auto p = net.find_type(require_string(entry, "partner", schema_path));
      const auto r = net.find_relation(require_string(entry, "relation", schema_path));
      const auto& wv = require(entry, "weight", schema_path);
      if (!t || !p || !r || !wv.is_number()) {
        throw FormatError(schema_path.string() + ": malformed weight entry " + entry.dump());
      }
      w.set({*t, *p, *r}, wv.get<double>());
    }
    bundle.weights = std::move(w);
  }
  return bundle;
}

HeteroNetwork load_network(const fs::path& path) { return load_bundle(path).network; }

void save_network(const HeteroNetwork& network, const fs::path& dir, const WeightMatrix* weights) {
  std::error_code ec;
  fs::create_directories(dir / "entities", ec);
  fs::create_directories(dir / "relations", ec);

  json schema;
  schema["types"] = json::array();
  for (std::size_t t = 0; t < network.num_types(); ++t) {
    const auto& type = network.type(t);
    const std::string rel_path = "entities/" + file_stem(t, type.name()) + ".csv";
    auto out = open_for_write(dir / rel_path);
    csv::write_row(out, {"id"});
    for (const auto& id : type.ids()) csv::write_row(out, {id});
    finish(out, dir / rel_path);
    schema["types"].push_back({{"name", type.name()}, {"entities_csv", rel_path}});
  }
  schema["relations"] = json::array();
  for (std::size_t r = 0; r < network.num_relations(); ++r) {
    const auto& rel = network.relation(r);
    const std::string rel_path = "relations/" + file_stem(r, rel.name) + ".csv";
    auto out = open_for_write(dir / rel_path);
    csv::write_row(out, {"src_id", "dst_id"});
    const auto& src = network.type(rel.src_type);
    const auto& dst = network.type(rel.dst_type);
    for (const auto& e : rel.edges) csv::write_row(out, {src.id(e.src), dst.id(e.dst)});
    finish(out, dir / rel_path);
    schema["relations"].push_back({{"name", rel.name},
                                   {"src", src.name()},
                                   {"dst", dst.name()},
                                   {"edges_csv", rel_path}});
  }
  if (weights != nullptr) {
    schema["weights"] = json::array();
    for (const auto& [k, w] : weights->entries()) {
      schema["weights"].push_back({{"type", network.type(k.type).name()},
                                   {"partner", network.type(k.partner).name()},
                                   {"relation", network.relation(k.relation).name},
                                   {"weight", w}});
    }
  }
  auto out = open_for_write(dir / "schema.json");
  out << schema.dump(2) << '\n';
  finish(out, dir / "schema.json");
}

std::vector<SimilarityBlock> label_similarity(const HeteroNetwork& network,
                                              const SimilaritySet& similarity) {
  if (similarity.size() != network.num_types()) {
    throw std::invalid_argument("similarity does not match the network");
  }
  std::vector<SimilarityBlock> out;
  for (std::size_t t = 0; t < network.num_types(); ++t) {
    out.push_back({network.type(t).name(), network.type(t).ids(), similarity.blocks[t]});
  }
  return out;
}

void save_similarity(const std::vector<SimilarityBlock>& blocks, const fs::path& path) {
  auto out = open_for_write(path);
  csv::write_row(out, {"type", "row_id", "col_id", "value"});
  for (const auto& b : blocks) {
    if (!b.values.allFinite()) {
      throw std::invalid_argument("similarity of type '" + b.type + "' has non-finite entries");
    }
    const auto n = static_cast<Index>(b.ids.size());
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        csv::write_row(out, {b.type, b.ids[static_cast<std::size_t>(i)],
                             b.ids[static_cast<std::size_t>(j)], format_double(b.values(i, j))});
      }
    }
  }
  finish(out, path);
}

std::vector<SimilarityBlock> load_similarity(const fs::path& path) {
  const auto rows = csv::read(path, {"type", "row_id", "col_id", "value"});
  struct Pending {
    std::vector<std::string> ids;
    std::unordered_map<std::string, Index> index;
    std::vector<std::tuple<Index, Index, double>> entries;
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> pending;
  for (const auto& row : rows) {
    auto [it, fresh] = pending.try_emplace(row.fields[0]);
    if (fresh) order.push_back(row.fields[0]);
    auto& p = it->second;
    auto idx = [&](const std::string& id) {
      auto [pos, added] = p.index.try_emplace(id, static_cast<Index>(p.ids.size()));
      if (added) p.ids.push_back(id);
      return pos->second;
    };
    const Index i = idx(row.fields[1]);
    const Index j = idx(row.fields[2]);
    p.entries.emplace_back(i, j, csv::parse_double(path, row.line, row.fields[3]));
  }
  std::vector<SimilarityBlock> out;
  for (const auto& name : order) {
    auto& p = pending.at(name);
    const auto n = static_cast<Index>(p.ids.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j, v] : p.entries) m(i, j) = m(j, i) = v;
    out.push_back({name, std::move(p.ids), std::move(m)});
  }
  return out;
}

std::vector<FactorBlock> label_factors(const HeteroNetwork& network, const FactoredSet& factors,
                                       std::uint64_t seed, std::uint64_t iterations) {
  if (factors.size() != network.num_types()) {
    throw std::invalid_argument("factors do not match the network");
  }
  std::vector<FactorBlock> out;
  for (std::size_t t = 0; t < network.num_types(); ++t) {
    out.push_back({network.type(t).name(), network.type(t).ids(), factors[t], seed, iterations});
  }
  return out;
}

void save_factors(const std::vector<FactorBlock>& blocks, const fs::path& path) {
  auto out = open_for_write(path);
  csv::write_row(out, {"type", "entry", "row", "col", "value"});
  for (const auto& b : blocks) {
    const auto& f = b.factors;
    if (!f.basis.allFinite() || !f.values.allFinite()) {
      throw std::invalid_argument("factors of type '" + b.type + "' have non-finite entries");
    }
    csv::write_row(out, {b.type, "rank", "", "", std::to_string(f.rank())});
    csv::write_row(out, {b.type, "seed", "", "", std::to_string(b.seed)});
    csv::write_row(out, {b.type, "iterations", "", "", std::to_string(b.iterations)});
    for (const auto& id : b.ids) csv::write_row(out, {b.type, "id", id, "", ""});
    for (Index k = 0; k < f.rank(); ++k) {
      csv::write_row(out, {b.type, "d", "", std::to_string(k), format_double(f.values(k))});
    }
    for (Index i = 0; i < f.dim(); ++i) {
      for (Index k = 0; k < f.rank(); ++k) {
        csv::write_row(out, {b.type, "U", b.ids[static_cast<std::size_t>(i)], std::to_string(k),
                             format_double(f.basis(i, k))});
      }
    }
  }
  finish(out, path);
}

std::vector<FactorBlock> load_factors(const fs::path& path) {
  const auto rows = csv::read(path, {"type", "entry", "row", "col", "value"});
  std::vector<FactorBlock> out;
  std::vector<std::unordered_map<std::string, Index>> index;
  std::vector<bool> rank_seen;
  auto block_for = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].type == name) return i;
    }
    out.push_back({name, {}, FactoredSimilarity::identity(0), 0, 0});
    index.emplace_back();
    rank_seen.push_back(false);
    return out.size() - 1;
  };
  std::vector<std::vector<std::tuple<std::string, Index, double, std::size_t>>> u_entries;
  for (const auto& row : rows) {
    const std::size_t b = block_for(row.fields[0]);
    u_entries.resize(out.size());
    auto& blk = out[b];
    const std::string& entry = row.fields[1];
    if (entry == "rank") {
      const auto r = csv::parse_int(path, row.line, row.fields[4]);
      if (r < 0) csv::fail(path, row.line, "negative rank");
      blk.factors.values = Eigen::VectorXd::Zero(r);
      rank_seen[b] = true;
    } else if (entry == "seed") {
      blk.seed = csv::parse_uint(path, row.line, row.fields[4]);
    } else if (entry == "iterations") {
      blk.iterations = csv::parse_uint(path, row.line, row.fields[4]);
    } else if (entry == "id") {
      if (!index[b].emplace(row.fields[2], static_cast<Index>(blk.ids.size())).second) {
        csv::fail(path, row.line, "duplicate id '" + row.fields[2] + "'");
      }
      blk.ids.push_back(row.fields[2]);
    } else if (entry == "d" || entry == "U") {
      if (!rank_seen[b]) csv::fail(path, row.line, "'" + entry + "' before 'rank'");
      const auto k = csv::parse_int(path, row.line, row.fields[3]);
      if (k < 0 || k >= blk.factors.values.size()) csv::fail(path, row.line, "component out of range");
      const double v = csv::parse_double(path, row.line, row.fields[4]);
      if (entry == "d") {
        blk.factors.values(k) = v;
      } else {
        u_entries[b].emplace_back(row.fields[2], static_cast<Index>(k), v, row.line);
      }
    } else {
      csv::fail(path, row.line, "unknown entry '" + entry + "'");
    }
  }
  for (std::size_t b = 0; b < out.size(); ++b) {
    auto& blk = out[b];
    blk.factors.basis = Eigen::MatrixXd::Zero(static_cast<Index>(blk.ids.size()),
                                              blk.factors.values.size());
    for (const auto& [id, k, v, line] : u_entries[b]) {
      auto it = index[b].find(id);
      if (it == index[b].end()) csv::fail(path, line, "unknown id '" + id + "'");
      blk.factors.basis(it->second, k) = v;
    }
  }
  return out;
}

void save_trace(const SolveTrace& trace, const fs::path& path) {
  auto out = open_for_write(path);
  csv::write_row(out, {"iteration", "residual", "seconds"});
  for (std::size_t k = 0; k < trace.residuals.size(); ++k) {
    csv::write_row(out, {std::to_string(k + 1), format_double(trace.residuals[k]),
                         format_double(trace.seconds[k])});
  }
  finish(out, path);
}

void save_points(const PointCloud& points, const fs::path& path) {
  auto out = open_for_write(path);
  csv::write_row(out, {"layer", "x", "y"});
  for (std::size_t k = 0; k < points.layers.size(); ++k) {
    for (const auto& p : points.layers[k]) {
      csv::write_row(out, {std::to_string(k), format_double(p[0]), format_double(p[1])});
    }
  }
  finish(out, path);
}

PointCloud load_points(const fs::path& path) {
  PointCloud cloud;
  for (const auto& row : csv::read(path, {"layer", "x", "y"})) {
    const auto layer = csv::parse_int(path, row.line, row.fields[0]);
    if (layer < 0) csv::fail(path, row.line, "negative layer");
    const double x = csv::parse_double(path, row.line, row.fields[1]);
    const double y = csv::parse_double(path, row.line, row.fields[2]);
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
      csv::fail(path, row.line, "point outside the unit square");
    }
    if (static_cast<std::size_t>(layer) >= cloud.layers.size()) {
      cloud.layers.resize(static_cast<std::size_t>(layer) + 1);
    }
    cloud.layers[static_cast<std::size_t>(layer)].push_back({x, y});
  }
  return cloud;
}

void export_heatmap(const Eigen::MatrixXd& matrix, const fs::path& path) {
  if (!matrix.allFinite()) throw std::invalid_argument("heatmap: non-finite entries");
  const Index rows = matrix.rows();
  const Index cols = matrix.cols();
  const double lo = matrix.size() ? matrix.minCoeff() : 0.0;
  const double hi = matrix.size() ? matrix.maxCoeff() : 0.0;
  constexpr int kLow[3] = {0xff, 0xff, 0xff};
  constexpr int kHigh[3] = {0x08, 0x30, 0x6b};
  constexpr int kCell = 8;

  auto out = open_for_write(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * kCell << "\" height=\""
      << rows * kCell << "\" viewBox=\"0 0 " << cols << ' ' << rows
      << "\" shape-rendering=\"crispEdges\">\n"
      << "<desc>linear ramp #ffffff=" << format_double(lo) << " to #08306b=" << format_double(hi)
      << "</desc>\n";
  char colour[8];
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double t = hi > lo ? (matrix(i, j) - lo) / (hi - lo) : 0.0;
      int rgb[3];
      for (int c = 0; c < 3; ++c) {
        rgb[c] = static_cast<int>(std::lround(kLow[c] + t * (kHigh[c] - kLow[c])));
      }
      std::snprintf(colour, sizeof colour, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
      out << "<rect x=\"" << j << "\" y=\"" << i << "\" width=\"1\" height=\"1\" fill=\""
          << colour << "\"/>\n";
    }
  }
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace hetsim
