#include "hetsim/network.hpp"

#include <algorithm>
#include <unordered_set>

namespace hetsim {

EntityType::EntityType(std::string name, std::vector<std::string> ids)
    : name_(std::move(name)), ids_(std::move(ids)) {
  if (ids_.empty()) {
    throw NetworkError("type '" + name_ + "' has no entities");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], static_cast<Index>(i)).second) {
      throw NetworkError("duplicate entity id '" + ids_[i] + "' in type '" +
                         name_ + "'");
    }
  }
}

std::optional<Index> EntityType::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

HeteroNetwork HeteroNetwork::build(const std::vector<TypeSpec>& types,
                                   const std::vector<RelationSpec>& relations) {
  std::vector<EntityType> built_types;
  built_types.reserve(types.size());
  std::unordered_map<std::string, std::size_t> type_index;
  for (const auto& spec : types) {
    if (!type_index.emplace(spec.name, built_types.size()).second) {
      throw NetworkError("duplicate type name '" + spec.name + "'");
    }
    built_types.emplace_back(spec.name, spec.entity_ids);
  }

  std::vector<Relation> built_relations;
  built_relations.reserve(relations.size());
  for (const auto& spec : relations) {
    auto src = type_index.find(spec.src_type);
    auto dst = type_index.find(spec.dst_type);
    if (src == type_index.end() || dst == type_index.end()) {
      throw NetworkError("relation '" + spec.name + "' references unknown type '" +
                         (src == type_index.end() ? spec.src_type : spec.dst_type) +
                         "'");
    }
    Relation rel{spec.name, src->second, dst->second, {}};
    rel.edges.reserve(spec.edges.size());
    const auto& src_type = built_types[src->second];
    const auto& dst_type = built_types[dst->second];
    for (const auto& [a, b] : spec.edges) {
      auto ia = src_type.find(a);
      auto ib = dst_type.find(b);
      if (!ia) {
        throw NetworkError("relation '" + spec.name + "': unknown " +
                           src_type.name() + " id '" + a + "'");
      }
      if (!ib) {
        throw NetworkError("relation '" + spec.name + "': unknown " +
                           dst_type.name() + " id '" + b + "'");
      }
      rel.edges.push_back({*ia, *ib});
    }
    built_relations.push_back(std::move(rel));
  }
  return from_indexed(std::move(built_types), std::move(built_relations));
}

HeteroNetwork HeteroNetwork::from_indexed(std::vector<EntityType> types,
                                          std::vector<Relation> relations) {
  HeteroNetwork net;
  net.types_ = std::move(types);
  net.relations_ = std::move(relations);
  net.validate();
  return net;
}

void HeteroNetwork::validate() const {
  std::unordered_set<std::string> names;
  for (const auto& t : types_) {
    if (!names.insert(t.name()).second) {
      throw NetworkError("duplicate type name '" + t.name() + "'");
    }
  }
  names.clear();
  for (const auto& r : relations_) {
    if (!names.insert(r.name).second) {
      throw NetworkError("duplicate relation name '" + r.name + "'");
    }
    if (r.src_type >= types_.size() || r.dst_type >= types_.size()) {
      throw NetworkError("relation '" + r.name + "' has an unregistered endpoint type");
    }
    const Index ns = types_[r.src_type].size();
    const Index nd = types_[r.dst_type].size();
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(r.edges.size());
    for (const auto& e : r.edges) {
      if (e.src < 0 || e.src >= ns || e.dst < 0 || e.dst >= nd) {
        throw NetworkError("relation '" + r.name + "' has an edge endpoint out of range");
      }
      const auto key = static_cast<std::uint64_t>(e.src) * static_cast<std::uint64_t>(nd) +
                       static_cast<std::uint64_t>(e.dst);
      if (!seen.insert(key).second) {
        throw NetworkError("relation '" + r.name + "' has duplicate edge (" +
                           types_[r.src_type].id(e.src) + ", " +
                           types_[r.dst_type].id(e.dst) + ")");
      }
    }
  }
}

Index HeteroNetwork::total_entities() const {
  Index n = 0;
  for (const auto& t : types_) n += t.size();
  return n;
}

std::optional<std::size_t> HeteroNetwork::find_type(const std::string& name) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> HeteroNetwork::find_relation(const std::string& name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> HeteroNetwork::incident_relations(std::size_t t) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    if (relations_[r].src_type == t || relations_[r].dst_type == t) out.push_back(r);
  }
  return out;
}

bool operator==(const HeteroNetwork& a, const HeteroNetwork& b) {
  if (a.types_.size() != b.types_.size() || a.relations_.size() != b.relations_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.types_.size(); ++i) {
    if (a.types_[i].name() != b.types_[i].name() || a.types_[i].ids() != b.types_[i].ids()) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.relations_.size(); ++i) {
    const auto& x = a.relations_[i];
    const auto& y = b.relations_[i];
    if (x.name != y.name || x.src_type != y.src_type || x.dst_type != y.dst_type ||
        x.edges != y.edges) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> sequential_ids(Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace hetsim
