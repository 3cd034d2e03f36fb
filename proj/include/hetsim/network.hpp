#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hetsim {

using Index = std::ptrdiff_t;

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A class of entities. External ids are arbitrary strings; internally each
/// entity is addressed by its dense position in `ids`.
class EntityType {
 public:
  EntityType(std::string name, std::vector<std::string> ids);

  const std::string& name() const { return name_; }
  Index size() const { return static_cast<Index>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Index i) const { return ids_.at(static_cast<std::size_t>(i)); }
  std::optional<Index> find(const std::string& id) const;

 private:
  std::string name_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
};

struct Edge {
  Index src;
  Index dst;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A named 0/1 relation between two types, stored as an edge list of dense
/// indices in (src type, dst type). src and dst may be the same type.
struct Relation {
  std::string name;
  std::size_t src_type;
  std::size_t dst_type;
  std::vector<Edge> edges;

  bool is_self() const { return src_type == dst_type; }
};

struct TypeSpec {
  std::string name;
  std::vector<std::string> entity_ids;
};

struct RelationSpec {
  std::string name;
  std::string src_type;
  std::string dst_type;
  std::vector<std::pair<std::string, std::string>> edges;
};

/// Immutable typed multi-relational network.
class HeteroNetwork {
 public:
  /// Builds from external ids. Throws NetworkError on duplicate names, unknown
  /// ids, or duplicate edges.
  static HeteroNetwork build(const std::vector<TypeSpec>& types,
                             const std::vector<RelationSpec>& relations);

  /// Builds from already-indexed relations (generators). Same validation.
  static HeteroNetwork from_indexed(std::vector<EntityType> types,
                                    std::vector<Relation> relations);

  const std::vector<EntityType>& types() const { return types_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const EntityType& type(std::size_t t) const { return types_.at(t); }
  const Relation& relation(std::size_t r) const { return relations_.at(r); }
  std::size_t num_types() const { return types_.size(); }
  std::size_t num_relations() const { return relations_.size(); }
  Index total_entities() const;

  std::optional<std::size_t> find_type(const std::string& name) const;
  std::optional<std::size_t> find_relation(const std::string& name) const;

  /// Relations in which type t takes part, in relation order. A self relation
  /// is listed once.
  std::vector<std::size_t> incident_relations(std::size_t t) const;

  friend bool operator==(const HeteroNetwork& a, const HeteroNetwork& b);

 private:
  HeteroNetwork() = default;
  void validate() const;

  std::vector<EntityType> types_;
  std::vector<Relation> relations_;
};

/// Entity ids "0".."n-1"; used by the generators.
std::vector<std::string> sequential_ids(Index n);

}  // namespace hetsim
