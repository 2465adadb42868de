#include "clusim/object_model.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace clusim {

const std::vector<Oid> Database::kEmptyOids{};
const std::vector<EdgeIndex> Database::kEmptyEdges{};

const char* to_string(RelationshipKind kind) {
  switch (kind) {
    case RelationshipKind::Version:
      return "version";
    case RelationshipKind::Configuration:
      return "configuration";
    case RelationshipKind::Equivalence:
      return "equivalence";
    case RelationshipKind::InheritanceDependency:
      return "inheritance";
  }
  return "?";
}

std::optional<RelationshipKind> relationship_from_string(const std::string& s) {
  if (s == "version") return RelationshipKind::Version;
  if (s == "configuration") return RelationshipKind::Configuration;
  if (s == "equivalence") return RelationshipKind::Equivalence;
  if (s == "inheritance") return RelationshipKind::InheritanceDependency;
  return std::nullopt;
}

Database::Database(std::vector<ClassDef> schema) : schema_(std::move(schema)) {}

const ClassDef& Database::class_def(ClassId id) const {
  if (id == kNoClass || id > schema_.size())
    throw DanglingReference("unknown class " + std::to_string(id));
  return schema_[id - 1];
}

bool Database::has_class(ClassId id) const {
  return id != kNoClass && id <= schema_.size();
}

std::size_t Database::index_of(Oid oid) const {
  auto it = by_oid_.find(oid);
  if (it == by_oid_.end())
    throw UnknownOid("unknown oid " + std::to_string(oid));
  return it->second;
}

bool Database::contains(Oid oid) const { return by_oid_.count(oid) != 0; }

const ObjectInstance& Database::object(Oid oid) const {
  return objects_[index_of(oid)];
}

ObjectInstance& Database::object_mut(Oid oid) { return objects_[index_of(oid)]; }

const std::vector<Oid>& Database::instances_of(ClassId id) const {
  auto it = by_class_.find(id);
  return it == by_class_.end() ? kEmptyOids : it->second;
}

const std::vector<EdgeIndex>& Database::edges_of(Oid oid) const {
  auto it = adjacency_.find(oid);
  return it == adjacency_.end() ? kEmptyEdges : it->second;
}

Oid Database::add_object(ObjectInstance instance) {
  if (instance.oid == kNoOid) instance.oid = next_oid_;
  if (by_oid_.count(instance.oid))
    throw DuplicateOid("oid " + std::to_string(instance.oid) +
                       " already present");
  if (!has_class(instance.class_id))
    throw DanglingReference("object " + std::to_string(instance.oid) +
                            " references unknown class " +
                            std::to_string(instance.class_id));

  auto require = [&](Oid target, const char* what) {
    if (!contains(target))
      throw DanglingReference(std::string(what) + " of object " +
                              std::to_string(instance.oid) +
                              " references nonexistent oid " +
                              std::to_string(target));
  };
  if (instance.composite_parent) require(*instance.composite_parent, "parent");
  for (Oid c : instance.components) require(c, "component");
  for (Oid e : instance.equivalents) require(e, "equivalent");
  if (instance.version_ancestor) require(*instance.version_ancestor, "ancestor");
  if (instance.version_descendant)
    require(*instance.version_descendant, "descendant");
  for (const AttributeSlot& slot : instance.attributes)
    if (slot.impl == AttrImpl::Reference) require(slot.ref_target, "attribute");

  if (instance.version_ancestor) {
    const ObjectInstance& anc = object(*instance.version_ancestor);
    if (anc.version_descendant)
      throw InvalidLink("ancestor " + std::to_string(anc.oid) +
                        " already has a descendant version");
    if (anc.version_no >= instance.version_no)
      throw InvalidLink("ancestor version " + std::to_string(anc.version_no) +
                        " not smaller than " +
                        std::to_string(instance.version_no));
  }
  if (instance.size == 0 && !instance.size_override)
    throw InvalidLink("object " + std::to_string(instance.oid) +
                      " has zero size");

  Oid oid = instance.oid;
  next_oid_ = std::max(next_oid_, oid + 1);
  by_oid_.emplace(oid, objects_.size());
  by_class_[instance.class_id].push_back(oid);
  objects_.push_back(std::move(instance));
  link_reciprocal(objects_.back());
  return oid;
}

void Database::link_reciprocal(ObjectInstance& added) {
  const Oid oid = added.oid;
  if (added.composite_parent) {
    object_mut(*added.composite_parent).components.push_back(oid);
    add_edge(RelationshipKind::Configuration, oid, *added.composite_parent, 0.0);
  }
  for (Oid c : added.components) {
    object_mut(c).composite_parent = oid;
    add_edge(RelationshipKind::Configuration, oid, c, 0.0);
  }
  for (Oid e : added.equivalents) {
    object_mut(e).equivalents.push_back(oid);
    add_edge(RelationshipKind::Equivalence, oid, e, 0.0);
  }
  if (added.version_ancestor) {
    object_mut(*added.version_ancestor).version_descendant = oid;
    add_edge(RelationshipKind::Version, oid, *added.version_ancestor, 0.0);
  }
  if (added.version_descendant) {
    object_mut(*added.version_descendant).version_ancestor = oid;
    add_edge(RelationshipKind::Version, oid, *added.version_descendant, 0.0);
  }
}

void Database::record_access(Oid oid) {
  objects_[index_of(oid)].access_count += 1;
  total_accesses_ += 1;
}

void Database::record_crossing(EdgeIndex edge) {
  if (edge >= edges_.size())
    throw UnknownEdge("edge index " + std::to_string(edge) + " out of range");
  edges_[edge].crossing_count += 1;
  total_crossings_ += 1;
}

EdgeIndex Database::add_edge(RelationshipKind kind, Oid a, Oid b,
                             double lookup_cost) {
  if (!contains(a) || !contains(b))
    throw DanglingReference("edge endpoint does not exist");
  if (a == b) throw InvalidLink("self edge on oid " + std::to_string(a));
  Oid lo = std::min(a, b), hi = std::max(a, b);
  if (auto existing = find_edge(kind, lo, hi)) return *existing;
  RelationshipEdge e;
  e.kind = kind;
  e.a = lo;
  e.b = hi;
  e.lookup_cost = lookup_cost;
  EdgeIndex idx = edges_.size();
  edges_.push_back(e);
  adjacency_[lo].push_back(idx);
  adjacency_[hi].push_back(idx);
  return idx;
}

std::optional<EdgeIndex> Database::find_edge(RelationshipKind kind, Oid a,
                                             Oid b) const {
  Oid lo = std::min(a, b), hi = std::max(a, b);
  auto it = adjacency_.find(lo);
  if (it == adjacency_.end()) return std::nullopt;
  for (EdgeIndex idx : it->second) {
    const RelationshipEdge& e = edges_[idx];
    if (e.kind == kind && e.a == lo && e.b == hi) return idx;
  }
  return std::nullopt;
}

void Database::set_edge_cost(EdgeIndex edge, double cost) {
  if (edge >= edges_.size())
    throw UnknownEdge("edge index " + std::to_string(edge) + " out of range");
  edges_[edge].lookup_cost = cost;
}

const RelationshipEdge& Database::edge(EdgeIndex e) const {
  if (e >= edges_.size())
    throw UnknownEdge("edge index " + std::to_string(e) + " out of range");
  return edges_[e];
}

void Database::dump(std::ostream& out) const {
  for (const ObjectInstance& o : objects_)
    out << o.oid << ' ' << o.class_id << ' ' << o.version_no << ' ' << o.size
        << '\n';
  for (const RelationshipEdge& e : edges_)
    out << to_string(e.kind) << ' ' << e.a << ' ' << e.b << ' ' << e.lookup_cost
        << '\n';
}

Database Database::load(std::istream& in, std::vector<ClassDef> schema) {
  Database db(std::move(schema));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (auto kind = relationship_from_string(first)) {
      Oid a, b;
      double cost;
      if (!(ls >> a >> b >> cost)) throw Error("malformed edge record: " + line);
      db.add_edge(*kind, a, b, cost);
    } else {
      ObjectInstance o;
      o.oid = std::stoull(first);
      std::uint64_t size;
      if (!(ls >> o.class_id >> o.version_no >> size))
        throw Error("malformed object record: " + line);
      o.size = size;
      o.size_override = size;
      db.add_object(std::move(o));
    }
  }
  return db;
}

std::uint64_t object_size(const ObjectInstance& instance, const ClassDef& cls,
                          std::uint32_t word_size_bytes) {
  if (instance.size_override) return *instance.size_override;
  if (cls.attr_sizes.empty())
    throw InvalidLink("class " + cls.name +
                      " has no attributes and object has no size override");
  std::uint64_t words = 0;
  for (std::uint32_t w : cls.attr_sizes) words += w;
  return words * word_size_bytes;
}

}  // namespace clusim
