#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clusim/errors.hpp"

namespace clusim {

using Oid = std::uint64_t;
using ClassId = std::uint32_t;

constexpr Oid kNoOid = 0;
constexpr ClassId kNoClass = 0;

enum class RelationshipKind : std::uint8_t {
  Version = 0,
  Configuration = 1,
  Equivalence = 2,
  InheritanceDependency = 3,
};

const char* to_string(RelationshipKind kind);
std::optional<RelationshipKind> relationship_from_string(const std::string& s);

// Schema node. Version lineages are chains of sibling classes sharing one
// attribute layout; instances of a chain member descend from instances of
// the preceding chain class.
struct ClassDef {
  ClassId class_id = kNoClass;
  std::string name;
  std::uint32_t attr_count = 0;
  std::vector<std::uint32_t> attr_sizes;  // in memory words
  std::optional<ClassId> superclass;
  std::vector<ClassId> components;        // classes that are components of this one
  std::optional<ClassId> component_of;    // inverse of components
  std::optional<ClassId> equivalent;
  std::optional<ClassId> version_ancestor_class;
  std::optional<ClassId> version_descendant_class;
  ClassId lineage = kNoClass;  // head class of the version chain
  // Access-frequency hints per structural relationship; normalized to sum 1.
  double freq_version = 0.0;
  double freq_configuration = 0.0;
  double freq_equivalence = 0.0;

  bool participates_in_versioning() const {
    return version_ancestor_class || version_descendant_class;
  }
};

enum class AttrImpl : std::uint8_t { Copy = 0, Reference = 1 };

struct AttributeSlot {
  std::uint32_t attr_index = 0;
  AttrImpl impl = AttrImpl::Copy;
  Oid ref_target = kNoOid;            // meaningful when impl == Reference
  std::uint32_t update_counter = 0;   // drives the update-threshold conversion
  bool conversion_due = false;        // set once update_counter exceeds threshold
};

struct ObjectInstance {
  Oid oid = kNoOid;
  ClassId class_id = kNoClass;
  std::uint32_t version_no = 0;
  std::uint64_t size = 0;  // bytes, or abstract units when size_override is set
  std::optional<std::uint64_t> size_override;
  std::vector<AttributeSlot> attributes;
  std::optional<Oid> composite_parent;
  std::vector<Oid> components;
  std::vector<Oid> equivalents;
  std::optional<Oid> version_ancestor;
  std::optional<Oid> version_descendant;
  std::uint64_t access_count = 0;
};

struct RelationshipEdge {
  RelationshipKind kind = RelationshipKind::Configuration;
  Oid a = kNoOid;  // lower endpoint
  Oid b = kNoOid;  // higher endpoint
  std::uint64_t crossing_count = 0;
  double lookup_cost = 0.0;  // run-time lookup cost of crossing the edge

  Oid other(Oid oid) const { return oid == a ? b : a; }
};

using EdgeIndex = std::size_t;

// The object graph: schema, instances, relationship edges, usage counters.
// Single writer; reciprocal links and edges are maintained internally.
class Database {
 public:
  Database() = default;
  explicit Database(std::vector<ClassDef> schema);

  const std::vector<ClassDef>& schema() const { return schema_; }
  const ClassDef& class_def(ClassId id) const;
  bool has_class(ClassId id) const;

  // Inserts a fully linked instance. Installs all reciprocal links into the
  // partner objects and the corresponding relationship edges. Throws
  // DuplicateOid / DanglingReference / InvalidLink.
  Oid add_object(ObjectInstance instance);

  Oid next_oid() const { return next_oid_; }
  std::size_t object_count() const { return objects_.size(); }
  bool contains(Oid oid) const;
  const ObjectInstance& object(Oid oid) const;
  ObjectInstance& object_mut(Oid oid);

  // Objects in insertion order (creation order).
  const std::vector<ObjectInstance>& objects() const { return objects_; }
  const std::vector<Oid>& instances_of(ClassId id) const;

  void record_access(Oid oid);
  void record_crossing(EdgeIndex edge);

  // Direct edge surface, used by generators and trace tooling.
  EdgeIndex add_edge(RelationshipKind kind, Oid a, Oid b, double lookup_cost);
  std::optional<EdgeIndex> find_edge(RelationshipKind kind, Oid a, Oid b) const;
  void set_edge_cost(EdgeIndex edge, double cost);
  const RelationshipEdge& edge(EdgeIndex e) const;
  const std::vector<RelationshipEdge>& edges() const { return edges_; }
  // Edge indices incident to an object, in creation order.
  const std::vector<EdgeIndex>& edges_of(Oid oid) const;

  std::uint64_t total_accesses() const { return total_accesses_; }
  std::uint64_t total_crossings() const { return total_crossings_; }

  // Line-oriented snapshot: `OID class version size` records followed by
  // `kind oid1 oid2 cost` edge records.
  void dump(std::ostream& out) const;
  static Database load(std::istream& in, std::vector<ClassDef> schema);

 private:
  std::size_t index_of(Oid oid) const;
  void link_reciprocal(ObjectInstance& added);

  std::vector<ClassDef> schema_;
  std::vector<ObjectInstance> objects_;
  std::unordered_map<Oid, std::size_t> by_oid_;
  std::unordered_map<ClassId, std::vector<Oid>> by_class_;
  std::vector<RelationshipEdge> edges_;
  std::unordered_map<Oid, std::vector<EdgeIndex>> adjacency_;
  Oid next_oid_ = 1;
  std::uint64_t total_accesses_ = 0;
  std::uint64_t total_crossings_ = 0;

  static const std::vector<Oid> kEmptyOids;
  static const std::vector<EdgeIndex> kEmptyEdges;
};

// Size of an instance: the abstract override when present, otherwise the sum
// of the class's attribute sizes times the memory word size.
std::uint64_t object_size(const ObjectInstance& instance, const ClassDef& cls,
                          std::uint32_t word_size_bytes);

}  // namespace clusim
