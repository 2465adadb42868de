#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clusim/clusterer_cactis.hpp"  // ClusteringOpCounts
#include "clusim/generator.hpp"
#include "clusim/object_model.hpp"
#include "clusim/storage.hpp"

namespace clusim {

struct CkParams {
  std::uint32_t ithreshold = 25;  // update threshold, 0..255
  double iscalef = 0.5;           // storage scale factor, [0,1]
  bool isplit = true;             // page split policy

  void validate() const;
};

namespace ck {

// Dominant structural relationship of a class: argmax of the access
// frequency hints; ties prefer configuration, then version, then
// equivalence.
RelationshipKind choose_initial_relationship(const ClassDef& cls);

struct AttrCostDecision {
  std::uint32_t attr_index = 0;
  double copy_cost = 0.0;
  double ref_cost = 0.0;
  AttrImpl choice = AttrImpl::Copy;
};

// Copy-vs-reference costing for attributes inherited from an ancestor
// version. Reference pays one remote-page lookup unit when the ancestor sits
// on a different page than the candidate page; copy pays iscalef times the
// attribute size in storage and looks up locally. Ties go to copy.
std::vector<AttrCostDecision> attribute_impl_costs(
    const ClassDef& cls, const ObjectInstance& ancestor, const CkParams& params,
    const Placement& placement, std::optional<PageId> candidate_page);

// Increments the slot's update counter; once it exceeds the threshold the
// slot is flagged for conversion to a copy at the next placement evaluation.
// The slot must currently be a reference.
bool on_attribute_update(AttributeSlot& slot, const CkParams& params);

struct SplitNode {
  Oid oid = kNoOid;
  std::uint64_t size = 0;
};

struct SplitArc {
  Oid a = kNoOid;
  Oid b = kNoOid;
  double cost = 0.0;
};

struct SplitResult {
  std::vector<Oid> subset_a;
  std::vector<Oid> subset_b;
  std::vector<SplitArc> broken_arcs;
  double c_total = 0.0;
  std::vector<Oid> unplaced;  // nonempty means the split is not viable
  std::uint64_t ops = 0;      // step counter, for the linearity check

  bool viable() const { return unplaced.empty(); }
};

// Greedy two-way partition of a page's object graph: arcs are consumed in
// descending cost order; endpoints are co-located while capacity allows and
// every separation adds the arc's cost to c_total. Nodes left over (isolated
// or displaced by broken arcs) are appended to whichever subset has room.
SplitResult page_split(const std::vector<SplitNode>& nodes,
                       std::vector<SplitArc> arcs, std::uint64_t capacity);

// I/O hooks supplied by the simulation so placement work is charged to the
// clustering overhead accounts.
struct IoHooks {
  std::function<void(PageId)> fetch;
  std::function<void(PageId)> write_through;
};

// Runtime placement manager: initial candidate by dominant relationship,
// per-page total costs, candidate walk, page splitting, and the deferred
// reference-to-copy conversions.
class Manager {
 public:
  Manager(Database& db, Placement& placement, CkParams params,
          std::uint64_t page_capacity)
      : db_(db),
        placement_(placement),
        params_(params),
        page_capacity_(page_capacity) {}

  // Places a newly created, not-yet-placed object; returns its page.
  PageId place_object(Oid oid, IoHooks* io = nullptr,
                      ClusteringOpCounts* ops = nullptr);

  // Copy-vs-reference decision hook for generator::create_instance.
  InheritanceHook make_inheritance_hook();

  // Called after an update lands on a reference slot that crossed the
  // threshold; the conversion happens at the next placement evaluation.
  void queue_conversion(Oid oid, std::uint32_t attr_index);
  std::size_t pending_conversions() const { return conversions_.size(); }

  // `event page cost` lines for invariant replay.
  const std::vector<std::string>& log() const { return log_; }
  std::uint64_t split_count() const { return split_count_; }

 private:
  struct Candidate {
    PageId page = kNoPage;  // kNoPage marks the fresh-page option
    double cost = 0.0;
  };

  std::vector<Candidate> rank_candidates(const ObjectInstance& obj) const;
  std::optional<Oid> dominant_target(const ObjectInstance& obj,
                                     RelationshipKind rel) const;
  void process_conversions(IoHooks* io, ClusteringOpCounts* ops);
  void append_log(const std::string& event, PageId page, double cost);

  Database& db_;
  Placement& placement_;
  CkParams params_;
  std::uint64_t page_capacity_;
  std::deque<std::pair<Oid, std::uint32_t>> conversions_;
  std::vector<std::string> log_;
  std::uint64_t split_count_ = 0;
};

}  // namespace ck
}  // namespace clusim
