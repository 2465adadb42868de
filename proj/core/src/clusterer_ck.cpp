#include "clusim/clusterer_ck.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace clusim {

void CkParams::validate() const {
  if (ithreshold > 255) throw InvalidParams("ITHRESHOLD must lie in [0,255]");
  if (iscalef < 0.0 || iscalef > 1.0)
    throw InvalidParams("ISCALEF must lie in [0,1]");
}

namespace ck {

RelationshipKind choose_initial_relationship(const ClassDef& cls) {
  double best = cls.freq_configuration;
  RelationshipKind kind = RelationshipKind::Configuration;
  if (cls.freq_version > best) {
    best = cls.freq_version;
    kind = RelationshipKind::Version;
  }
  if (cls.freq_equivalence > best) {
    best = cls.freq_equivalence;
    kind = RelationshipKind::Equivalence;
  }
  return kind;
}

std::vector<AttrCostDecision> attribute_impl_costs(
    const ClassDef& cls, const ObjectInstance& ancestor, const CkParams& params,
    const Placement& placement, std::optional<PageId> candidate_page) {
  if (cls.attr_sizes.empty())
    throw NoCommonAttributes("class " + cls.name +
                             " has no attributes to inherit");
  std::optional<PageId> ancestor_page = placement.page_of(ancestor.oid);
  bool local = candidate_page && ancestor_page && *candidate_page == *ancestor_page;

  std::vector<AttrCostDecision> out;
  out.reserve(cls.attr_sizes.size());
  for (std::uint32_t i = 0; i < cls.attr_sizes.size(); ++i) {
    AttrCostDecision d;
    d.attr_index = i;
    d.copy_cost = params.iscalef * static_cast<double>(cls.attr_sizes[i]);
    d.ref_cost = local ? 0.0 : 1.0;
    d.choice = d.copy_cost <= d.ref_cost ? AttrImpl::Copy : AttrImpl::Reference;
    out.push_back(d);
  }
  return out;
}

bool on_attribute_update(AttributeSlot& slot, const CkParams& params) {
  if (slot.impl != AttrImpl::Reference)
    throw InvalidLink("update counter tracked on reference slots only");
  slot.update_counter += 1;
  if (slot.update_counter > params.ithreshold) slot.conversion_due = true;
  return slot.conversion_due;
}

SplitResult page_split(const std::vector<SplitNode>& nodes,
                       std::vector<SplitArc> arcs, std::uint64_t capacity) {
  SplitResult result;
  std::unordered_map<Oid, std::uint64_t> size_of;
  for (const SplitNode& n : nodes) {
    if (n.size > capacity)
      throw NodeTooLarge("node " + std::to_string(n.oid) +
                         " exceeds subset capacity");
    size_of.emplace(n.oid, n.size);
  }

  std::sort(arcs.begin(), arcs.end(), [](const SplitArc& x, const SplitArc& y) {
    if (x.cost != y.cost) return x.cost > y.cost;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  enum class Where : std::uint8_t { None, A, B };
  std::unordered_map<Oid, Where> where;
  for (const SplitNode& n : nodes) where.emplace(n.oid, Where::None);
  std::uint64_t used_a = 0, used_b = 0;

  auto placed = [&](Oid oid, Where w, std::uint64_t& used) {
    where[oid] = w;
    used += size_of.at(oid);
    (w == Where::A ? result.subset_a : result.subset_b).push_back(oid);
  };

  for (const SplitArc& arc : arcs) {
    result.ops += 1;
    Where wa = where.at(arc.a), wb = where.at(arc.b);
    std::uint64_t sa = size_of.at(arc.a), sb = size_of.at(arc.b);
    if (wa == Where::None && wb == Where::None) {
      if (used_a + sa + sb <= capacity) {
        placed(arc.a, Where::A, used_a);
        placed(arc.b, Where::A, used_a);
      } else if (used_b + sa + sb <= capacity) {
        placed(arc.a, Where::B, used_b);
        placed(arc.b, Where::B, used_b);
      } else {
        result.broken_arcs.push_back(arc);
        result.c_total += arc.cost;
      }
    } else if (wa == Where::None || wb == Where::None) {
      Oid loose = wa == Where::None ? arc.a : arc.b;
      Where target = wa == Where::None ? wb : wa;
      std::uint64_t& used = target == Where::A ? used_a : used_b;
      if (used + size_of.at(loose) <= capacity) {
        placed(loose, target, used);
      } else {
        result.broken_arcs.push_back(arc);
        result.c_total += arc.cost;
      }
    } else if (wa != wb) {
      result.broken_arcs.push_back(arc);
      result.c_total += arc.cost;
    }
  }

  // Leftovers (isolated nodes and endpoints displaced by broken arcs) take
  // whichever subset has room, lowest OID first.
  std::vector<Oid> leftovers;
  for (const SplitNode& n : nodes)
    if (where.at(n.oid) == Where::None) leftovers.push_back(n.oid);
  std::sort(leftovers.begin(), leftovers.end());
  for (Oid oid : leftovers) {
    result.ops += 1;
    std::uint64_t s = size_of.at(oid);
    if (used_a + s <= capacity)
      placed(oid, Where::A, used_a);
    else if (used_b + s <= capacity)
      placed(oid, Where::B, used_b);
    else
      result.unplaced.push_back(oid);
  }
  return result;
}

std::optional<Oid> Manager::dominant_target(const ObjectInstance& obj,
                                            RelationshipKind rel) const {
  switch (rel) {
    case RelationshipKind::Configuration:
      if (obj.composite_parent) return obj.composite_parent;
      if (!obj.components.empty()) return obj.components.front();
      return std::nullopt;
    case RelationshipKind::Version:
      if (obj.version_ancestor) return obj.version_ancestor;
      if (obj.version_descendant) return obj.version_descendant;
      return std::nullopt;
    case RelationshipKind::Equivalence:
      if (!obj.equivalents.empty()) return obj.equivalents.front();
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::vector<Manager::Candidate> Manager::rank_candidates(
    const ObjectInstance& obj) const {
  const ClassDef& cls = db_.class_def(obj.class_id);
  RelationshipKind rel = choose_initial_relationship(cls);
  double rel_freq = rel == RelationshipKind::Configuration ? cls.freq_configuration
                    : rel == RelationshipKind::Version     ? cls.freq_version
                                                           : cls.freq_equivalence;
  std::optional<Oid> target = dominant_target(obj, rel);
  std::optional<PageId> target_page =
      target ? placement_.page_of(*target) : std::nullopt;

  std::vector<Oid> reference_targets;
  double copy_storage = 0.0;
  for (const AttributeSlot& slot : obj.attributes) {
    if (slot.impl == AttrImpl::Reference) {
      reference_targets.push_back(slot.ref_target);
    } else if (obj.version_ancestor) {
      // Inherited-by-copy attributes pay the scaled storage cost everywhere.
      copy_storage +=
          params_.iscalef * static_cast<double>(cls.attr_sizes[slot.attr_index]);
    }
  }

  // Candidate pages are the pages holding structurally related objects; an
  // unrelated page is never a candidate, the fallback is a fresh page.
  std::vector<Oid> related;
  if (obj.composite_parent) related.push_back(*obj.composite_parent);
  related.insert(related.end(), obj.components.begin(), obj.components.end());
  related.insert(related.end(), obj.equivalents.begin(), obj.equivalents.end());
  if (obj.version_ancestor) related.push_back(*obj.version_ancestor);
  if (obj.version_descendant) related.push_back(*obj.version_descendant);
  related.insert(related.end(), reference_targets.begin(),
                 reference_targets.end());

  std::vector<PageId> pages;
  for (Oid r : related)
    if (auto p = placement_.page_of(r)) pages.push_back(*p);
  std::sort(pages.begin(), pages.end());
  pages.erase(std::unique(pages.begin(), pages.end()), pages.end());

  auto cost_of = [&](std::optional<PageId> page) {
    double cost = copy_storage;
    for (Oid r : reference_targets) {
      std::optional<PageId> rp = placement_.page_of(r);
      if (!(page && rp && *rp == *page)) cost += 1.0;
    }
    if (!(page && target_page && *target_page == *page)) cost += rel_freq;
    return cost;
  };

  std::vector<Candidate> out;
  out.reserve(pages.size() + 1);
  for (PageId p : pages) out.push_back(Candidate{p, cost_of(p)});
  out.push_back(Candidate{kNoPage, cost_of(std::nullopt)});

  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& x, const Candidate& y) {
                     if (x.cost != y.cost) return x.cost < y.cost;
                     if ((x.page == kNoPage) != (y.page == kNoPage))
                       return y.page == kNoPage;  // fresh page ranks last
                     return x.page < y.page;
                   });
  return out;
}

void Manager::append_log(const std::string& event, PageId page, double cost) {
  std::ostringstream line;
  line << event << ' ' << page << ' ' << cost;
  log_.push_back(line.str());
}

void Manager::process_conversions(IoHooks* io, ClusteringOpCounts* ops) {
  while (!conversions_.empty()) {
    auto [oid, attr_index] = conversions_.front();
    conversions_.pop_front();
    if (!db_.contains(oid)) continue;
    ObjectInstance& obj = db_.object_mut(oid);
    if (attr_index >= obj.attributes.size()) continue;
    AttributeSlot& slot = obj.attributes[attr_index];
    if (slot.impl != AttrImpl::Reference || !slot.conversion_due) continue;
    // Copying the value means one visit to the page holding the original.
    if (io && io->fetch && db_.contains(slot.ref_target))
      if (auto page = placement_.page_of(slot.ref_target)) io->fetch(*page);
    if (ops)
      ops->bytes_moved +=
          db_.class_def(obj.class_id).attr_sizes[slot.attr_index];
    slot.impl = AttrImpl::Copy;
    slot.ref_target = kNoOid;
    slot.conversion_due = false;
    slot.update_counter = 0;
  }
}

PageId Manager::place_object(Oid oid, IoHooks* io, ClusteringOpCounts* ops) {
  process_conversions(io, ops);

  const ObjectInstance& obj = db_.object(oid);
  if (obj.size > page_capacity_)
    throw ObjectTooLarge("object " + std::to_string(oid) +
                         " exceeds page capacity");
  if (placement_.page_of(oid))
    throw DuplicateOid("object " + std::to_string(oid) + " already placed");

  std::vector<Candidate> candidates = rank_candidates(obj);
  if (ops) ops->comparisons += candidates.size();

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Candidate& cand = candidates[i];
    if (cand.page == kNoPage) {
      PageId fresh = placement_.new_page(page_capacity_);
      placement_.insert(oid, obj.size, fresh);
      if (ops) ops->bytes_moved += obj.size;
      append_log("fresh", fresh, cand.cost);
      return fresh;
    }

    const Page& page = placement_.page(cand.page);
    if (io && io->fetch) io->fetch(cand.page);
    if (page.free() >= obj.size) {
      placement_.insert(oid, obj.size, cand.page);
      if (ops) ops->bytes_moved += obj.size;
      append_log("place", cand.page, cand.cost);
      return cand.page;
    }

    if (i == 0 && params_.isplit) {
      // The best candidate is full: split it if the broken-arc cost beats
      // placing on the next best candidate.
      std::vector<Resident> old_residents = page.residents;
      std::vector<SplitNode> nodes;
      nodes.reserve(old_residents.size() + 1);
      std::unordered_set<Oid> node_set;
      for (const Resident& r : old_residents) {
        nodes.push_back(SplitNode{r.oid, r.size});
        node_set.insert(r.oid);
      }
      nodes.push_back(SplitNode{oid, obj.size});
      node_set.insert(oid);

      std::vector<SplitArc> arcs;
      std::unordered_set<EdgeIndex> seen;
      for (Oid member : node_set)
        for (EdgeIndex e : db_.edges_of(member)) {
          const RelationshipEdge& edge = db_.edge(e);
          if (!node_set.count(edge.a) || !node_set.count(edge.b)) continue;
          if (!seen.insert(e).second) continue;
          arcs.push_back(SplitArc{edge.a, edge.b, edge.lookup_cost});
        }

      SplitResult split = page_split(nodes, arcs, page_capacity_);
      double next_cost = candidates[i + 1].cost;  // fresh option always follows
      if (ops) ops->comparisons += split.ops;
      if (split.viable() && split.c_total < next_cost) {
        // Subset A keeps the page, subset B moves to a fresh page; both are
        // rewritten on the spot.
        std::unordered_set<Oid> keep(split.subset_a.begin(),
                                     split.subset_a.end());
        PageId spill = placement_.new_page(page_capacity_);
        for (const Resident& r : old_residents)
          if (!keep.count(r.oid)) {
            placement_.remove(r.oid);
            placement_.insert(r.oid, r.size, spill);
            if (ops) ops->bytes_moved += r.size;
          }
        PageId own = keep.count(oid) ? cand.page : spill;
        placement_.insert(oid, obj.size, own);
        if (ops) ops->bytes_moved += obj.size;
        if (io && io->write_through) {
          io->write_through(cand.page);
          io->write_through(spill);
        }
        split_count_ += 1;
        append_log("split", cand.page, split.c_total);
        return own;
      }
      append_log("split-rejected", cand.page,
                 split.viable() ? split.c_total : -1.0);
    }
    append_log("skip-full", cand.page, cand.cost);
  }
  throw Error("unreachable: fresh page candidate always accepts");
}

InheritanceHook Manager::make_inheritance_hook() {
  return [this](const ObjectInstance& draft, const ObjectInstance& ancestor) {
    const ClassDef& cls = db_.class_def(draft.class_id);
    RelationshipKind rel = choose_initial_relationship(cls);
    std::optional<Oid> target = dominant_target(draft, rel);
    std::optional<PageId> candidate =
        target ? placement_.page_of(*target) : std::nullopt;
    std::vector<AttrCostDecision> decisions =
        attribute_impl_costs(cls, ancestor, params_, placement_, candidate);
    std::vector<AttributeSlot> slots;
    slots.reserve(decisions.size());
    for (const AttrCostDecision& d : decisions) {
      AttributeSlot slot;
      slot.attr_index = d.attr_index;
      slot.impl = d.choice;
      slot.ref_target = d.choice == AttrImpl::Reference ? ancestor.oid : kNoOid;
      slots.push_back(slot);
    }
    return slots;
  };
}

void Manager::queue_conversion(Oid oid, std::uint32_t attr_index) {
  conversions_.emplace_back(oid, attr_index);
}

}  // namespace ck
}  // namespace clusim
