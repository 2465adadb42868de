#include "clusim/clusterer_orion.hpp"

#include <algorithm>
#include <unordered_set>

namespace clusim {
namespace orion {
namespace {

Oid hierarchy_root(const Database& db, Oid start) {
  Oid root = start;
  std::unordered_set<Oid> seen;  // guards against malformed cycles
  while (db.object(root).composite_parent && seen.insert(root).second)
    root = *db.object(root).composite_parent;
  return root;
}

void dfs_components(const Database& db, Oid at, std::vector<Oid>& out) {
  out.push_back(at);
  for (Oid c : db.object(at).components) dfs_components(db, c, out);
}

// First-fit over the segment's pages in chain order, growing the chain when
// nothing has room.
void pack_into_segment(Placement& placement, SegmentId seg, Oid oid,
                       std::uint64_t size, std::uint64_t page_capacity,
                       ClusteringOpCounts* ops) {
  for (PageId pid : placement.segment(seg).pages) {
    if (ops) ops->comparisons += 1;
    const Page& p = placement.page(pid);
    if (p.free() >= size) {
      placement.insert(oid, size, pid);
      return;
    }
  }
  PageId fresh = placement.new_page(page_capacity, seg);
  placement.insert(oid, size, fresh);
}

SegmentId find_or_create_class_segment(Placement& placement, ClassId cls,
                                       std::uint32_t seg_size_pages) {
  for (const Segment& s : placement.segments())
    if (s.class_owned && s.owner == cls) return s.id;
  return placement.new_segment(true, cls, seg_size_pages);
}

}  // namespace

std::vector<Oid> composite_hierarchy(const Database& db, Oid start) {
  std::vector<Oid> out;
  dfs_components(db, hierarchy_root(db, start), out);
  return out;
}

OrionResult cluster_all(const Database& db, std::uint32_t seg_size_pages,
                        std::uint64_t page_capacity, PageId first_page_id) {
  OrionResult result{Placement(first_page_id), {}};
  Placement& placement = result.placement;

  std::vector<Oid> oids;
  oids.reserve(db.object_count());
  for (const ObjectInstance& o : db.objects()) oids.push_back(o.oid);
  std::sort(oids.begin(), oids.end());

  std::unordered_set<Oid> placed;
  for (Oid oid : oids) {
    if (placed.count(oid)) continue;
    std::vector<Oid> hier = composite_hierarchy(db, oid);
    if (hier.size() < 2) continue;  // loose objects cluster by class below
    SegmentId seg = placement.new_segment(false, hier.front(), seg_size_pages);
    for (Oid member : hier) {
      pack_into_segment(placement, seg, member, db.object(member).size,
                        page_capacity, &result.ops);
      result.ops.bytes_moved += db.object(member).size;
      placed.insert(member);
    }
  }

  for (ClassId cls = 1; cls <= db.schema().size(); ++cls) {
    SegmentId seg = kNoSegment;
    for (Oid oid : db.instances_of(cls)) {
      if (placed.count(oid)) continue;
      if (seg == kNoSegment)
        seg = placement.new_segment(true, cls, seg_size_pages);
      pack_into_segment(placement, seg, oid, db.object(oid).size,
                        page_capacity, &result.ops);
      result.ops.bytes_moved += db.object(oid).size;
      placed.insert(oid);
    }
  }
  return result;
}

ClusterCost cluster_message_cost(const Placement& placement_old,
                                 const Placement& placement_new,
                                 BufferPool& buffer,
                                 const ClusteringOpCounts& ops,
                                 const cactis::MemoryCosts& mem) {
  ClusterCost cost;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Page& p : placement_old.pages()) {
      FetchOutcome f = buffer.fetch(p.id, placement_old);
      cost.io_reads += f.io_reads;
      cost.io_writes += f.io_writes;
      cost.time_ms += f.time_ms;
    }
  }
  for (const Page& p : placement_new.pages()) {
    FetchOutcome w = buffer.write_page(p.id);
    cost.io_writes += w.io_writes;
    cost.time_ms += w.time_ms;
  }
  std::uint64_t words =
      (ops.bytes_moved + mem.word_size_bytes - 1) / mem.word_size_bytes;
  // Two scan passes over the data.
  cost.time_ms += 2.0 * (static_cast<double>(ops.comparisons) * mem.rmtest_ms +
                         static_cast<double>(words) * mem.rmacc_ms);
  return cost;
}

void insert_object(Placement& placement, const Database& db, Oid oid,
                   std::uint32_t seg_size_pages, std::uint64_t page_capacity) {
  const ObjectInstance& obj = db.object(oid);
  SegmentId seg = kNoSegment;
  if (obj.composite_parent) {
    // Components join the segment of their hierarchy root when it has one.
    Oid root = hierarchy_root(db, oid);
    if (auto page = placement.page_of(root)) {
      SegmentId s = placement.page(*page).segment;
      if (s != kNoSegment) seg = s;
    }
  }
  if (seg == kNoSegment)
    seg = find_or_create_class_segment(placement, obj.class_id, seg_size_pages);
  pack_into_segment(placement, seg, oid, obj.size, page_capacity, nullptr);
}

}  // namespace orion
}  // namespace clusim
