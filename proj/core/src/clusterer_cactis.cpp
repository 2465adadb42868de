#include "clusim/clusterer_cactis.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

namespace clusim {
namespace cactis {
namespace {

struct SeedEntry {
  std::uint64_t access = 0;
  Oid oid = kNoOid;
  bool operator<(const SeedEntry& o) const {
    if (access != o.access) return access < o.access;  // max-heap on access
    return oid > o.oid;                                // then lowest oid first
  }
};

struct CandidateEntry {
  std::uint64_t crossings = 0;
  Oid outside = kNoOid;
  bool operator<(const CandidateEntry& o) const {
    if (crossings != o.crossings) return crossings < o.crossings;
    return outside > o.outside;
  }
};

}  // namespace

CactisResult recluster(const Database& db, std::uint64_t block_capacity,
                       PageId first_page_id) {
  CactisResult result{Placement(first_page_id), {}, {}};
  Placement& placement = result.placement;

  for (const ObjectInstance& o : db.objects())
    if (o.size > block_capacity)
      throw ObjectTooLarge("object " + std::to_string(o.oid) +
                           " exceeds block capacity");

  std::priority_queue<SeedEntry> seeds;
  for (const ObjectInstance& o : db.objects())
    seeds.push(SeedEntry{o.access_count, o.oid});

  std::unordered_set<Oid> assigned;
  assigned.reserve(db.object_count());

  while (!seeds.empty()) {
    SeedEntry seed = seeds.top();
    seeds.pop();
    result.ops.comparisons += 1;
    if (assigned.count(seed.oid)) continue;  // stale heap entry

    PageId block = placement.new_page(block_capacity);
    const ObjectInstance& seed_obj = db.object(seed.oid);
    placement.insert(seed.oid, seed_obj.size, block);
    assigned.insert(seed.oid);
    result.ops.bytes_moved += seed_obj.size;
    result.selections.push_back({true, seed.oid, seed.access});
    std::uint64_t used = seed_obj.size;

    std::priority_queue<CandidateEntry> candidates;
    auto push_edges = [&](Oid member) {
      for (EdgeIndex e : db.edges_of(member)) {
        const RelationshipEdge& edge = db.edge(e);
        Oid other = edge.other(member);
        if (!assigned.count(other))
          candidates.push(CandidateEntry{edge.crossing_count, other});
      }
    };
    push_edges(seed.oid);

    while (!candidates.empty()) {
      CandidateEntry best = candidates.top();
      candidates.pop();
      result.ops.comparisons += 1;
      if (assigned.count(best.outside)) continue;
      const ObjectInstance& obj = db.object(best.outside);
      // The block is full once no connected, fitting, unassigned object
      // remains; an oversized candidate is passed over, never revisited for
      // this block (remaining capacity only shrinks).
      if (used + obj.size > block_capacity) continue;
      placement.insert(best.outside, obj.size, block);
      assigned.insert(best.outside);
      used += obj.size;
      result.ops.bytes_moved += obj.size;
      result.selections.push_back({false, best.outside, best.crossings});
      push_edges(best.outside);
    }
  }
  return result;
}

ReclusterCost recluster_cost(const Placement& placement_old,
                             const Placement& placement_new,
                             BufferPool& buffer, const ClusteringOpCounts& ops,
                             const MemoryCosts& mem) {
  ReclusterCost cost;
  for (const Page& p : placement_old.pages()) {
    FetchOutcome f = buffer.fetch(p.id, placement_old);
    cost.io_reads += f.io_reads;
    cost.io_writes += f.io_writes;
    cost.time_ms += f.time_ms;
  }
  for (const Page& p : placement_new.pages()) {
    FetchOutcome w = buffer.write_page(p.id);
    cost.io_writes += w.io_writes;
    cost.time_ms += w.time_ms;
  }
  std::uint64_t words =
      (ops.bytes_moved + mem.word_size_bytes - 1) / mem.word_size_bytes;
  cost.time_ms += static_cast<double>(ops.comparisons) * mem.rmtest_ms +
                  static_cast<double>(words) * mem.rmacc_ms;
  return cost;
}

}  // namespace cactis
}  // namespace clusim
