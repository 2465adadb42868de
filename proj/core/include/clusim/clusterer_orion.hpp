#pragma once

#include <cstdint>
#include <vector>

#include "clusim/clusterer_cactis.hpp"  // ClusteringOpCounts, MemoryCosts
#include "clusim/object_model.hpp"
#include "clusim/storage.hpp"

namespace clusim {
namespace orion {

struct OrionResult {
  Placement placement;
  ClusteringOpCounts ops;
};

// Composite hierarchy attached to an object: walk configuration links up to
// the root, then the root's full component tree in depth-first order.
std::vector<Oid> composite_hierarchy(const Database& db, Oid start);

// Segment clustering: objects are visited in OID order; each unprocessed
// composite hierarchy is packed depth-first into a fresh segment, and the
// remaining objects are grouped per class into per-class segments. Pages
// fill first-fit in traversal order; a full segment grows by chained
// overflow pages beyond its base page allotment.
OrionResult cluster_all(const Database& db, std::uint32_t seg_size_pages,
                        std::uint64_t page_capacity, PageId first_page_id = 1);

struct ClusterCost {
  std::uint64_t io_reads = 0;
  std::uint64_t io_writes = 0;
  double time_ms = 0.0;
};

// Reorganization cost: two full passes over the old pages (hierarchy
// discovery, then re-write) through the buffer, plus the new segment writes
// and the memory operations of the scan.
ClusterCost cluster_message_cost(const Placement& placement_old,
                                 const Placement& placement_new,
                                 BufferPool& buffer,
                                 const ClusteringOpCounts& ops,
                                 const cactis::MemoryCosts& mem);

// Appends one object to an existing ORION placement: components join their
// hierarchy root's segment, everything else joins (or opens) its class
// segment.
void insert_object(Placement& placement, const Database& db, Oid oid,
                   std::uint32_t seg_size_pages, std::uint64_t page_capacity);

}  // namespace orion
}  // namespace clusim
