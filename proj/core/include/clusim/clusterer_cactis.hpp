#pragma once

#include <cstdint>
#include <vector>

#include "clusim/object_model.hpp"
#include "clusim/storage.hpp"

namespace clusim {

struct ClusteringOpCounts {
  std::uint64_t comparisons = 0;
  std::uint64_t bytes_moved = 0;
};

// One entry per seed/candidate decision, for invariant replay in tests.
struct CactisSelection {
  bool new_block = false;
  Oid oid = kNoOid;
  std::uint64_t key = 0;  // access count for seeds, crossing count otherwise
};

struct CactisResult {
  Placement placement;
  ClusteringOpCounts ops;
  std::vector<CactisSelection> selections;
};

namespace cactis {

// Statistics-driven greedy block packing. Blocks are seeded with the most
// referenced unassigned object; each block then repeatedly pulls in the
// unassigned outside object attached through the relationship with the
// highest crossing count, and closes as soon as the best such candidate does
// not fit (or none exists). Ties break toward the lowest OID.
CactisResult recluster(const Database& db, std::uint64_t block_capacity,
                       PageId first_page_id = 1);

struct ReclusterCost {
  std::uint64_t io_reads = 0;
  std::uint64_t io_writes = 0;
  double time_ms = 0.0;
};

struct MemoryCosts {
  double rmacc_ms = 0.0001;
  double rmtest_ms = 0.0007;
  std::uint32_t word_size_bytes = 4;
};

// Cost of swapping placements: every old page is read back through the
// buffer, every new page is written out, plus the greedy scan's memory
// operations. Counter updates are excluded by definition.
ReclusterCost recluster_cost(const Placement& placement_old,
                             const Placement& placement_new,
                             BufferPool& buffer, const ClusteringOpCounts& ops,
                             const MemoryCosts& mem);

}  // namespace cactis
}  // namespace clusim
