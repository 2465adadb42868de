#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "clusim/errors.hpp"
#include "clusim/object_model.hpp"

namespace clusim {

using PageId = std::uint64_t;
using SegmentId = std::uint32_t;

constexpr PageId kNoPage = 0;
constexpr SegmentId kNoSegment = 0;

struct DiskModel {
  double rseek_ms = 28.0;
  double rlatency_ms = 8.33;
  double rtransfer_ms = 1.28;
};

double disk_access_time(const DiskModel& model);

struct Resident {
  Oid oid = kNoOid;
  std::uint64_t size = 0;
};

struct Page {
  PageId id = kNoPage;
  std::uint64_t capacity = 0;
  std::uint64_t used = 0;
  std::vector<Resident> residents;  // insertion order
  SegmentId segment = kNoSegment;
  std::uint32_t chain_index = 0;  // 0 = base page, k = k-th overflow page

  std::uint64_t free() const { return capacity - used; }
};

struct Segment {
  SegmentId id = kNoSegment;
  // Owner tag: a class id for per-class segments, or the root oid of a
  // composite hierarchy.
  bool class_owned = false;
  std::uint64_t owner = 0;
  std::uint32_t base_page_limit = 0;
  std::vector<PageId> pages;  // base pages first, then the overflow chain
};

// Mapping from objects to pages (and pages to segments). Capacity
// bookkeeping is enforced on insert.
class Placement {
 public:
  explicit Placement(PageId first_page_id = 1) : next_page_id_(first_page_id) {}

  PageId new_page(std::uint64_t capacity, SegmentId segment = kNoSegment);
  SegmentId new_segment(bool class_owned, std::uint64_t owner,
                        std::uint32_t base_page_limit);

  // Inserts an object; throws ObjectTooLarge if it does not fit.
  void insert(Oid oid, std::uint64_t size, PageId page);
  void remove(Oid oid);

  bool contains_page(PageId page) const;
  const Page& page(PageId id) const;
  std::optional<PageId> page_of(Oid oid) const;
  std::size_t page_count() const { return pages_.size(); }
  std::size_t object_count() const { return by_oid_.size(); }
  const std::vector<Page>& pages() const { return pages_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const Segment& segment(SegmentId id) const;
  PageId max_page_id() const { return next_page_id_ - 1; }

  // Pages that must be touched to reach the object: descriptor-chasing hops
  // through the segment chain first, the object's own page last. Objects in
  // base pages (or outside any segment) take a single hop.
  std::vector<PageId> access_path(Oid oid) const;

  // `block_id oid` lines in block creation order.
  void dump_blocks(std::ostream& out) const;
  // `segment_id page_id oid` lines.
  void dump_segments(std::ostream& out) const;

 private:
  Page& page_mut(PageId id);

  std::vector<Page> pages_;
  std::unordered_map<PageId, std::size_t> page_index_;
  std::unordered_map<Oid, PageId> by_oid_;
  std::vector<Segment> segments_;
  PageId next_page_id_;
};

// Extra page reads needed to reach the page through its segment's overflow
// chain (0 for base pages).
std::uint32_t overflow_access_penalty(const Placement& placement, PageId page);

struct FetchOutcome {
  bool hit = false;
  std::uint32_t io_reads = 0;
  std::uint32_t io_writes = 0;
  double time_ms = 0.0;
};

struct BufferStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t dirty_writes = 0;   // writes caused by dirty evictions
  std::uint64_t direct_writes = 0;  // explicit page writes (reorganizations)

  std::uint64_t total_reads() const { return misses; }
  std::uint64_t total_writes() const { return dirty_writes + direct_writes; }
};

// Fixed-size page buffer with FIFO replacement: the oldest resident page is
// dropped, and written back first if it was modified.
class BufferPool {
 public:
  BufferPool(std::uint32_t frame_count, DiskModel disk)
      : frame_count_(frame_count), disk_(disk) {}

  FetchOutcome fetch(PageId page, const Placement& placement);
  void mark_dirty(PageId page);
  bool resident(PageId page) const { return frames_.count(page) != 0; }

  // Writes a page straight to disk (one I/O); clears its dirty flag if it is
  // resident.
  FetchOutcome write_page(PageId page);

  // Drops every frame without writeback; used when a reorganization replaces
  // the placement and the old pages' contents are superseded.
  void invalidate_all();

  const BufferStats& stats() const { return stats_; }
  std::uint32_t frame_count() const { return frame_count_; }
  std::size_t resident_count() const { return frames_.size(); }

 private:
  std::uint32_t frame_count_;
  DiskModel disk_;
  std::deque<PageId> fifo_;
  std::unordered_map<PageId, bool> frames_;  // page -> dirty
  BufferStats stats_;
};

}  // namespace clusim
