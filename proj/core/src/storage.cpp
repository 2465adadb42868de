#include "clusim/storage.hpp"

#include <algorithm>
#include <ostream>

namespace clusim {

double disk_access_time(const DiskModel& model) {
  return model.rseek_ms + model.rlatency_ms + model.rtransfer_ms;
}

PageId Placement::new_page(std::uint64_t capacity, SegmentId segment) {
  Page p;
  p.id = next_page_id_++;
  p.capacity = capacity;
  p.segment = segment;
  if (segment != kNoSegment) {
    Segment& seg = segments_.at(segment - 1);
    std::uint32_t position = static_cast<std::uint32_t>(seg.pages.size());
    p.chain_index = position < seg.base_page_limit
                        ? 0
                        : position - seg.base_page_limit + 1;
    seg.pages.push_back(p.id);
  }
  page_index_.emplace(p.id, pages_.size());
  pages_.push_back(std::move(p));
  return pages_.back().id;
}

SegmentId Placement::new_segment(bool class_owned, std::uint64_t owner,
                                 std::uint32_t base_page_limit) {
  Segment s;
  s.id = static_cast<SegmentId>(segments_.size() + 1);
  s.class_owned = class_owned;
  s.owner = owner;
  s.base_page_limit = base_page_limit;
  segments_.push_back(std::move(s));
  return segments_.back().id;
}

Page& Placement::page_mut(PageId id) {
  auto it = page_index_.find(id);
  if (it == page_index_.end())
    throw UnknownPage("unknown page " + std::to_string(id));
  return pages_[it->second];
}

bool Placement::contains_page(PageId page) const {
  return page_index_.count(page) != 0;
}

const Page& Placement::page(PageId id) const {
  auto it = page_index_.find(id);
  if (it == page_index_.end())
    throw UnknownPage("unknown page " + std::to_string(id));
  return pages_[it->second];
}

const Segment& Placement::segment(SegmentId id) const {
  if (id == kNoSegment || id > segments_.size())
    throw UnknownPage("unknown segment " + std::to_string(id));
  return segments_[id - 1];
}

void Placement::insert(Oid oid, std::uint64_t size, PageId page) {
  Page& p = page_mut(page);
  if (by_oid_.count(oid))
    throw DuplicateOid("oid " + std::to_string(oid) + " already placed");
  if (p.used + size > p.capacity)
    throw ObjectTooLarge("object " + std::to_string(oid) + " (size " +
                         std::to_string(size) + ") does not fit in page " +
                         std::to_string(page));
  p.residents.push_back(Resident{oid, size});
  p.used += size;
  by_oid_.emplace(oid, page);
}

void Placement::remove(Oid oid) {
  auto it = by_oid_.find(oid);
  if (it == by_oid_.end())
    throw UnknownOid("oid " + std::to_string(oid) + " not placed");
  Page& p = page_mut(it->second);
  auto r = std::find_if(p.residents.begin(), p.residents.end(),
                        [&](const Resident& res) { return res.oid == oid; });
  p.used -= r->size;
  p.residents.erase(r);
  by_oid_.erase(it);
}

std::optional<PageId> Placement::page_of(Oid oid) const {
  auto it = by_oid_.find(oid);
  if (it == by_oid_.end()) return std::nullopt;
  return it->second;
}

std::vector<PageId> Placement::access_path(Oid oid) const {
  auto target = page_of(oid);
  if (!target)
    throw UnknownOid("oid " + std::to_string(oid) + " not placed");
  const Page& p = page(*target);
  std::vector<PageId> path;
  if (p.segment != kNoSegment && p.chain_index > 0) {
    const Segment& seg = segment(p.segment);
    // Descriptor lives in the segment's first page; each further chain page
    // holds the pointer to the next one.
    path.push_back(seg.pages.front());
    std::uint32_t base = std::min<std::uint32_t>(
        seg.base_page_limit, static_cast<std::uint32_t>(seg.pages.size()));
    for (std::uint32_t k = 1; k < p.chain_index; ++k)
      path.push_back(seg.pages[base + k - 1]);
  }
  path.push_back(p.id);
  return path;
}

void Placement::dump_blocks(std::ostream& out) const {
  for (const Page& p : pages_)
    for (const Resident& r : p.residents) out << p.id << ' ' << r.oid << '\n';
}

void Placement::dump_segments(std::ostream& out) const {
  for (const Page& p : pages_)
    for (const Resident& r : p.residents)
      out << p.segment << ' ' << p.id << ' ' << r.oid << '\n';
}

std::uint32_t overflow_access_penalty(const Placement& placement, PageId page) {
  return placement.page(page).chain_index;
}

FetchOutcome BufferPool::fetch(PageId page, const Placement& placement) {
  if (!placement.contains_page(page))
    throw UnknownPage("fetch of page " + std::to_string(page) +
                      " absent from placement");
  FetchOutcome out;
  if (frames_.count(page)) {
    out.hit = true;
    stats_.hits += 1;
    return out;
  }
  stats_.misses += 1;
  out.io_reads = 1;
  out.time_ms = disk_access_time(disk_);
  if (frame_count_ == 0) return out;  // degenerate pool: nothing is retained
  if (frames_.size() >= frame_count_) {
    PageId victim = fifo_.front();
    fifo_.pop_front();
    auto vit = frames_.find(victim);
    stats_.evictions += 1;
    if (vit->second) {
      stats_.dirty_writes += 1;
      out.io_writes += 1;
      out.time_ms += disk_access_time(disk_);
    }
    frames_.erase(vit);
  }
  fifo_.push_back(page);
  frames_.emplace(page, false);
  return out;
}

void BufferPool::mark_dirty(PageId page) {
  auto it = frames_.find(page);
  if (it != frames_.end()) it->second = true;
}

FetchOutcome BufferPool::write_page(PageId page) {
  FetchOutcome out;
  out.io_writes = 1;
  out.time_ms = disk_access_time(disk_);
  stats_.direct_writes += 1;
  auto it = frames_.find(page);
  if (it != frames_.end()) it->second = false;
  return out;
}

void BufferPool::invalidate_all() {
  fifo_.clear();
  frames_.clear();
}

}  // namespace clusim
