#include "clusim/sim_engine.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "clusim/clusterer_cactis.hpp"
#include "clusim/clusterer_orion.hpp"

namespace clusim {

void SimParams::validate() const {
  if (rcc_ms < 0 || rmacc_ms < 0 || rmtest_ms < 0)
    throw InvalidParams("time charges must be nonnegative");
  if (disk.rseek_ms < 0 || disk.rlatency_ms < 0 || disk.rtransfer_ms < 0)
    throw InvalidParams("disk times must be nonnegative");
  if (iwdsize == 0) throw InvalidParams("IWDSIZE must be positive");
  if (ipgsize == 0) throw InvalidParams("IPGSIZE must be positive");
  if (ravgthink_s <= 0) throw InvalidParams("RAVGTHINK must be positive");
  if (simtime_s < 0) throw InvalidParams("SIMTIME must be nonnegative");
  if (imd < 1) throw InvalidParams("IMD must be at least 1");
  if (isegsize < 1) throw InvalidParams("ISEGSIZE must be at least 1");
  if (imlvl < 1) throw InvalidParams("IMLVL must be at least 1");
  schema.validate();
  ck.validate();
  mix.validate();
}

SimParams default_params(Algorithm algorithm) {
  SimParams p;
  p.algorithm = algorithm;
  p.mix = TransactionMix::defaults(algorithm);
  return p;
}

LogSummary summarize(const std::vector<TxnRecord>& log, double simtime_s) {
  LogSummary s;
  double total = 0.0;
  std::uint64_t samples = 0;
  for (const TxnRecord& r : log) {
    s.completed += 1;
    if (r.kind == TransactionKind::Reclustering) continue;
    total += r.end_ms - r.issue_ms;
    samples += 1;
  }
  if (samples > 0) s.mean_response_ms = total / static_cast<double>(samples);
  if (simtime_s > 0)
    s.throughput_tps = static_cast<double>(s.completed) / simtime_s;
  return s;
}

namespace {

// One simulation run's mutable state.
class Engine {
 public:
  Engine(const SimParams& params, RunTrace* trace)
      : params_(params),
        rng_(params.seed),
        buffer_(params.ibuff, params.disk),
        trace_(trace) {}

  MetricsReport execute();

 private:
  struct ChargeAccount {
    std::uint64_t io = 0;
    double time_ms = 0.0;
  };

  void build_initial_database();
  void heap_insert(Oid oid);
  void track_peak();
  std::uint64_t object_words(const ObjectInstance& obj) const;
  ChargeAccount access_object(const Access& access);
  ChargeAccount run_reclustering();
  ChargeAccount run_creation();
  double execute_transaction(TransactionKind kind, std::uint64_t* io_out);

  ck::IoHooks clustering_hooks();

  const SimParams& params_;
  Rng rng_;
  BufferPool buffer_;
  RunTrace* trace_;

  std::optional<Database> db_;
  Placement placement_{1};
  std::optional<ck::Manager> ck_manager_;
  CreateOptions create_options_;
  cactis::MemoryCosts mem_costs_;

  MetricsReport report_;
  ChargeAccount clustering_scratch_;
};

std::uint64_t Engine::object_words(const ObjectInstance& obj) const {
  return (obj.size + params_.iwdsize - 1) / params_.iwdsize;
}

// Unclustered insertion: first page with room, fresh page otherwise.
void Engine::heap_insert(Oid oid) {
  const ObjectInstance& obj = db_->object(oid);
  for (const Page& p : placement_.pages()) {
    if (p.free() >= obj.size) {
      placement_.insert(oid, obj.size, p.id);
      return;
    }
  }
  placement_.insert(oid, obj.size, placement_.new_page(params_.ipgsize));
}

void Engine::track_peak() {
  report_.max_pages = std::max<std::uint64_t>(report_.max_pages,
                                              placement_.page_count());
}

ck::IoHooks Engine::clustering_hooks() {
  ck::IoHooks hooks;
  hooks.fetch = [this](PageId page) {
    FetchOutcome f = buffer_.fetch(page, placement_);
    clustering_scratch_.io += f.io_reads + f.io_writes;
    clustering_scratch_.time_ms += f.time_ms;
  };
  hooks.write_through = [this](PageId page) {
    FetchOutcome w = buffer_.write_page(page);
    clustering_scratch_.io += w.io_writes;
    clustering_scratch_.time_ms += w.time_ms;
  };
  return hooks;
}

void Engine::build_initial_database() {
  mem_costs_ = {params_.rmacc_ms, params_.rmtest_ms, params_.iwdsize};
  create_options_.word_size_bytes = params_.iwdsize;

  db_.emplace(generate_schema(params_.schema, rng_));
  if (params_.algorithm == Algorithm::Ck) {
    ck_manager_.emplace(*db_, placement_, params_.ck, params_.ipgsize);
    create_options_.ck_mode = true;
    create_options_.inheritance = ck_manager_->make_inheritance_hook();
  }

  for (std::uint32_t i = 0; i < params_.inobj; ++i) {
    Oid oid = create_instance(*db_, rng_, create_options_);
    if (params_.algorithm == Algorithm::Ck) {
      // The initial load happens before simulated time starts, so placement
      // work is not charged.
      ck_manager_->place_object(oid, nullptr, nullptr);
    } else {
      // Unclustered initial placement: objects land in creation order.
      heap_insert(oid);
    }
  }
  track_peak();
}

Engine::ChargeAccount Engine::access_object(const Access& access) {
  ChargeAccount acc;
  const Oid oid = access.oid;
  auto own_page = placement_.page_of(oid);
  if (!own_page) throw UnknownOid("object " + std::to_string(oid) +
                                  " is not placed");
  std::vector<PageId> path;
  if (params_.algorithm == Algorithm::Orion &&
      placement_.page(*own_page).segment != kNoSegment) {
    // The segment is ORION's transfer unit: reaching any resident loads
    // every page the segment contains, chain pages included.
    path = placement_.segment(placement_.page(*own_page).segment).pages;
  } else {
    path = placement_.access_path(oid);
  }
  for (PageId page : path) {
    FetchOutcome f = buffer_.fetch(page, placement_);
    acc.io += f.io_reads + f.io_writes;
    acc.time_ms += f.time_ms;
  }
  const ObjectInstance& obj = db_->object(oid);
  acc.time_ms += params_.rcc_ms + params_.rmtest_ms +
                 params_.rmacc_ms * static_cast<double>(object_words(obj));
  if (access.write) buffer_.mark_dirty(*own_page);

  if (!access.write && access.attrs != AttrFetch::None) {
    // Attribute values held by reference live with the ancestor; fetching
    // them chases the reference to its page.
    PageId own = *own_page;
    auto chase = [&](const AttributeSlot& slot) {
      if (slot.impl != AttrImpl::Reference || slot.ref_target == kNoOid)
        return;
      auto remote = placement_.page_of(slot.ref_target);
      if (!remote) return;
      acc.time_ms += params_.rmacc_ms;
      if (auto e = db_->find_edge(RelationshipKind::InheritanceDependency, oid,
                                  slot.ref_target))
        db_->record_crossing(*e);
      if (*remote == own) return;
      FetchOutcome f = buffer_.fetch(*remote, placement_);
      acc.io += f.io_reads + f.io_writes;
      acc.time_ms += f.time_ms;
    };
    if (access.attrs == AttrFetch::All) {
      for (const AttributeSlot& slot : obj.attributes) chase(slot);
    } else if (access.attr_index < obj.attributes.size()) {
      chase(obj.attributes[access.attr_index]);
    }
  }
  db_->record_access(oid);
  return acc;
}

Engine::ChargeAccount Engine::run_reclustering() {
  ChargeAccount acc;
  report_.reclusterings += 1;
  if (params_.algorithm == Algorithm::Cactis) {
    CactisResult result =
        cactis::recluster(*db_, params_.ipgsize, placement_.max_page_id() + 1);
    cactis::ReclusterCost cost = cactis::recluster_cost(
        placement_, result.placement, buffer_, result.ops, mem_costs_);
    acc.io = cost.io_reads + cost.io_writes;
    acc.time_ms = cost.time_ms;
    placement_ = std::move(result.placement);
  } else if (params_.algorithm == Algorithm::Orion) {
    orion::OrionResult result =
        orion::cluster_all(*db_, params_.isegsize, params_.ipgsize,
                           placement_.max_page_id() + 1);
    orion::ClusterCost cost = orion::cluster_message_cost(
        placement_, result.placement, buffer_, result.ops, mem_costs_);
    acc.io = cost.io_reads + cost.io_writes;
    acc.time_ms = cost.time_ms;
    placement_ = std::move(result.placement);
  } else {
    return acc;  // CK never reorganizes wholesale
  }
  // Old page contents are superseded; drop them without writeback.
  buffer_.invalidate_all();
  report_.clustering_io += acc.io;
  report_.clustering_time_ms += acc.time_ms;
  track_peak();
  return acc;
}

Engine::ChargeAccount Engine::run_creation() {
  ChargeAccount acc;
  Oid oid = create_instance(*db_, rng_, create_options_);
  report_.created_objects += 1;
  const ObjectInstance& obj = db_->object(oid);

  // Linking reads on the related objects come first.
  std::vector<Oid> related;
  if (obj.composite_parent) related.push_back(*obj.composite_parent);
  if (obj.version_ancestor) related.push_back(*obj.version_ancestor);
  for (Oid e : obj.equivalents) related.push_back(e);
  for (Oid r : related) {
    ChargeAccount read = access_object(Access{r, false, AttrFetch::None, 0});
    acc.io += read.io;
    acc.time_ms += read.time_ms;
  }

  // Placement of the new object.
  if (params_.algorithm == Algorithm::Ck) {
    clustering_scratch_ = {};
    ck::IoHooks hooks = clustering_hooks();
    ClusteringOpCounts ops;
    ck_manager_->place_object(oid, &hooks, &ops);
    double mem_ms =
        static_cast<double>(ops.comparisons) * params_.rmtest_ms +
        static_cast<double>((ops.bytes_moved + params_.iwdsize - 1) /
                            params_.iwdsize) *
            params_.rmacc_ms;
    clustering_scratch_.time_ms += mem_ms;
    report_.clustering_io += clustering_scratch_.io;
    report_.clustering_time_ms += clustering_scratch_.time_ms;
    report_.ck_splits = ck_manager_->split_count();
    acc.io += clustering_scratch_.io;
    acc.time_ms += clustering_scratch_.time_ms;
  } else if (params_.algorithm == Algorithm::Orion) {
    orion::insert_object(placement_, *db_, oid, params_.isegsize,
                         params_.ipgsize);
  } else {
    heap_insert(oid);
  }
  track_peak();

  // Writing the new object dirties its page.
  ChargeAccount write = access_object(Access{oid, true, AttrFetch::None, 0});
  acc.io += write.io;
  acc.time_ms += write.time_ms;
  return acc;
}

double Engine::execute_transaction(TransactionKind kind,
                                   std::uint64_t* io_out) {
  ChargeAccount acc;
  if (kind == TransactionKind::Reclustering) {
    acc = run_reclustering();
    *io_out = 0;  // reorganization I/O is clustering overhead, not txn I/O
    return acc.time_ms;
  }
  if (kind == TransactionKind::ObjectCreation) {
    ChargeAccount creation = run_creation();
    // Clustering I/O inside the creation was already booked separately; the
    // remainder is transaction I/O.
    std::uint64_t clustering_part = clustering_scratch_.io;
    if (params_.algorithm != Algorithm::Ck) clustering_part = 0;
    report_.txn_io += creation.io - clustering_part;
    *io_out = creation.io - clustering_part;
    clustering_scratch_ = {};
    return creation.time_ms;
  }

  Transaction txn = resolve(kind, *db_, rng_, params_.imd, params_.start_dist);
  for (const Access& a : txn.accesses) {
    ChargeAccount charge = access_object(a);
    acc.io += charge.io;
    acc.time_ms += charge.time_ms;
  }
  for (EdgeIndex e : txn.crossed_edges) db_->record_crossing(e);

  if (kind == TransactionKind::Editing && txn.edited_attr &&
      !txn.accesses.empty()) {
    Oid target = txn.accesses.front().oid;
    ObjectInstance& obj = db_->object_mut(target);
    AttributeSlot& slot = obj.attributes[*txn.edited_attr];
    if (slot.impl == AttrImpl::Reference) {
      bool due = ck::on_attribute_update(slot, params_.ck);
      if (due && ck_manager_) ck_manager_->queue_conversion(target, slot.attr_index);
    }
  }
  report_.txn_io += acc.io;
  *io_out = acc.io;
  return acc.time_ms;
}

MetricsReport Engine::execute() {
  build_initial_database();
  double simtime_ms = params_.simtime_s * 1000.0;
  double server_free = 0.0;

  // ORION's segments are organized up front; the work blocks the server and
  // is charged as clustering overhead.
  if (params_.algorithm == Algorithm::Orion && simtime_ms > 0) {
    ChargeAccount initial = run_reclustering();
    if (trace_) trace_->reorgs.push_back({0.0, initial.time_ms});
    server_free = initial.time_ms;
  }

  std::uint32_t clients = params_.multi_client ? params_.imlvl : 1;
  using Issue = std::pair<double, std::uint32_t>;
  std::priority_queue<Issue, std::vector<Issue>, std::greater<Issue>> pending;
  for (std::uint32_t c = 0; c < clients; ++c)
    pending.emplace(rng_.exponential(params_.ravgthink_s * 1000.0), c);

  std::vector<TxnRecord> log;
  while (!pending.empty()) {
    auto [issue, client] = pending.top();
    pending.pop();
    if (issue >= simtime_ms) continue;  // this client stream is done

    double start = std::max(issue, server_free);
    TransactionKind kind = sample_transaction(params_.mix, rng_);
    std::uint64_t io = 0;
    double service = execute_transaction(kind, &io);
    double end = start + service;
    server_free = end;

    if (trace_ && kind == TransactionKind::Reclustering)
      trace_->reorgs.push_back({start, end});
    log.push_back(TxnRecord{kind, issue, start, end, io});
    pending.emplace(end + rng_.exponential(params_.ravgthink_s * 1000.0),
                    client);
  }

  LogSummary s = summarize(log, params_.simtime_s);
  report_.mean_response_ms = s.mean_response_ms;
  report_.completed = s.completed;
  report_.throughput_tps = s.throughput_tps;
  report_.buffer = buffer_.stats();
  if (trace_) trace_->txns = std::move(log);
  return report_;
}

}  // namespace

MetricsReport run(const SimParams& params, RunTrace* trace) {
  params.validate();
  Engine engine(params, trace);
  return engine.execute();
}

std::string csv_header() {
  return "algorithm,seed,start_dist,clients,rcc_ms,imlvl,iwdsize,icpu_mips,"
         "rmacc_ms,rmtest_ms,ipgsize,rseek_ms,rlatency_ms,rtransfer_ms,"
         "ravgthink_s,ncl,iavgver,rpsuper,rpcomp,rpequi,inobj,iavgasize,"
         "iavgnattr,ibuff,imd,isegsize,ithreshold,iscalef,isplit,"
         "pt1,pt2,pt3,pt4,pt5,pt6,pt7,pt8,pt9,pt10,pt11,pt12,pt13,pt14,pt15,"
         "simtime_s,mean_response_ms,txn_io,clustering_time_ms,clustering_io,"
         "max_pages,throughput_tps,completed,reclusterings,created_objects,"
         "ck_splits,buf_hits,buf_misses,buf_evictions,buf_dirty_writes";
}

namespace {
void append(std::ostringstream& out, double v) { out << ',' << v; }
void append(std::ostringstream& out, std::uint64_t v) { out << ',' << v; }
}  // namespace

std::string csv_row(const SimParams& p, const MetricsReport& r) {
  std::ostringstream out;
  out.precision(10);
  out << to_string(p.algorithm) << ',' << p.seed << ','
      << (p.start_dist == StartDistribution::Uniform ? "uniform" : "normal")
      << ',' << (p.multi_client ? p.imlvl : 1);
  append(out, p.rcc_ms);
  append(out, static_cast<std::uint64_t>(p.imlvl));
  append(out, static_cast<std::uint64_t>(p.iwdsize));
  append(out, p.icpu_mips);
  append(out, p.rmacc_ms);
  append(out, p.rmtest_ms);
  append(out, static_cast<std::uint64_t>(p.ipgsize));
  append(out, p.disk.rseek_ms);
  append(out, p.disk.rlatency_ms);
  append(out, p.disk.rtransfer_ms);
  append(out, p.ravgthink_s);
  append(out, static_cast<std::uint64_t>(p.schema.ncl));
  append(out, static_cast<std::uint64_t>(p.schema.iavgver));
  append(out, p.schema.rpsuper);
  append(out, p.schema.rpcomp);
  append(out, p.schema.rpequi);
  append(out, static_cast<std::uint64_t>(p.inobj));
  append(out, static_cast<std::uint64_t>(p.schema.iavgasize));
  append(out, static_cast<std::uint64_t>(p.schema.iavgnattr));
  append(out, static_cast<std::uint64_t>(p.ibuff));
  append(out, static_cast<std::uint64_t>(p.imd));
  append(out, static_cast<std::uint64_t>(p.isegsize));
  append(out, static_cast<std::uint64_t>(p.ck.ithreshold));
  append(out, p.ck.iscalef);
  out << ',' << (p.ck.isplit ? "on" : "off");
  for (double pt : p.mix.pt) append(out, pt);
  append(out, p.simtime_s);
  if (r.mean_response_ms)
    append(out, *r.mean_response_ms);
  else
    out << ',';
  append(out, r.txn_io);
  append(out, r.clustering_time_ms);
  append(out, r.clustering_io);
  append(out, r.max_pages);
  append(out, r.throughput_tps);
  append(out, r.completed);
  append(out, r.reclusterings);
  append(out, r.created_objects);
  append(out, r.ck_splits);
  append(out, r.buffer.hits);
  append(out, r.buffer.misses);
  append(out, r.buffer.evictions);
  append(out, r.buffer.dirty_writes);
  return out.str();
}

}  // namespace clusim
