#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clusim/clusterer_ck.hpp"
#include "clusim/generator.hpp"
#include "clusim/storage.hpp"
#include "clusim/workload.hpp"

namespace clusim {

struct SimParams {
  // Static cost parameters.
  double rcc_ms = 0.5;            // locking/unlocking charge per object access
  std::uint32_t imlvl = 10;       // multiprogramming level (multi-client mode)
  std::uint32_t iwdsize = 4;      // memory word size in bytes
  double icpu_mips = 2.0;         // folded into the memory-op charges
  double rmacc_ms = 0.0001;       // memory word access time
  double rmtest_ms = 0.0007;      // word comparison time
  std::uint64_t ipgsize = 2048;   // disk page size in bytes
  DiskModel disk;

  // Dynamic parameters.
  double ravgthink_s = 4.0;
  SchemaParams schema;
  std::uint32_t inobj = 400;
  std::uint32_t ibuff = 10;
  std::uint32_t imd = 5;
  std::uint32_t isegsize = 5;
  CkParams ck;
  TransactionMix mix = TransactionMix::defaults(Algorithm::Cactis);
  double simtime_s = 10800.0;

  Algorithm algorithm = Algorithm::Cactis;
  StartDistribution start_dist = StartDistribution::Uniform;
  bool multi_client = false;  // one stream by default, IMLVL streams otherwise
  std::uint64_t seed = 1;

  void validate() const;
};

SimParams default_params(Algorithm algorithm);

struct MetricsReport {
  std::optional<double> mean_response_ms;  // absent when nothing qualifies
  std::uint64_t txn_io = 0;
  double clustering_time_ms = 0.0;
  std::uint64_t clustering_io = 0;
  std::uint64_t max_pages = 0;
  double throughput_tps = 0.0;

  std::uint64_t completed = 0;
  std::uint64_t reclusterings = 0;
  std::uint64_t created_objects = 0;
  std::uint64_t ck_splits = 0;
  BufferStats buffer;
};

struct TxnRecord {
  TransactionKind kind = TransactionKind::NameLookup;
  double issue_ms = 0.0;
  double start_ms = 0.0;
  double end_ms = 0.0;
  std::uint64_t io = 0;
};

struct ReorgInterval {
  double start_ms = 0.0;
  double end_ms = 0.0;
};

struct RunTrace {
  std::vector<TxnRecord> txns;
  std::vector<ReorgInterval> reorgs;
};

// Aggregates the per-transaction log: mean response over everything except
// reclustering plus completed count and throughput.
struct LogSummary {
  std::optional<double> mean_response_ms;
  std::uint64_t completed = 0;
  double throughput_tps = 0.0;
};
LogSummary summarize(const std::vector<TxnRecord>& log, double simtime_s);

// Runs one full closed-loop simulation; deterministic in params (seed
// included). The optional trace receives the transaction log and the
// reorganization intervals.
MetricsReport run(const SimParams& params, RunTrace* trace = nullptr);

// CSV surface: every parameter once, then the metrics.
std::string csv_header();
std::string csv_row(const SimParams& params, const MetricsReport& report);

}  // namespace clusim
