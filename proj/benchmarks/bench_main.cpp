#include <benchmark/benchmark.h>

#include "clusim/clusterer_cactis.hpp"
#include "clusim/clusterer_ck.hpp"
#include "clusim/clusterer_orion.hpp"
#include "clusim/generator.hpp"
#include "clusim/sim_engine.hpp"

namespace {

clusim::Database make_db(std::uint32_t objects, std::uint64_t seed = 9) {
  clusim::GeneratorParams params;
  clusim::Rng rng(seed);
  clusim::Database db = clusim::generate_initial_db(params, objects, rng);
  // Give the statistics-driven packer something to chew on.
  clusim::Rng traffic(seed + 1);
  for (int i = 0; i < 5000; ++i) {
    clusim::Oid oid =
        static_cast<clusim::Oid>(traffic.uniform_int(1, objects));
    db.record_access(oid);
  }
  for (clusim::EdgeIndex e = 0; e < db.edges().size(); ++e)
    if (traffic.bernoulli(0.5)) db.record_crossing(e);
  return db;
}

void BM_CactisRecluster(benchmark::State& state) {
  clusim::Database db = make_db(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    auto result = clusim::cactis::recluster(db, 2048);
    benchmark::DoNotOptimize(result.placement.page_count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CactisRecluster)->Arg(100)->Arg(400)->Arg(1000);

void BM_OrionClusterAll(benchmark::State& state) {
  clusim::Database db = make_db(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    auto result = clusim::orion::cluster_all(db, 5, 2048);
    benchmark::DoNotOptimize(result.placement.page_count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OrionClusterAll)->Arg(100)->Arg(400)->Arg(1000);

void BM_CkPlacement(benchmark::State& state) {
  const auto objects = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    clusim::GeneratorParams params;
    clusim::Rng rng(31);
    clusim::Database db(clusim::generate_schema(params.schema, rng));
    clusim::Placement placement(1);
    clusim::CkParams ck;
    clusim::ck::Manager manager(db, placement, ck, 2048);
    clusim::CreateOptions opts;
    opts.ck_mode = true;
    opts.inheritance = manager.make_inheritance_hook();
    state.ResumeTiming();
    for (std::uint32_t i = 0; i < objects; ++i) {
      clusim::Oid oid = clusim::create_instance(db, rng, opts);
      manager.place_object(oid);
    }
    benchmark::DoNotOptimize(placement.page_count());
  }
  state.SetItemsProcessed(state.iterations() * objects);
}
BENCHMARK(BM_CkPlacement)->Arg(100)->Arg(400);

void BM_PageSplit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  clusim::Rng rng(77);
  std::vector<clusim::ck::SplitNode> nodes;
  std::vector<clusim::ck::SplitArc> arcs;
  for (int i = 1; i <= n; ++i)
    nodes.push_back({static_cast<clusim::Oid>(i), 1 + rng.uniform_index(3)});
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (rng.bernoulli(0.3))
        arcs.push_back({static_cast<clusim::Oid>(a),
                        static_cast<clusim::Oid>(b), rng.uniform()});
  for (auto _ : state) {
    auto result = clusim::ck::page_split(nodes, arcs, 2 * n);
    benchmark::DoNotOptimize(result.c_total);
  }
}
BENCHMARK(BM_PageSplit)->Arg(8)->Arg(32)->Arg(128);

void BM_BufferFetch(benchmark::State& state) {
  clusim::Placement placement(1);
  for (int i = 0; i < 64; ++i) placement.new_page(2048);
  clusim::BufferPool buffer(10, clusim::DiskModel{});
  clusim::Rng rng(5);
  for (auto _ : state) {
    clusim::PageId page = static_cast<clusim::PageId>(rng.uniform_int(1, 64));
    benchmark::DoNotOptimize(buffer.fetch(page, placement));
  }
}
BENCHMARK(BM_BufferFetch);

void BM_FullRun(benchmark::State& state) {
  for (auto _ : state) {
    clusim::SimParams params = clusim::default_params(clusim::Algorithm::Ck);
    params.inobj = 200;
    params.simtime_s = 600;
    benchmark::DoNotOptimize(clusim::run(params));
  }
}
BENCHMARK(BM_FullRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
