#include "clusim/clusterer_cactis.hpp"

#include <sstream>

#include "clusim/golden.hpp"
#include "clusim/rng.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace clusim;

namespace {

ClassDef one_class() {
  ClassDef c;
  c.class_id = 1;
  c.name = "item";
  c.freq_configuration = 1.0;
  return c;
}

ObjectInstance sized(Oid oid, std::uint64_t size) {
  ObjectInstance o;
  o.oid = oid;
  o.class_id = 1;
  o.size = size;
  o.size_override = size;
  return o;
}

std::vector<std::vector<Oid>> blocks_of(const Placement& placement) {
  std::vector<std::vector<Oid>> blocks;
  for (const Page& p : placement.pages()) {
    std::vector<Oid> b;
    for (const Resident& r : p.residents) b.push_back(r.oid);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

Database random_db(std::uint64_t seed, int objects, std::uint64_t max_size) {
  Rng rng(seed);
  Database db({one_class()});
  for (Oid oid = 1; oid <= static_cast<Oid>(objects); ++oid) {
    db.add_object(sized(oid, 1 + rng.uniform_index(max_size)));
    std::uint64_t accesses = rng.uniform_index(300);
    for (std::uint64_t i = 0; i < accesses; ++i) db.record_access(oid);
  }
  for (Oid a = 1; a <= static_cast<Oid>(objects); ++a)
    for (Oid b = a + 1; b <= static_cast<Oid>(objects); ++b)
      if (rng.bernoulli(0.35)) {
        EdgeIndex e = db.add_edge(RelationshipKind::Configuration, a, b, 0.0);
        std::uint64_t n = rng.uniform_index(200);
        for (std::uint64_t i = 0; i < n; ++i) db.record_crossing(e);
      }
  return db;
}

}  // namespace

TEST_CASE("six object example packs into the known blocks") {
  golden::TraceOutcome outcome = golden::replay_cactis();
  for (const std::string& line : outcome.lines) INFO(line);
  CHECK(outcome.pass);

  // The block dump is the placement interface.
  Database db = golden::usage_example_db();
  CactisResult result = cactis::recluster(db, 10);
  std::ostringstream dump;
  result.placement.dump_blocks(dump);
  CHECK(dump.str() == "1 5\n1 4\n2 2\n2 6\n2 3\n3 1\n");
}

TEST_CASE("single object forms a single block") {
  Database db({one_class()});
  db.add_object(sized(1, 4));
  CactisResult result = cactis::recluster(db, 10);
  CHECK(result.placement.page_count() == 1);
  CHECK(result.placement.page_of(1).has_value());
}

TEST_CASE("oversized objects are rejected") {
  Database db({one_class()});
  db.add_object(sized(1, 11));
  CHECK_THROWS_AS(cactis::recluster(db, 10), ObjectTooLarge);
}

TEST_CASE("unrelated objects become singleton blocks in access order") {
  Database db({one_class()});
  const std::uint64_t accesses[] = {50, 300, 120, 10, 200};
  for (Oid oid = 1; oid <= 5; ++oid) {
    db.add_object(sized(oid, 6));
    for (std::uint64_t i = 0; i < accesses[oid - 1]; ++i) db.record_access(oid);
  }
  CactisResult result = cactis::recluster(db, 6);
  auto blocks = blocks_of(result.placement);
  REQUIRE(blocks.size() == 5);
  // No relationships: every block is a seed, in descending access order.
  CHECK(blocks[0] == std::vector<Oid>{2});
  CHECK(blocks[1] == std::vector<Oid>{5});
  CHECK(blocks[2] == std::vector<Oid>{3});
  CHECK(blocks[3] == std::vector<Oid>{1});
  CHECK(blocks[4] == std::vector<Oid>{4});
}

TEST_CASE("partition property holds on random databases") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Database db = random_db(seed, 40, 8);
    const std::uint64_t capacity = 12;
    CactisResult result = cactis::recluster(db, capacity);

    std::set<Oid> seen;
    for (const Page& p : result.placement.pages()) {
      CHECK(p.used <= capacity);
      for (const Resident& r : p.residents) CHECK(seen.insert(r.oid).second);
    }
    CHECK(seen.size() == db.object_count());
  }
}

TEST_CASE("seed selections are monotone in access count") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Database db = random_db(seed + 100, 30, 5);
    CactisResult result = cactis::recluster(db, 9);
    // Replaying the selection log: each block seed has an access count no
    // larger than the previous seed's.
    std::uint64_t last = UINT64_MAX;
    for (const CactisSelection& sel : result.selections) {
      if (!sel.new_block) continue;
      CHECK(sel.key <= last);
      last = sel.key;
    }
  }
}

TEST_CASE("identical inputs give identical placements") {
  Database a = random_db(7, 25, 6);
  Database b = random_db(7, 25, 6);
  CactisResult ra = cactis::recluster(a, 10);
  CactisResult rb = cactis::recluster(b, 10);
  CHECK(blocks_of(ra.placement) == blocks_of(rb.placement));
}

TEST_CASE("small instances match the straightforward oracle") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    int n = 1 + static_cast<int>(seed % 8);
    Database db = random_db(seed * 13 + 1, n, 5);
    const std::uint64_t capacity = 8;
    CactisResult result = cactis::recluster(db, capacity);
    auto expected = oracle::cactis_blocks(db, capacity);
    CHECK(blocks_of(result.placement) == expected);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("recluster cost of an empty database is zero") {
  Placement old_p(1), new_p(100);
  BufferPool buffer(4, DiskModel{});
  cactis::ReclusterCost cost =
      cactis::recluster_cost(old_p, new_p, buffer, {}, {});
  CHECK(cost.io_reads == 0);
  CHECK(cost.io_writes == 0);
  CHECK(cost.time_ms == doctest::Approx(0.0));
}

TEST_CASE("one page database costs at least a read and a write") {
  Placement old_p(1);
  old_p.new_page(10);
  old_p.insert(1, 5, 1);
  Placement new_p(2);
  new_p.new_page(10);
  new_p.insert(1, 5, 2);
  BufferPool buffer(4, DiskModel{});
  cactis::ReclusterCost cost =
      cactis::recluster_cost(old_p, new_p, buffer, {}, {});
  CHECK(cost.io_reads >= 1);
  CHECK(cost.io_writes >= 1);
}

TEST_CASE("reorganization reads old pages and writes new pages") {
  Database db = golden::usage_example_db();
  // Old placement: everything in OID order, two per page.
  Placement old_p(1);
  for (Oid oid = 1; oid <= 6; ++oid) {
    if (oid % 2 == 1) old_p.new_page(20);
    old_p.insert(oid, db.object(oid).size, old_p.max_page_id());
  }
  CactisResult result = cactis::recluster(db, 10, old_p.max_page_id() + 1);
  BufferPool buffer(2, DiskModel{});
  cactis::ReclusterCost cost =
      cactis::recluster_cost(old_p, result.placement, buffer, result.ops, {});
  // Independent oracle: page counts of both placements.
  CHECK(cost.io_reads == old_p.page_count());
  CHECK(cost.io_writes == result.placement.page_count());
}
