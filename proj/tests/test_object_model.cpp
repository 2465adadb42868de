#include <sstream>

#include "clusim/object_model.hpp"
#include "clusim/rng.hpp"
#include "doctest.h"

using namespace clusim;

namespace {

ClassDef test_class(ClassId id, std::uint32_t attrs = 0) {
  ClassDef c;
  c.class_id = id;
  c.name = "C" + std::to_string(id);
  c.attr_count = attrs;
  for (std::uint32_t i = 0; i < attrs; ++i) c.attr_sizes.push_back(1);
  c.freq_configuration = 1.0;
  return c;
}

ObjectInstance unit_object(Oid oid, ClassId cls = 1, std::uint64_t size = 1) {
  ObjectInstance o;
  o.oid = oid;
  o.class_id = cls;
  o.size = size;
  o.size_override = size;
  return o;
}

}  // namespace

TEST_CASE("add_object stores an isolated node") {
  Database db({test_class(1)});
  Oid oid = db.add_object(unit_object(1));
  CHECK(oid == 1);
  CHECK(db.contains(1));
  CHECK(db.edges().empty());
  CHECK(db.object(1).access_count == 0);
}

TEST_CASE("add_object installs reciprocal composite links") {
  Database db({test_class(1)});
  db.add_object(unit_object(1));
  ObjectInstance o2 = unit_object(2);
  o2.composite_parent = 1;
  db.add_object(std::move(o2));

  const ObjectInstance& parent = db.object(1);
  REQUIRE(parent.components.size() == 1);
  CHECK(parent.components[0] == 2);
  CHECK(db.find_edge(RelationshipKind::Configuration, 1, 2).has_value());
}

TEST_CASE("add_object rejects dangling references") {
  Database db({test_class(1)});
  db.add_object(unit_object(1));
  ObjectInstance o3 = unit_object(3);
  o3.composite_parent = 99;
  CHECK_THROWS_AS(db.add_object(std::move(o3)), DanglingReference);
}

TEST_CASE("add_object rejects duplicate oids") {
  Database db({test_class(1)});
  db.add_object(unit_object(1));
  CHECK_THROWS_AS(db.add_object(unit_object(1)), DuplicateOid);
}

TEST_CASE("record_access tallies ninety accesses") {
  Database db({test_class(1)});
  db.add_object(unit_object(1, 1, 7));
  for (int i = 0; i < 90; ++i) db.record_access(1);
  CHECK(db.object(1).access_count == 90);
}

TEST_CASE("counters start at zero and are independent") {
  Database db({test_class(1)});
  db.add_object(unit_object(1));
  db.add_object(unit_object(2));
  EdgeIndex e = db.add_edge(RelationshipKind::Equivalence, 1, 2, 0.25);
  CHECK(db.object(1).access_count == 0);
  CHECK(db.edge(e).crossing_count == 0);

  // Interleave three accesses and two crossings; the tallies stay separate.
  db.record_access(1);
  db.record_crossing(e);
  db.record_access(2);
  db.record_crossing(e);
  db.record_access(1);
  CHECK(db.object(1).access_count + db.object(2).access_count == 3);
  CHECK(db.edge(e).crossing_count == 2);
}

TEST_CASE("record_access rejects unknown targets") {
  Database db({test_class(1)});
  CHECK_THROWS_AS(db.record_access(42), UnknownOid);
  CHECK_THROWS_AS(db.record_crossing(0), UnknownEdge);
}

TEST_CASE("object_size multiplies attribute words by the word size") {
  ClassDef c = test_class(1, 10);
  ObjectInstance o;
  o.oid = 1;
  o.class_id = 1;
  CHECK(object_size(o, c, 4) == 40);
}

TEST_CASE("object_size honors the abstract override") {
  ClassDef c = test_class(1, 10);
  ObjectInstance o;
  o.size_override = 7;
  CHECK(object_size(o, c, 4) == 7);
}

TEST_CASE("zero-attribute class without override is rejected") {
  ClassDef c = test_class(1, 0);
  ObjectInstance o;
  CHECK_THROWS(object_size(o, c, 4));
  Database db({test_class(1, 0)});
  ObjectInstance bad;
  bad.oid = 1;
  bad.class_id = 1;
  CHECK_THROWS(db.add_object(std::move(bad)));  // size > 0 invariant
}

TEST_CASE("version chains stay simple") {
  Database db({test_class(1)});
  db.add_object(unit_object(1));
  ObjectInstance v1 = unit_object(2);
  v1.version_ancestor = 1;
  v1.version_no = 1;
  db.add_object(std::move(v1));

  ObjectInstance v2 = unit_object(3);
  v2.version_ancestor = 1;  // 1 already has a descendant
  v2.version_no = 2;
  CHECK_THROWS_AS(db.add_object(std::move(v2)), InvalidLink);

  ObjectInstance stale = unit_object(4);
  stale.version_ancestor = 2;
  stale.version_no = 1;  // not strictly greater
  CHECK_THROWS_AS(db.add_object(std::move(stale)), InvalidLink);
}

TEST_CASE("reciprocal edges exist exactly once with shared counters") {
  Rng rng(11);
  Database db({test_class(1)});
  for (Oid oid = 1; oid <= 40; ++oid) {
    ObjectInstance o = unit_object(oid);
    if (oid > 1 && rng.bernoulli(0.5))
      o.composite_parent = static_cast<Oid>(rng.uniform_int(1, oid - 1));
    if (oid > 1 && rng.bernoulli(0.3))
      o.equivalents.push_back(static_cast<Oid>(rng.uniform_int(1, oid - 1)));
    db.add_object(std::move(o));
  }
  std::uint64_t crossings = 0;
  Rng crossing_rng(5);
  for (EdgeIndex e = 0; e < db.edges().size(); ++e) {
    std::uint64_t n = crossing_rng.uniform_index(4);
    for (std::uint64_t i = 0; i < n; ++i) db.record_crossing(e);
    crossings += n;
  }
  CHECK(db.total_crossings() == crossings);

  // Both endpoints see the same edge object, so edge(a,b) == edge(b,a).
  for (EdgeIndex e = 0; e < db.edges().size(); ++e) {
    const RelationshipEdge& edge = db.edge(e);
    auto from_a = db.find_edge(edge.kind, edge.a, edge.b);
    auto from_b = db.find_edge(edge.kind, edge.b, edge.a);
    REQUIRE(from_a.has_value());
    REQUIRE(from_b.has_value());
    CHECK(*from_a == e);
    CHECK(*from_b == e);
  }
}

TEST_CASE("access tally equals the event count") {
  Rng rng(3);
  Database db({test_class(1)});
  for (Oid oid = 1; oid <= 10; ++oid) db.add_object(unit_object(oid));
  std::uint64_t events = 0;
  for (int i = 0; i < 500; ++i) {
    db.record_access(static_cast<Oid>(rng.uniform_int(1, 10)));
    ++events;
  }
  std::uint64_t total = 0;
  for (const ObjectInstance& o : db.objects()) total += o.access_count;
  CHECK(total == events);
  CHECK(db.total_accesses() == events);
}

TEST_CASE("snapshot round-trips through the text format") {
  Database db({test_class(1), test_class(2)});
  db.add_object(unit_object(1, 1, 3));
  ObjectInstance o2 = unit_object(2, 2, 5);
  o2.version_no = 4;
  db.add_object(std::move(o2));
  db.add_edge(RelationshipKind::Equivalence, 1, 2, 0.75);

  std::ostringstream out;
  db.dump(out);
  std::istringstream in(out.str());
  Database copy = Database::load(in, {test_class(1), test_class(2)});

  CHECK(copy.object_count() == 2);
  CHECK(copy.object(2).version_no == 4);
  CHECK(copy.object(2).size == 5);
  auto e = copy.find_edge(RelationshipKind::Equivalence, 1, 2);
  REQUIRE(e.has_value());
  CHECK(copy.edge(*e).lookup_cost == doctest::Approx(0.75));

  std::ostringstream again;
  copy.dump(again);
  CHECK(again.str() == out.str());
}
