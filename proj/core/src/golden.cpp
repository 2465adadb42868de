#include "clusim/golden.hpp"

#include <algorithm>
#include <sstream>

#include "clusim/clusterer_cactis.hpp"
#include "clusim/clusterer_ck.hpp"

namespace clusim {
namespace golden {
namespace {

ClassDef plain_class(ClassId id, const char* name, double fv, double fc,
                     double fe) {
  ClassDef c;
  c.class_id = id;
  c.name = name;
  c.freq_version = fv;
  c.freq_configuration = fc;
  c.freq_equivalence = fe;
  return c;
}

ObjectInstance sized_object(Oid oid, ClassId cls, std::uint32_t version,
                            std::uint64_t size) {
  ObjectInstance o;
  o.oid = oid;
  o.class_id = cls;
  o.version_no = version;
  o.size = size;
  o.size_override = size;
  return o;
}

void bump_crossings(Database& db, RelationshipKind kind, Oid a, Oid b,
                    std::uint64_t count) {
  EdgeIndex e = db.add_edge(kind, a, b, 0.0);
  for (std::uint64_t i = 0; i < count; ++i) db.record_crossing(e);
}

void set_cost(Database& db, RelationshipKind kind, Oid a, Oid b, double cost) {
  auto e = db.find_edge(kind, a, b);
  db.set_edge_cost(*e, cost);
}

}  // namespace

Database usage_example_db() {
  Database db({plain_class(1, "item", 1.0, 0.0, 0.0)});
  const std::uint64_t sizes[] = {7, 2, 5, 6, 4, 3};
  const std::uint64_t accesses[] = {90, 200, 80, 50, 300, 170};
  for (Oid oid = 1; oid <= 6; ++oid)
    db.add_object(sized_object(oid, 1, 0, sizes[oid - 1]));
  for (Oid oid = 1; oid <= 6; ++oid)
    for (std::uint64_t i = 0; i < accesses[oid - 1]; ++i) db.record_access(oid);
  bump_crossings(db, RelationshipKind::Configuration, 1, 3, 30);
  bump_crossings(db, RelationshipKind::Configuration, 1, 4, 80);
  bump_crossings(db, RelationshipKind::Configuration, 2, 3, 70);
  bump_crossings(db, RelationshipKind::Configuration, 2, 6, 200);
  bump_crossings(db, RelationshipKind::Configuration, 4, 5, 100);
  bump_crossings(db, RelationshipKind::Configuration, 5, 6, 50);
  return db;
}

Database design_example_db() {
  std::vector<ClassDef> schema = {
      plain_class(1, "car", 0.65, 0.30, 0.05),
      plain_class(2, "roadster", 0.20, 0.10, 0.70),
      plain_class(3, "body", 0.25, 0.75, 0.0),
      plain_class(4, "drivetrain", 0.30, 0.70, 0.0),
  };
  Database db(std::move(schema));

  // o1 car v1; o2 roadster equivalent to o1; o3 body component of o1;
  // o4 drivetrain component of o1; o5 car v2 descending from o1;
  // o6 body component of o5, descending from o3.
  db.add_object(sized_object(1, 1, 1, 2));
  {
    ObjectInstance o = sized_object(2, 2, 0, 2);
    o.equivalents = {1};
    db.add_object(std::move(o));
  }
  {
    ObjectInstance o = sized_object(3, 3, 2, 3);
    o.composite_parent = 1;
    db.add_object(std::move(o));
  }
  {
    ObjectInstance o = sized_object(4, 4, 3, 3);
    o.composite_parent = 1;
    db.add_object(std::move(o));
  }
  {
    ObjectInstance o = sized_object(5, 1, 2, 2);
    o.version_ancestor = 1;
    db.add_object(std::move(o));
  }
  {
    ObjectInstance o = sized_object(6, 3, 3, 3);
    o.composite_parent = 5;
    o.version_ancestor = 3;
    db.add_object(std::move(o));
  }

  set_cost(db, RelationshipKind::Equivalence, 1, 2, 0.5);
  set_cost(db, RelationshipKind::Configuration, 1, 3, 0.9);
  set_cost(db, RelationshipKind::Configuration, 1, 4, 0.6);
  set_cost(db, RelationshipKind::Version, 1, 5, 0.3);
  set_cost(db, RelationshipKind::Configuration, 5, 6, 0.8);
  set_cost(db, RelationshipKind::Version, 3, 6, 0.2);
  return db;
}

TraceOutcome replay_cactis() {
  TraceOutcome out;
  Database db = usage_example_db();
  CactisResult result = cactis::recluster(db, 10);

  const std::vector<std::vector<Oid>> expected = {{5, 4}, {2, 6, 3}, {1}};
  bool pass = result.placement.page_count() == expected.size();
  for (std::size_t i = 0; i < result.placement.pages().size(); ++i) {
    const Page& p = result.placement.pages()[i];
    std::ostringstream line;
    line << "block " << p.id << ":";
    std::vector<Oid> got;
    for (const Resident& r : p.residents) {
      got.push_back(r.oid);
      line << ' ' << r.oid;
    }
    if (i >= expected.size() || got != expected[i]) {
      pass = false;
      line << "  MISMATCH";
    }
    out.lines.push_back(line.str());
  }
  out.pass = pass;
  return out;
}

TraceOutcome replay_ck(bool split_on) {
  TraceOutcome out;
  Database db = design_example_db();
  Placement placement(1);
  CkParams params;
  params.isplit = split_on;
  ck::Manager manager(db, placement, params, 5);

  const std::vector<PageId> expected_pages =
      split_on ? std::vector<PageId>{1, 1, 1, 3, 4, 4}
               : std::vector<PageId>{1, 1, 2, 3, 4, 4};
  bool pass = true;
  for (Oid oid = 1; oid <= 6; ++oid) {
    PageId page = manager.place_object(oid);
    std::ostringstream line;
    line << "object " << oid << " -> page " << page;
    if (page != expected_pages[oid - 1]) {
      pass = false;
      line << "  MISMATCH (expected " << expected_pages[oid - 1] << ")";
    }
    out.lines.push_back(line.str());
  }

  const std::vector<std::vector<Oid>> expected_final =
      split_on
          ? std::vector<std::vector<Oid>>{{1, 3}, {2}, {4}, {5, 6}}
          : std::vector<std::vector<Oid>>{{1, 2}, {3}, {4}, {5, 6}};
  std::size_t idx = 0;
  for (const Page& p : placement.pages()) {
    std::ostringstream line;
    line << "page " << p.id << ":";
    std::vector<Oid> got;
    for (const Resident& r : p.residents) {
      got.push_back(r.oid);
      line << ' ' << r.oid;
    }
    std::vector<Oid> sorted = got;
    std::sort(sorted.begin(), sorted.end());
    if (idx >= expected_final.size() || sorted != expected_final[idx]) {
      pass = false;
      line << "  MISMATCH";
    }
    ++idx;
    out.lines.push_back(line.str());
  }
  if (idx != expected_final.size()) pass = false;
  out.pass = pass;
  return out;
}

}  // namespace golden
}  // namespace clusim
