#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "clusim/generator.hpp"
#include "doctest.h"

using namespace clusim;

namespace {

bool schema_is_acyclic(const std::vector<ClassDef>& classes) {
  // Links only point to earlier classes, so checking the order suffices as a
  // topological witness.
  for (const ClassDef& c : classes) {
    if (c.superclass && *c.superclass >= c.class_id) return false;
    if (c.component_of && *c.component_of >= c.class_id) return false;
  }
  return true;
}

std::string schema_fingerprint(const std::vector<ClassDef>& classes) {
  std::ostringstream out;
  for (const ClassDef& c : classes) {
    out << c.class_id << ':' << c.attr_count << ':' << c.lineage << ':';
    for (auto s : c.attr_sizes) out << s << ',';
    if (c.superclass) out << "s" << *c.superclass;
    if (c.component_of) out << "p" << *c.component_of;
    if (c.equivalent) out << "e" << *c.equivalent;
    out << ':' << c.freq_version << ':' << c.freq_configuration << ':'
        << c.freq_equivalence << ';';
  }
  return out.str();
}

}  // namespace

TEST_CASE("single class schema has no links") {
  SchemaParams params;
  params.ncl = 1;
  Rng rng(1);
  auto classes = generate_schema(params, rng);
  REQUIRE(classes.size() == 1);
  CHECK_FALSE(classes[0].superclass.has_value());
  CHECK(classes[0].components.empty());
  CHECK_FALSE(classes[0].equivalent.has_value());
}

TEST_CASE("invalid parameters are rejected") {
  SchemaParams params;
  params.ncl = 0;
  Rng rng(1);
  CHECK_THROWS_AS(generate_schema(params, rng), InvalidParams);
  params.ncl = 5;
  params.rpsuper = 1.5;
  CHECK_THROWS_AS(generate_schema(params, rng), InvalidParams);
}

TEST_CASE("same seed reproduces the same schema") {
  SchemaParams params;
  Rng a(42), b(42);
  CHECK(schema_fingerprint(generate_schema(params, a)) ==
        schema_fingerprint(generate_schema(params, b)));
}

TEST_CASE("link counts match their binomial expectation over many seeds") {
  // With ncl classes, ncl-1 of them draw each link kind. Expected totals
  // over 1000 seeds: 19000 draws at p=0.9 / 0.5 / 0.1. The bounds are
  // mean +- 4 standard deviations.
  SchemaParams params;
  std::uint64_t superclasses = 0, components = 0, equivalences = 0;
  const int seeds = 1000;
  for (int seed = 1; seed <= seeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    auto classes = generate_schema(params, rng);
    CHECK(schema_is_acyclic(classes));
    for (const ClassDef& c : classes) {
      if (c.superclass) superclasses += 1;
      if (c.component_of) components += 1;
      if (c.equivalent && *c.equivalent < c.class_id) equivalences += 1;
      double sum = c.freq_version + c.freq_configuration + c.freq_equivalence;
      CHECK(sum == doctest::Approx(1.0));
    }
  }
  auto within = [](std::uint64_t got, double n, double p) {
    double mean = n * p;
    double sd = std::sqrt(n * p * (1 - p));
    return std::abs(static_cast<double>(got) - mean) <= 4.0 * sd;
  };
  const double draws = static_cast<double>(seeds) * 19.0;
  CHECK(within(superclasses, draws, 0.9));
  CHECK(within(components, draws, 0.5));
  CHECK(within(equivalences, draws, 0.1));
}

TEST_CASE("create_instance on a fresh database yields an isolated object") {
  SchemaParams params;
  params.ncl = 1;
  params.rpcomp = 0.0;
  params.rpequi = 0.0;
  params.iavgver = 1;
  Rng rng(7);
  Database db(generate_schema(params, rng));
  Oid oid = create_instance(db, rng);
  const ObjectInstance& o = db.object(oid);
  CHECK_FALSE(o.composite_parent.has_value());
  CHECK(o.equivalents.empty());
  CHECK_FALSE(o.version_ancestor.has_value());
  CHECK(db.edges_of(oid).empty());
}

TEST_CASE("component instances adopt parents uniformly") {
  // Two classes; class 2 is a component of class 1. With three existing
  // parents, adoption counts over 10^4 draws pass a chi-square test at
  // three degrees of freedom (threshold ~ 4 sigma).
  std::vector<ClassDef> schema;
  ClassDef parent;
  parent.class_id = 1;
  parent.name = "P";
  parent.attr_count = 1;
  parent.attr_sizes = {1};
  parent.components = {2};
  ClassDef child = parent;
  child.class_id = 2;
  child.name = "K";
  child.components.clear();
  child.component_of = 1;
  schema = {parent, child};

  Rng rng(123);
  std::map<Oid, int> adopted;
  const int draws = 10000;
  int children = 0;
  for (int i = 0; i < draws; ++i) {
    // Fresh database with a fixed three-parent pool per draw.
    Database db(schema);
    for (int k = 0; k < 3; ++k) {
      ObjectInstance p;
      p.oid = db.next_oid();
      p.class_id = 1;
      p.size = 4;
      db.add_object(std::move(p));
    }
    Oid oid = create_instance(db, rng);
    const ObjectInstance& o = db.object(oid);
    if (o.class_id != 2) continue;
    REQUIRE(o.composite_parent.has_value());
    adopted[*o.composite_parent] += 1;
    ++children;
  }
  REQUIRE(children > 1000);
  double expected = static_cast<double>(children) / 3.0;
  double chi2 = 0;
  for (Oid p = 1; p <= 3; ++p) {
    double d = adopted[p] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 20.0);  // chi-square df=2, far beyond the 0.9999 quantile
}

TEST_CASE("ck-mode inheritance covers every attribute slot") {
  SchemaParams params;
  params.ncl = 6;
  params.iavgver = 4;  // long sibling-class chains
  params.rpcomp = 0;
  params.rpequi = 0;
  Rng rng(99);
  Database db(generate_schema(params, rng));

  CreateOptions opts;
  opts.ck_mode = true;
  opts.inheritance = [](const ObjectInstance& draft,
                        const ObjectInstance& ancestor) {
    // Alternate copy/reference; every slot must stay materialized.
    std::vector<AttributeSlot> slots;
    for (std::uint32_t i = 0; i < draft.attributes.size(); ++i) {
      AttributeSlot s;
      s.attr_index = i;
      s.impl = i % 2 ? AttrImpl::Reference : AttrImpl::Copy;
      s.ref_target = i % 2 ? ancestor.oid : kNoOid;
      slots.push_back(s);
    }
    return slots;
  };

  bool saw_inherited = false;
  for (int i = 0; i < 200; ++i) {
    Oid oid = create_instance(db, rng, opts);
    const ObjectInstance& o = db.object(oid);
    const ClassDef& cls = db.class_def(o.class_id);
    CHECK(o.attributes.size() == cls.attr_count);
    if (o.version_ancestor) {
      saw_inherited = true;
      for (const AttributeSlot& s : o.attributes) {
        bool is_copy = s.impl == AttrImpl::Copy;
        bool is_ref = s.impl == AttrImpl::Reference && s.ref_target != kNoOid;
        CHECK((is_copy || is_ref));
      }
    }
  }
  CHECK(saw_inherited);
}

TEST_CASE("empty initial database") {
  GeneratorParams params;
  Rng rng(5);
  Database db = generate_initial_db(params, 0, rng);
  CHECK(db.object_count() == 0);
}

TEST_CASE("initial database is dense, ordered and version-consistent") {
  GeneratorParams params;
  Rng rng(2024);
  Database db = generate_initial_db(params, 400, rng);
  CHECK(db.object_count() == 400);
  for (Oid oid = 1; oid <= 400; ++oid) CHECK(db.contains(oid));
  for (const ObjectInstance& o : db.objects()) {
    if (o.composite_parent) CHECK(*o.composite_parent < o.oid);
    if (o.version_ancestor) {
      CHECK(*o.version_ancestor < o.oid);
      CHECK(db.object(*o.version_ancestor).version_no < o.version_no);
      const ClassDef& cls = db.class_def(o.class_id);
      REQUIRE(cls.version_ancestor_class.has_value());
      CHECK(db.object(*o.version_ancestor).class_id ==
            *cls.version_ancestor_class);
      // Chain classes share one lineage.
      CHECK(db.class_def(db.object(*o.version_ancestor).class_id).lineage ==
            cls.lineage);
    }
  }
}

TEST_CASE("upper range initial database size") {
  GeneratorParams params;
  Rng rng(77);
  Database db = generate_initial_db(params, 1000, rng);
  CHECK(db.object_count() == 1000);
}

TEST_CASE("same seed gives byte-identical databases") {
  GeneratorParams params;
  Rng a(31), b(31);
  Database da = generate_initial_db(params, 150, a);
  Database dbb = generate_initial_db(params, 150, b);
  std::ostringstream sa, sb;
  da.dump(sa);
  dbb.dump(sb);
  CHECK(sa.str() == sb.str());
}
