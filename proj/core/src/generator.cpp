#include "clusim/generator.hpp"

#include <string>

namespace clusim {

void SchemaParams::validate() const {
  if (ncl < 1) throw InvalidParams("NCL must be at least 1");
  auto prob = [](double p, const char* name) {
    if (p < 0.0 || p > 1.0)
      throw InvalidParams(std::string(name) + " must lie in [0,1]");
  };
  prob(rpsuper, "RPSUPER");
  prob(rpcomp, "RPCOMP");
  prob(rpequi, "RPEQUI");
  if (iavgver < 1 || iavgnattr < 1 || iavgasize < 1)
    throw InvalidParams("IAVGVER, IAVGNATTR and IAVGASIZE must be >= 1");
}

std::uint32_t draw_around_average(Rng& rng, std::uint32_t avg) {
  return static_cast<std::uint32_t>(rng.uniform_int(1, 2 * avg - 1));
}

std::vector<ClassDef> generate_schema(const SchemaParams& params, Rng& rng) {
  params.validate();
  std::vector<ClassDef> classes(params.ncl);

  // Version lineages first: consecutive classes form chains whose drawn
  // length averages IAVGVER. Chain members share the head's attribute
  // layout and frequency hints, so common attributes are total.
  std::uint32_t i = 0;
  while (i < params.ncl) {
    std::uint32_t span = std::min(draw_around_average(rng, params.iavgver),
                                  params.ncl - i);
    for (std::uint32_t j = 0; j < span; ++j) {
      ClassDef& c = classes[i + j];
      c.class_id = i + j + 1;
      c.name = "C" + std::to_string(c.class_id);
      c.lineage = i + 1;
      if (j > 0) c.version_ancestor_class = c.class_id - 1;
      if (j + 1 < span) c.version_descendant_class = c.class_id + 1;
    }
    ClassDef& head = classes[i];
    head.attr_count = draw_around_average(rng, params.iavgnattr);
    head.attr_sizes.reserve(head.attr_count);
    for (std::uint32_t a = 0; a < head.attr_count; ++a)
      head.attr_sizes.push_back(draw_around_average(rng, params.iavgasize));
    double fv = rng.uniform(), fc = rng.uniform(), fe = rng.uniform();
    double sum = fv + fc + fe;
    if (sum <= 0.0) {
      head.freq_version = head.freq_configuration = head.freq_equivalence =
          1.0 / 3.0;
    } else {
      head.freq_version = fv / sum;
      head.freq_configuration = fc / sum;
      head.freq_equivalence = fe / sum;
    }
    for (std::uint32_t j = 1; j < span; ++j) {
      ClassDef& c = classes[i + j];
      c.attr_count = head.attr_count;
      c.attr_sizes = head.attr_sizes;
      c.freq_version = head.freq_version;
      c.freq_configuration = head.freq_configuration;
      c.freq_equivalence = head.freq_equivalence;
    }
    i += span;
  }

  // Structural links always point at earlier classes, which keeps the
  // superclass and component graphs acyclic by construction.
  for (std::uint32_t k = 1; k < params.ncl; ++k) {
    ClassDef& c = classes[k];
    if (rng.bernoulli(params.rpsuper))
      c.superclass = static_cast<ClassId>(rng.uniform_int(1, k));
    if (rng.bernoulli(params.rpcomp)) {
      ClassId parent = static_cast<ClassId>(rng.uniform_int(1, k));
      classes[parent - 1].components.push_back(c.class_id);
      c.component_of = parent;
    }
    if (rng.bernoulli(params.rpequi)) {
      ClassId eq = static_cast<ClassId>(rng.uniform_int(1, k));
      c.equivalent = eq;
      if (!classes[eq - 1].equivalent) classes[eq - 1].equivalent = c.class_id;
    }
  }
  return classes;
}

Oid create_instance(Database& db, Rng& rng, const CreateOptions& options) {
  if (db.schema().empty()) throw EmptySchema("schema has no classes");

  ClassId class_id = static_cast<ClassId>(
      rng.uniform_int(1, static_cast<std::int64_t>(db.schema().size())));
  const ClassDef& cls = db.class_def(class_id);

  ObjectInstance draft;
  draft.oid = db.next_oid();
  draft.class_id = class_id;

  if (cls.component_of) {
    const std::vector<Oid>& parents = db.instances_of(*cls.component_of);
    if (!parents.empty())
      draft.composite_parent = parents[rng.uniform_index(parents.size())];
  }

  const ObjectInstance* ancestor = nullptr;
  if (cls.version_ancestor_class) {
    // Ancestors come from the preceding chain class; only chain tails are
    // eligible because every object has at most one descendant version.
    std::vector<Oid> tails;
    for (Oid oid : db.instances_of(*cls.version_ancestor_class))
      if (!db.object(oid).version_descendant) tails.push_back(oid);
    if (!tails.empty()) {
      Oid anc = tails[rng.uniform_index(tails.size())];
      ancestor = &db.object(anc);
      draft.version_ancestor = anc;
      draft.version_no = ancestor->version_no + 1;
    }
  }

  if (cls.equivalent) {
    const std::vector<Oid>& eq = db.instances_of(*cls.equivalent);
    if (!eq.empty())
      draft.equivalents.push_back(eq[rng.uniform_index(eq.size())]);
  }

  draft.attributes.reserve(cls.attr_count);
  for (std::uint32_t a = 0; a < cls.attr_count; ++a)
    draft.attributes.push_back(AttributeSlot{a, AttrImpl::Copy, kNoOid, 0, false});
  if (ancestor && options.ck_mode && options.inheritance)
    draft.attributes = options.inheritance(draft, *ancestor);

  draft.size = object_size(draft, cls, options.word_size_bytes);

  Oid oid = db.add_object(std::move(draft));

  // Fresh structural edges get uniform random lookup costs; an inheritance
  // dependency arc is added when any attribute stayed a live reference.
  bool has_reference = false;
  for (const AttributeSlot& slot : db.object(oid).attributes)
    if (slot.impl == AttrImpl::Reference) has_reference = true;
  for (EdgeIndex e : db.edges_of(oid)) {
    if (db.edge(e).lookup_cost == 0.0) db.set_edge_cost(e, rng.uniform());
  }
  if (has_reference && db.object(oid).version_ancestor) {
    EdgeIndex e = db.add_edge(RelationshipKind::InheritanceDependency, oid,
                              *db.object(oid).version_ancestor, 0.0);
    if (db.edge(e).lookup_cost == 0.0) db.set_edge_cost(e, rng.uniform());
  }
  return oid;
}

Database generate_initial_db(const GeneratorParams& params, std::uint32_t inobj,
                             Rng& rng, const CreateOptions& options,
                             const std::function<void(Oid)>& on_created) {
  Database db(generate_schema(params.schema, rng));
  CreateOptions opts = options;
  opts.word_size_bytes = params.word_size_bytes;
  for (std::uint32_t i = 0; i < inobj; ++i) {
    Oid oid = create_instance(db, rng, opts);
    if (on_created) on_created(oid);
  }
  return db;
}

}  // namespace clusim
