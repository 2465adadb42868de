#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "clusim/object_model.hpp"
#include "clusim/rng.hpp"

namespace clusim {

struct SchemaParams {
  std::uint32_t ncl = 20;       // number of classes
  std::uint32_t iavgver = 3;    // average versions per class
  double rpsuper = 0.9;         // probability of having a superclass
  double rpcomp = 0.5;          // probability of being a component class
  double rpequi = 0.1;          // probability of having an equivalent class
  std::uint32_t iavgnattr = 20; // average attributes per class
  std::uint32_t iavgasize = 2;  // average attribute size in words

  void validate() const;
};

// Average parameters are realized as uniform integer draws on
// [1, 2*avg - 1], which preserves the mean.
std::uint32_t draw_around_average(Rng& rng, std::uint32_t avg);

// Class lattice generation: classes are produced in a fixed order and only
// link to earlier classes, so superclass/component graphs are acyclic by
// construction. Version chains are per-instance within a class; a class
// takes part in versioning when its drawn chain length exceeds one.
std::vector<ClassDef> generate_schema(const SchemaParams& params, Rng& rng);

// Hook invoked when a new version inherits attributes from its ancestor
// under the CK discipline: decides copy vs. reference per attribute. When
// absent, inherited attributes are plain copies.
using InheritanceHook = std::function<std::vector<AttributeSlot>(
    const ObjectInstance& draft, const ObjectInstance& ancestor)>;

struct CreateOptions {
  bool ck_mode = false;
  InheritanceHook inheritance;  // used only when ck_mode is set
  std::uint32_t word_size_bytes = 4;
};

// Creates one instance: picks the class uniformly, adopts it into a random
// parent instance when the class is a component, extends a version chain
// when the class versions, and links one equivalent instance when the class
// has an equivalent class. Relationship edges get uniform random lookup
// costs.
Oid create_instance(Database& db, Rng& rng, const CreateOptions& options = {});

struct GeneratorParams {
  SchemaParams schema;
  std::uint32_t word_size_bytes = 4;
};

// Builds the initial object base: generates the schema, then inobj instances
// with dense OIDs starting at 1. on_created (when given) is called after
// each instance lands so a clustering policy can place it immediately.
Database generate_initial_db(const GeneratorParams& params, std::uint32_t inobj,
                             Rng& rng, const CreateOptions& options = {},
                             const std::function<void(Oid)>& on_created = {});

}  // namespace clusim
