#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clusim/object_model.hpp"
#include "clusim/rng.hpp"

namespace clusim {

// The 15 transaction kinds, in the probability-slot order PT1..PT15.
enum class TransactionKind : std::uint8_t {
  NameLookup = 0,
  RangeLookup,
  GroupLookupComponents,
  GroupLookupEquivalents,
  GroupLookupVersions,
  ReferenceLookupComposite,
  ReferenceLookupAncestors,
  SequentialScan,
  ClosureTraversalVersion,
  ClosureTraversalConfiguration,
  ClosureTraversalEquivalence,
  ClosureTraversalRandom,
  Editing,
  ObjectCreation,
  Reclustering,
};
constexpr std::size_t kTransactionKinds = 15;

const char* to_string(TransactionKind kind);

enum class Algorithm : std::uint8_t { Cactis = 0, Orion = 1, Ck = 2 };
const char* to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(const std::string& s);

struct TransactionMix {
  std::array<double, kTransactionKinds> pt{};

  double sum() const;
  void validate() const;  // throws BadMix unless the sum is 1 (±1e-9)

  // Table defaults: PT1-PT12 = 0.065 each, PT14 = 0.05, and the
  // editing/reclustering pair depending on the algorithm.
  static TransactionMix defaults(Algorithm algorithm);

  // Rescales the read/write balance: read kinds keep equal shares of
  // read_fraction * (1 - PT15), and editing/creation split the rest in their
  // default 0.1695:0.05 proportion.
  TransactionMix with_read_fraction(double read_fraction) const;
};

TransactionKind sample_transaction(const TransactionMix& mix, Rng& rng);

enum class StartDistribution : std::uint8_t { Uniform = 0, Normal = 1 };

// Uniform: every OID equally likely. Normal: index drawn from N(N/2, (N/6)^2)
// over the creation order, clipped to the valid range.
Oid select_start_object(const Database& db, StartDistribution dist, Rng& rng);

// How much attribute data an access pulls: traversal hops touch none,
// single-attribute fetches touch one (chosen at resolve time), group and
// range lookups fetch everything.
enum class AttrFetch : std::uint8_t { None = 0, One = 1, All = 2 };

struct Access {
  Oid oid = kNoOid;
  bool write = false;
  AttrFetch attrs = AttrFetch::None;
  std::uint32_t attr_index = 0;  // meaningful when attrs == One
};

struct Transaction {
  TransactionKind kind = TransactionKind::NameLookup;
  std::vector<Access> accesses;
  std::vector<EdgeIndex> crossed_edges;
  // For Editing: the attribute slot touched.
  std::optional<std::uint32_t> edited_attr;

  // `seq kind oid_list` trace line.
  std::string trace_line(std::uint64_t seq) const;
};

// Resolves a sampled kind into a concrete access sequence against the
// current database. ObjectCreation and Reclustering resolve to their marker
// transactions; the simulation engine performs the actual creation and
// reorganization work.
Transaction resolve(TransactionKind kind, const Database& db, Rng& rng,
                    std::uint32_t imd, StartDistribution dist);

}  // namespace clusim
