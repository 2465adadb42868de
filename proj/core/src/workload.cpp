#include "clusim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace clusim {

const char* to_string(TransactionKind kind) {
  switch (kind) {
    case TransactionKind::NameLookup: return "name_lookup";
    case TransactionKind::RangeLookup: return "range_lookup";
    case TransactionKind::GroupLookupComponents: return "group_components";
    case TransactionKind::GroupLookupEquivalents: return "group_equivalents";
    case TransactionKind::GroupLookupVersions: return "group_versions";
    case TransactionKind::ReferenceLookupComposite: return "ref_composite";
    case TransactionKind::ReferenceLookupAncestors: return "ref_ancestors";
    case TransactionKind::SequentialScan: return "sequential_scan";
    case TransactionKind::ClosureTraversalVersion: return "closure_version";
    case TransactionKind::ClosureTraversalConfiguration:
      return "closure_configuration";
    case TransactionKind::ClosureTraversalEquivalence:
      return "closure_equivalence";
    case TransactionKind::ClosureTraversalRandom: return "closure_random";
    case TransactionKind::Editing: return "editing";
    case TransactionKind::ObjectCreation: return "object_creation";
    case TransactionKind::Reclustering: return "reclustering";
  }
  return "?";
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Cactis: return "cactis";
    case Algorithm::Orion: return "orion";
    case Algorithm::Ck: return "ck";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  if (s == "cactis") return Algorithm::Cactis;
  if (s == "orion") return Algorithm::Orion;
  if (s == "ck") return Algorithm::Ck;
  return std::nullopt;
}

double TransactionMix::sum() const {
  double total = 0.0;
  for (double p : pt) total += p;
  return total;
}

void TransactionMix::validate() const {
  for (std::size_t i = 0; i < pt.size(); ++i)
    if (pt[i] < 0.0 || pt[i] > 1.0)
      throw BadMix("PT" + std::to_string(i + 1) + " must lie in [0,1]");
  if (std::abs(sum() - 1.0) > 1e-9)
    throw BadMix("transaction probabilities sum to " + std::to_string(sum()) +
                 ", expected 1");
}

TransactionMix TransactionMix::defaults(Algorithm algorithm) {
  TransactionMix mix;
  for (std::size_t i = 0; i < 12; ++i) mix.pt[i] = 0.065;
  mix.pt[13] = 0.05;  // object creation
  switch (algorithm) {
    case Algorithm::Cactis:
      mix.pt[12] = 0.1695;
      mix.pt[14] = 0.0005;
      break;
    case Algorithm::Orion:
      mix.pt[12] = 0.169;
      mix.pt[14] = 0.001;
      break;
    case Algorithm::Ck:
      mix.pt[12] = 0.17;
      mix.pt[14] = 0.0;
      break;
  }
  return mix;
}

TransactionMix TransactionMix::with_read_fraction(double read_fraction) const {
  if (read_fraction < 0.0 || read_fraction > 1.0)
    throw BadMix("read fraction must lie in [0,1]");
  TransactionMix mix = *this;
  double regular = 1.0 - pt[14];
  double reads = read_fraction * regular;
  double writes = regular - reads;
  for (std::size_t i = 0; i < 12; ++i) mix.pt[i] = reads / 12.0;
  // Editing and creation keep their default proportion.
  constexpr double kEditShare = 0.1695 / (0.1695 + 0.05);
  mix.pt[12] = writes * kEditShare;
  mix.pt[13] = writes * (1.0 - kEditShare);
  return mix;
}

TransactionKind sample_transaction(const TransactionMix& mix, Rng& rng) {
  mix.validate();
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < mix.pt.size(); ++i) {
    acc += mix.pt[i];
    if (u < acc) return static_cast<TransactionKind>(i);
  }
  return TransactionKind::Reclustering;  // u landed in the rounding tail
}

Oid select_start_object(const Database& db, StartDistribution dist, Rng& rng) {
  const std::vector<ObjectInstance>& objects = db.objects();
  if (objects.empty()) throw EmptyDb("no objects to select from");
  std::size_t n = objects.size();
  std::size_t index;
  if (dist == StartDistribution::Uniform) {
    index = static_cast<std::size_t>(rng.uniform_index(n));
  } else {
    double x = static_cast<double>(n) / 2.0 +
               rng.normal() * static_cast<double>(n) / 6.0;
    double clipped = std::clamp(x, 1.0, static_cast<double>(n));
    index = static_cast<std::size_t>(std::llround(clipped)) - 1;
  }
  return objects[index].oid;
}

namespace {

void cross(const Database& db, Transaction& txn, RelationshipKind kind, Oid a,
           Oid b) {
  if (auto e = db.find_edge(kind, a, b)) txn.crossed_edges.push_back(*e);
}

Access one_attr(const Database& db, Oid oid, Rng& rng, bool write = false) {
  Access a;
  a.oid = oid;
  a.write = write;
  const ObjectInstance& obj = db.object(oid);
  if (obj.attributes.empty()) {
    a.attrs = AttrFetch::None;
  } else {
    a.attrs = AttrFetch::One;
    a.attr_index =
        static_cast<std::uint32_t>(rng.uniform_index(obj.attributes.size()));
  }
  return a;
}

void read_class_extent(const Database& db, Rng& rng, Transaction& txn,
                       AttrFetch attrs) {
  // Chooses among populated classes; every instance of the class is read.
  std::vector<ClassId> populated;
  for (ClassId c = 1; c <= db.schema().size(); ++c)
    if (!db.instances_of(c).empty()) populated.push_back(c);
  if (populated.empty()) throw EmptyDb("no instances to scan");
  ClassId cls = populated[rng.uniform_index(populated.size())];
  if (attrs == AttrFetch::One) {
    // One attribute of every instance: the same slot index class-wide.
    const ClassDef& def = db.class_def(cls);
    std::uint32_t attr =
        def.attr_count
            ? static_cast<std::uint32_t>(rng.uniform_index(def.attr_count))
            : 0;
    for (Oid oid : db.instances_of(cls)) {
      Access a;
      a.oid = oid;
      a.attrs = def.attr_count ? AttrFetch::One : AttrFetch::None;
      a.attr_index = attr;
      txn.accesses.push_back(a);
    }
  } else {
    for (Oid oid : db.instances_of(cls))
      txn.accesses.push_back({oid, false, attrs, 0});
  }
}

}  // namespace

Transaction resolve(TransactionKind kind, const Database& db, Rng& rng,
                    std::uint32_t imd, StartDistribution dist) {
  Transaction txn;
  txn.kind = kind;
  if (kind == TransactionKind::Reclustering ||
      kind == TransactionKind::ObjectCreation)
    return txn;  // performed by the engine

  if (db.object_count() == 0) throw EmptyDb("transaction needs a start object");
  if (kind == TransactionKind::RangeLookup) {
    read_class_extent(db, rng, txn, AttrFetch::All);
    return txn;
  }
  if (kind == TransactionKind::SequentialScan) {
    read_class_extent(db, rng, txn, AttrFetch::One);
    return txn;
  }
  Oid start = select_start_object(db, dist, rng);
  const ObjectInstance& s = db.object(start);

  switch (kind) {
    case TransactionKind::NameLookup:
      txn.accesses.push_back(one_attr(db, start, rng));
      break;
    case TransactionKind::GroupLookupComponents:
      txn.accesses.push_back({start, false, AttrFetch::None, 0});
      for (Oid c : s.components) {
        txn.accesses.push_back({c, false, AttrFetch::All, 0});
        cross(db, txn, RelationshipKind::Configuration, start, c);
      }
      break;
    case TransactionKind::GroupLookupEquivalents:
      txn.accesses.push_back({start, false, AttrFetch::None, 0});
      for (Oid e : s.equivalents) {
        txn.accesses.push_back({e, false, AttrFetch::All, 0});
        cross(db, txn, RelationshipKind::Equivalence, start, e);
      }
      break;
    case TransactionKind::GroupLookupVersions: {
      txn.accesses.push_back({start, false, AttrFetch::None, 0});
      Oid at = start;
      while (db.object(at).version_descendant) {
        Oid next = *db.object(at).version_descendant;
        txn.accesses.push_back({next, false, AttrFetch::All, 0});
        cross(db, txn, RelationshipKind::Version, at, next);
        at = next;
      }
      break;
    }
    case TransactionKind::ReferenceLookupComposite:
      txn.accesses.push_back({start, false, AttrFetch::None, 0});
      if (s.composite_parent) {
        txn.accesses.push_back({*s.composite_parent, false, AttrFetch::All, 0});
        cross(db, txn, RelationshipKind::Configuration, start,
              *s.composite_parent);
      }
      break;
    case TransactionKind::ReferenceLookupAncestors: {
      txn.accesses.push_back({start, false, AttrFetch::None, 0});
      Oid at = start;
      while (db.object(at).version_ancestor) {
        Oid next = *db.object(at).version_ancestor;
        txn.accesses.push_back({next, false, AttrFetch::All, 0});
        cross(db, txn, RelationshipKind::Version, at, next);
        at = next;
      }
      break;
    }
    case TransactionKind::ClosureTraversalVersion:
    case TransactionKind::ClosureTraversalConfiguration:
    case TransactionKind::ClosureTraversalEquivalence:
    case TransactionKind::ClosureTraversalRandom: {
      txn.accesses.push_back({start, false, AttrFetch::None, 0});
      std::uint32_t depth =
          static_cast<std::uint32_t>(rng.uniform_int(1, imd));
      Oid at = start;
      for (std::uint32_t hop = 0; hop < depth; ++hop) {
        RelationshipKind rel;
        if (kind == TransactionKind::ClosureTraversalVersion)
          rel = RelationshipKind::Version;
        else if (kind == TransactionKind::ClosureTraversalConfiguration)
          rel = RelationshipKind::Configuration;
        else if (kind == TransactionKind::ClosureTraversalEquivalence)
          rel = RelationshipKind::Equivalence;
        else
          rel = static_cast<RelationshipKind>(rng.uniform_index(3));
        const ObjectInstance& here = db.object(at);
        std::optional<Oid> next;
        if (rel == RelationshipKind::Version) {
          next = here.version_descendant;
        } else if (rel == RelationshipKind::Configuration) {
          if (!here.components.empty())
            next = here.components[rng.uniform_index(here.components.size())];
        } else if (!here.equivalents.empty()) {
          next = here.equivalents[rng.uniform_index(here.equivalents.size())];
        }
        if (!next) break;  // truncated: the hop has no successor
        txn.accesses.push_back({*next, false, AttrFetch::None, 0});
        cross(db, txn, rel, at, *next);
        at = *next;
      }
      // One attribute of the object the traversal lands on.
      Access& last = txn.accesses.back();
      if (!db.object(last.oid).attributes.empty()) {
        last.attrs = AttrFetch::One;
        last.attr_index = static_cast<std::uint32_t>(
            rng.uniform_index(db.object(last.oid).attributes.size()));
      }
      break;
    }
    case TransactionKind::Editing: {
      Access read = one_attr(db, start, rng);
      txn.accesses.push_back(read);
      Access write = read;
      write.write = true;
      txn.accesses.push_back(write);
      if (read.attrs == AttrFetch::One) txn.edited_attr = read.attr_index;
      break;
    }
    default:
      break;
  }
  return txn;
}

std::string Transaction::trace_line(std::uint64_t seq) const {
  std::ostringstream out;
  out << seq << ' ' << to_string(kind);
  for (const Access& a : accesses) out << ' ' << a.oid;
  return out.str();
}

}  // namespace clusim
