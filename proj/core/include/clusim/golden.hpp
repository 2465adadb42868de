#pragma once

#include <string>
#include <vector>

#include "clusim/object_model.hpp"

namespace clusim {
namespace golden {

// Six objects with usage statistics and pairwise relationships; block
// capacity 10. Used to pin the Cactis greedy packing.
Database usage_example_db();

// A small design database (two car versions, an equivalent roadster, bodies
// and a drivetrain as components) with fixed arc lookup costs; page capacity
// 5. Used to pin the CK placement walk under both split policies.
Database design_example_db();

struct TraceOutcome {
  bool pass = false;
  std::vector<std::string> lines;
};

// Replays the packing of the usage example and diffs the blocks against the
// expected partition {5,4} {2,6,3} {1}.
TraceOutcome replay_cactis();

// Replays the CK placement sequence over the design example and diffs every
// per-object page decision and the final page contents.
TraceOutcome replay_ck(bool split_on);

}  // namespace golden
}  // namespace clusim
