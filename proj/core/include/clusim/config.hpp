#pragma once

#include <map>
#include <string>

#include "clusim/sim_engine.hpp"

namespace clusim {

// Flat `KEY = value` configuration files; keys are the simulation parameter
// names (RCC, IMLVL, ..., PT1..PT15, SIMTIME) plus ALGORITHM, SEED,
// STARTDIST and CLIENTS. Blank lines and #-comments are skipped.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Builds simulation parameters from parsed keys. The transaction mix starts
// from the algorithm's defaults and individual PT keys override it; the
// final parameter set is validated.
SimParams params_from_config(const std::map<std::string, std::string>& kv);

SimParams load_config_file(const std::string& path);

// Applies one parameter by key to an existing parameter set (sweep surface).
// READPCT rescales the transaction mix to the given read percentage.
void apply_param(SimParams& params, const std::string& key,
                 const std::string& value);

bool is_known_param(const std::string& key);

}  // namespace clusim
