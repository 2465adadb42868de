// Batch experiment driver: single runs, parameter sweeps over the three
// clustering algorithms, and the worked-example replays.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clusim/config.hpp"
#include "clusim/golden.hpp"
#include "clusim/sim_engine.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_run(const std::string& config_path) {
  clusim::SimParams params = clusim::load_config_file(config_path);
  clusim::MetricsReport report = clusim::run(params);
  std::cout << clusim::csv_header() << '\n'
            << clusim::csv_row(params, report) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& vary,
              const std::string& values_csv, const std::string& seeds_csv) {
  if (!clusim::is_known_param(vary))
    throw clusim::InvalidParams("unknown sweep parameter '" + vary + "'");
  std::vector<std::string> values = split_list(values_csv);
  std::vector<std::string> seeds = split_list(seeds_csv);
  if (values.empty() || seeds.empty())
    throw clusim::InvalidParams("sweep needs nonempty --values and --seeds");

  std::ifstream config_in(config_path);
  if (!config_in)
    throw clusim::InvalidParams("cannot read config file '" + config_path + "'");
  std::ostringstream text;
  text << config_in.rdbuf();
  std::map<std::string, std::string> kv =
      clusim::parse_config_text(text.str());

  std::cout << clusim::csv_header() << '\n';
  for (const char* algorithm : {"cactis", "orion", "ck"}) {
    for (const std::string& value : values) {
      for (const std::string& seed : seeds) {
        std::map<std::string, std::string> run_kv = kv;
        run_kv["ALGORITHM"] = algorithm;
        clusim::SimParams params = clusim::params_from_config(run_kv);
        clusim::apply_param(params, vary, value);
        clusim::apply_param(params, "SEED", seed);
        params.validate();
        clusim::MetricsReport report = clusim::run(params);
        std::cout << clusim::csv_row(params, report) << '\n';
      }
    }
  }
  return 0;
}

int cmd_golden(const std::string& name) {
  clusim::golden::TraceOutcome outcome;
  if (name == "cactis") {
    outcome = clusim::golden::replay_cactis();
  } else if (name == "ck_on") {
    outcome = clusim::golden::replay_ck(true);
  } else if (name == "ck_off") {
    outcome = clusim::golden::replay_ck(false);
  } else {
    std::cerr << "unknown golden trace '" << name
              << "' (expected cactis, ck_on or ck_off)\n";
    return 2;
  }
  for (const std::string& line : outcome.lines) std::cout << line << '\n';
  std::cout << (outcome.pass ? "PASS" : "FAIL") << '\n';
  return outcome.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object clustering algorithm comparison simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation from a config");
  run_cmd->add_option("-c,--config", config_path, "Config file")->required();

  std::string sweep_config, vary, values_csv, seeds_csv;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Run a parameter sweep across cactis, orion and ck");
  sweep_cmd->add_option("-c,--config", sweep_config, "Config file")->required();
  sweep_cmd->add_option("--vary", vary, "Parameter to vary")->required();
  sweep_cmd->add_option("--values", values_csv, "Comma-separated values")
      ->required();
  sweep_cmd->add_option("--seeds", seeds_csv, "Comma-separated seeds")
      ->required();

  std::string golden_name;
  auto* golden_cmd =
      app.add_subcommand("golden", "Replay a pinned worked example");
  golden_cmd->add_option("name", golden_name, "cactis, ck_on or ck_off")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_config, vary, values_csv, seeds_csv);
    if (golden_cmd->parsed()) return cmd_golden(golden_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
