#include "clusim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace clusim {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidParams(key + " has non-numeric value '" + value + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  double v = to_double(key, value);
  if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v)))
    throw InvalidParams(key + " must be a nonnegative integer, got '" + value +
                        "'");
  return static_cast<std::uint64_t>(v);
}

bool to_switch(const std::string& key, const std::string& value) {
  std::string v = upper(value);
  if (v == "ON" || v == "TRUE" || v == "1") return true;
  if (v == "OFF" || v == "FALSE" || v == "0") return false;
  throw InvalidParams(key + " must be ON or OFF, got '" + value + "'");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {
        "RCC",      "IMLVL",    "IWDSIZE",  "ICPU",      "RMACC",
        "RMTEST",   "IPGSIZE",  "RSEEK",    "RLATENCY",  "RTRANSFER",
        "RAVGTHINK", "NCL",     "IAVGVER",  "RPSUPER",   "RPCOMP",
        "RPEQUI",   "INOBJ",    "IAVGASIZE", "IAVGNATTR", "IBUFF",
        "IMD",      "ISEGSIZE", "ITHRESHOLD", "ISCALEF",  "ISPLIT",
        "SIMTIME",  "ALGORITHM", "SEED",    "STARTDIST", "CLIENTS",
        "READPCT"};
    for (int i = 1; i <= 15; ++i) k.push_back("PT" + std::to_string(i));
    return k;
  }();
  return keys;
}

}  // namespace

bool is_known_param(const std::string& key) {
  const auto& keys = known_keys();
  return std::find(keys.begin(), keys.end(), upper(key)) != keys.end();
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw InvalidParams("line " + std::to_string(lineno) +
                          " is not KEY = value: '" + stripped + "'");
    std::string key = upper(trim(stripped.substr(0, eq)));
    std::string value = trim(stripped.substr(eq + 1));
    if (!is_known_param(key))
      throw InvalidParams("unknown parameter '" + key + "' on line " +
                          std::to_string(lineno));
    kv[key] = value;
  }
  return kv;
}

void apply_param(SimParams& p, const std::string& raw_key,
                 const std::string& value) {
  std::string key = upper(raw_key);
  if (key == "RCC") p.rcc_ms = to_double(key, value);
  else if (key == "IMLVL") p.imlvl = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "IWDSIZE") p.iwdsize = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "ICPU") p.icpu_mips = to_double(key, value);
  else if (key == "RMACC") p.rmacc_ms = to_double(key, value);
  else if (key == "RMTEST") p.rmtest_ms = to_double(key, value);
  else if (key == "IPGSIZE") p.ipgsize = to_u64(key, value);
  else if (key == "RSEEK") p.disk.rseek_ms = to_double(key, value);
  else if (key == "RLATENCY") p.disk.rlatency_ms = to_double(key, value);
  else if (key == "RTRANSFER") p.disk.rtransfer_ms = to_double(key, value);
  else if (key == "RAVGTHINK") p.ravgthink_s = to_double(key, value);
  else if (key == "NCL") p.schema.ncl = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "IAVGVER") p.schema.iavgver = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "RPSUPER") p.schema.rpsuper = to_double(key, value);
  else if (key == "RPCOMP") p.schema.rpcomp = to_double(key, value);
  else if (key == "RPEQUI") p.schema.rpequi = to_double(key, value);
  else if (key == "INOBJ") p.inobj = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "IAVGASIZE") p.schema.iavgasize = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "IAVGNATTR") p.schema.iavgnattr = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "IBUFF") p.ibuff = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "IMD") p.imd = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "ISEGSIZE") p.isegsize = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "ITHRESHOLD") p.ck.ithreshold = static_cast<std::uint32_t>(to_u64(key, value));
  else if (key == "ISCALEF") p.ck.iscalef = to_double(key, value);
  else if (key == "ISPLIT") p.ck.isplit = to_switch(key, value);
  else if (key == "SIMTIME") p.simtime_s = to_double(key, value);
  else if (key == "SEED") p.seed = to_u64(key, value);
  else if (key == "ALGORITHM") {
    auto a = algorithm_from_string(lower(value));
    if (!a) throw InvalidParams("ALGORITHM must be cactis, orion or ck");
    p.algorithm = *a;
  } else if (key == "STARTDIST") {
    std::string v = lower(value);
    if (v == "uniform") p.start_dist = StartDistribution::Uniform;
    else if (v == "normal") p.start_dist = StartDistribution::Normal;
    else throw InvalidParams("STARTDIST must be uniform or normal");
  } else if (key == "CLIENTS") {
    std::string v = lower(value);
    if (v == "single") p.multi_client = false;
    else if (v == "multi") p.multi_client = true;
    else throw InvalidParams("CLIENTS must be single or multi");
  } else if (key == "READPCT") {
    double pct = to_double(key, value);
    if (pct < 0 || pct > 100)
      throw InvalidParams("READPCT must lie in [0,100]");
    p.mix = p.mix.with_read_fraction(pct / 100.0);
  } else if (key.rfind("PT", 0) == 0) {
    int idx = std::stoi(key.substr(2));
    if (idx < 1 || idx > 15) throw InvalidParams("unknown parameter " + key);
    p.mix.pt[idx - 1] = to_double(key, value);
  } else {
    throw InvalidParams("unknown parameter '" + key + "'");
  }
}

SimParams params_from_config(const std::map<std::string, std::string>& kv) {
  SimParams p;
  // Algorithm first: the default transaction mix depends on it.
  if (auto it = kv.find("ALGORITHM"); it != kv.end())
    apply_param(p, "ALGORITHM", it->second);
  p.mix = TransactionMix::defaults(p.algorithm);
  for (const auto& [key, value] : kv) {
    if (key == "ALGORITHM") continue;
    apply_param(p, key, value);
  }
  try {
    p.validate();
  } catch (const BadMix& e) {
    throw BadMix(std::string(e.what()) + " (check keys PT1..PT15)");
  }
  return p;
}

SimParams load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return params_from_config(parse_config_text(text.str()));
}

}  // namespace clusim
