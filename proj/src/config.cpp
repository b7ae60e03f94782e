#include "cf/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cf/errors.hpp"

namespace cf {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' needs a number, got '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' needs an unsigned integer, got '" + value + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty entry in list '" + key + "'");
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' needs a comma list");
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(atom_number > 0.0)) throw ConfigError("config: model.atoms must be > 0");
  if (coupling < 0.0) throw ConfigError("config: model.coupling must be >= 0");
  if (temperature < 0.0) throw ConfigError("config: model.temperature must be >= 0");
  if (burn_in_sweeps < 0) throw ConfigError("config: sampler.burn_in must be >= 0");
  if (sweeps < 1) throw ConfigError("config: sampler.sweeps must be >= 1");
  if (thinning_sweeps < 1) throw ConfigError("config: sampler.thinning must be >= 1");
  if (n_chains < 1) throw ConfigError("config: sampler.chains must be >= 1");
  if (!(move.theta_scale > 0.0 && move.theta_scale <= M_PI_2))
    throw ConfigError("config: sampler.theta_scale must be in (0, pi/2]");
  if (!(move.target_acceptance > 0.0 && move.target_acceptance < 1.0))
    throw ConfigError("config: sampler.target_acceptance must be in (0, 1)");
  if (!(extent_factor >= 1.0)) throw ConfigError("config: grid.extent_factor must be >= 1");
  if (!(oversample >= 1.0)) throw ConfigError("config: grid.oversample must be >= 1");
  if (!(gpe_dtau > 0.0)) throw ConfigError("config: gpe.dtau must be > 0");
  if (!(gpe_tol > 0.0)) throw ConfigError("config: gpe.tol must be > 0");
  for (double t : sweep_temperatures) {
    if (!(t > 0.0)) throw ConfigError("config: sweep.temperatures must be > 0");
  }
  if (out_dir.empty()) throw ConfigError("config: output.directory must not be empty");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

    if (key == "model.atoms") cfg.atom_number = parse_double(key, value);
    else if (key == "model.coupling") cfg.coupling = parse_double(key, value);
    else if (key == "model.temperature") cfg.temperature = parse_double(key, value);
    else if (key == "sampler.burn_in") cfg.burn_in_sweeps = parse_long(key, value);
    else if (key == "sampler.sweeps") cfg.sweeps = parse_long(key, value);
    else if (key == "sampler.thinning") cfg.thinning_sweeps = parse_long(key, value);
    else if (key == "sampler.chains") cfg.n_chains = static_cast<int>(parse_long(key, value));
    else if (key == "sampler.base_seed") cfg.base_seed = parse_u64(key, value);
    else if (key == "sampler.theta_scale") cfg.move.theta_scale = parse_double(key, value);
    else if (key == "sampler.target_acceptance")
      cfg.move.target_acceptance = parse_double(key, value);
    else if (key == "grid.extent_factor") cfg.extent_factor = parse_double(key, value);
    else if (key == "grid.oversample") cfg.oversample = parse_double(key, value);
    else if (key == "gpe.dtau") cfg.gpe_dtau = parse_double(key, value);
    else if (key == "gpe.tol") cfg.gpe_tol = parse_double(key, value);
    else if (key == "sweep.temperatures") cfg.sweep_temperatures = parse_double_list(key, value);
    else if (key == "output.directory") cfg.out_dir = value;
    else
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cf
