#include "dinglab/config.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "dinglab/errors.hpp"
#include "dinglab/expr.hpp"

namespace dinglab {

namespace {

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& value, int lo, int hi) {
  int v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
  if (v < lo || v > hi)
    throw ConfigError("config key '" + key + "': value " + value +
                      " out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

std::vector<int> parse_klist(const std::string& key, const std::string& value) {
  std::vector<int> ks;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string item =
        trimmed(value.substr(start, comma == std::string::npos ? comma : comma - start));
    ks.push_back(parse_int(key, item, 1, 64));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (ks[i] <= ks[i - 1])
      throw ConfigError("config key '" + key + "': k-list must be strictly increasing");
  return ks;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "k") {
    cfg.k = parse_int(key, value, 1, 64);
  } else if (key == "klist") {
    cfg.klist = parse_klist(key, value);
  } else if (key == "grid_nx") {
    cfg.grid_nx = parse_int(key, value, 2, 4096);
  } else if (key == "grid_nt") {
    cfg.grid_nt = parse_int(key, value, 4, 8192);
  } else if (key == "potential") {
    cfg.potential = value;
  } else if (key == "f") {
    cfg.f = value;
  } else if (key == "g") {
    cfg.g = value;
  } else if (key == "tol") {
    cfg.tol = parse_real(key, value);
    if (!(cfg.tol > 0.0))
      throw ConfigError("config key 'tol': must be positive");
  } else if (key == "max_iter") {
    cfg.max_iter = parse_int(key, value, 1, 1000000);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "seed") {
    try {
      cfg.seed = std::stoull(value);
    } catch (const std::exception&) {
      throw ConfigError("config key 'seed': not an unsigned integer: '" + value + "'");
    }
  } else if (key == "threads") {
    cfg.threads = parse_int(key, value, 0, 1024);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value, got '" + line + "'");
    apply_config_entry(cfg, trimmed(line.substr(0, eq)),
                       trimmed(line.substr(eq + 1)));
  }
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  const auto check_expr = [](const std::string& key, const std::string& text) {
    try {
      parse_expr(text);
    } catch (const ParseError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  };
  check_expr("potential", cfg.potential);
  check_expr("f", cfg.f);
  if (!cfg.g.empty()) check_expr("g", cfg.g);
  if (cfg.klist.empty()) throw ConfigError("config key 'klist': empty");
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"k", cfg.k},
          {"klist", cfg.klist},     {"grid_nx", cfg.grid_nx},
          {"grid_nt", cfg.grid_nt}, {"potential", cfg.potential},
          {"f", cfg.f},             {"g", cfg.g},
          {"tol", cfg.tol},         {"max_iter", cfg.max_iter},
          {"out", cfg.out},         {"seed", cfg.seed},
          {"threads", cfg.threads}};
}

void write_report(const nlohmann::json& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_report: cannot open " + path);
  f << report.dump(2) << "\n";
}

}  // namespace dinglab
