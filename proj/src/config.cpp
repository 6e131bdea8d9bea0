#include "intht/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "intht/atee.hpp"

namespace intht {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::atee: return "atee";
    case Mode::exact: return "exact";
    case Mode::vr: return "vr";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "atee") return Mode::atee;
  if (s == "exact") return Mode::exact;
  if (s == "vr") return Mode::vr;
  throw ConfigError("unknown mode: " + s);
}

double RunConfig::delta_eff() const {
  if (delta > 0) return delta;
  return default_delta(TheoryBounds{}, k_eff(), 2 * k_eff());
}

void RunConfig::apply_theory_schedule() {
  if (alpha <= 0 || L <= 0)
    throw ConfigError("theory schedule requires positive alpha and L");
  const double r = L / alpha;
  k = static_cast<uint32_t>(std::ceil(K * r * r));
  eta = alpha / (2.0 * L * L);
}

void RunConfig::validate() const {
  if (p < 2) throw ConfigError("p must be at least 2");
  if (K == 0) throw ConfigError("K must be positive");
  if (k_eff() < K) throw ConfigError("sparsity budget k must be at least K");
  if (m == 0 || m > n_eff()) throw ConfigError("need 0 < m <= n");
  if (eta <= 0) throw ConfigError("eta must be positive");
  if (order != 2 && order != 3) throw ConfigError("order must be 2 or 3");
  if (b == 0 || d == 0) throw ConfigError("b and d must be positive");
  if (mode == Mode::vr && t_inner == 0) throw ConfigError("t_inner must be positive");
  if (scheme == CodeScheme::repetition && rep % 2 == 0)
    throw ConfigError("repetition factor must be odd");
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](char c) { return !std::isspace(static_cast<unsigned char>(c)); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    const auto trim = [&](std::string& s) {
      s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
      s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    };
    trim(key);
    trim(val);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, val);
  }
  return kv;
}

namespace {

uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const uint64_t r = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + v);
  }
}

double parse_f64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": " + v);
}

}  // namespace

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "p") cfg.p = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "K") cfg.K = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "k") cfg.k = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "m") cfg.m = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "n") cfg.n = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "T") cfg.T = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "t_inner") cfg.t_inner = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "eta") cfg.eta = parse_f64(key, value);
  else if (key == "b") cfg.b = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "d") cfg.d = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "delta") cfg.delta = parse_f64(key, value);
  else if (key == "order") cfg.order = static_cast<int>(parse_u64(key, value));
  else if (key == "mode") cfg.mode = parse_mode(value);
  else if (key == "regime") {
    try {
      cfg.regime = parse_regime(value);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "dataset") cfg.dataset = value;
  else if (key == "hash_reuse") cfg.hash_reuse = parse_bool(key, value);
  else if (key == "include_diagonal") cfg.include_diagonal = parse_bool(key, value);
  else if (key == "theory_schedule") cfg.theory_schedule = parse_bool(key, value);
  else if (key == "alpha") cfg.alpha = parse_f64(key, value);
  else if (key == "L") cfg.L = parse_f64(key, value);
  else if (key == "scheme") {
    if (value == "plain") cfg.scheme = CodeScheme::plain_binary;
    else if (value == "repetition") cfg.scheme = CodeScheme::repetition;
    else throw ConfigError("unknown scheme: " + value);
  } else if (key == "rep") cfg.rep = static_cast<uint32_t>(parse_u64(key, value));
  else if (key == "exit_tol") cfg.exit_tol = parse_f64(key, value);
  else if (key == "init_at_truth") cfg.init_at_truth = parse_bool(key, value);
  else throw ConfigError("unknown config key: " + key);
}

}  // namespace intht
