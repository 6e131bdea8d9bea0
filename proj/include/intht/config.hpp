#pragma once

// Run configuration shared by the library entry points and the CLI.
// Precedence is defaults < config file < command-line flags; the CLI applies
// them in that order.  Errors in keys or values throw ConfigError, which the
// CLI maps to exit code 2.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "intht/codes.hpp"
#include "intht/synth.hpp"

namespace intht {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { atee, exact, vr };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct RunConfig {
  uint32_t p = 200;
  uint32_t K = 20;      // planted support size
  uint32_t k = 0;       // iterate sparsity budget; 0 -> 3 * K
  uint32_t m = 2000;    // batch size
  uint32_t n = 0;       // dataset size; 0 -> 20 * m
  uint32_t T = 150;     // iterations (outer rounds in vr mode)
  uint32_t t_inner = 20;
  double eta = 0.2;
  uint32_t b = 360;
  uint32_t d = 3;
  double delta = 0;     // 0 -> default_delta with unit bounds
  int order = 2;
  Mode mode = Mode::atee;
  Regime regime = Regime::uniform;
  uint64_t seed = 1;
  std::string out;      // per-iteration CSV path ("" = don't write)
  std::string dataset;  // load a saved dataset instead of generating
  bool hash_reuse = false;
  bool include_diagonal = false;
  bool theory_schedule = false;
  double alpha = 0;     // restricted strong convexity (theory schedule)
  double L = 0;         // restricted smoothness (theory schedule)
  CodeScheme scheme = CodeScheme::plain_binary;
  uint32_t rep = 3;
  double exit_tol = 0;  // stop once frob_error <= exit_tol * ||theta*||; 0 = off
  bool init_at_truth = false;  // start at the planted tensor (fixed-point probe)

  uint32_t k_eff() const { return k ? k : 3 * K; }
  uint32_t n_eff() const { return n ? n : 20 * m; }
  double delta_eff() const;

  // k = ceil(K * L^2 / alpha^2), eta = alpha / (2 L^2); requires alpha, L > 0.
  void apply_theory_schedule();
  void validate() const;  // cheap structural checks, throws ConfigError
};

// key=value lines, '#' comments, blank lines ignored.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);

// Applies one key (flag spelling without dashes, e.g. "eta", "hash_reuse").
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace intht
