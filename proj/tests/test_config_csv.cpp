#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "intht/config.hpp"
#include "intht/csv.hpp"

using namespace intht;

TEST_CASE("derived defaults") {
  RunConfig cfg;
  CHECK(cfg.k_eff() == 3 * cfg.K);
  CHECK(cfg.n_eff() == 20 * cfg.m);
  cfg.k = 7;
  cfg.n = 123;
  CHECK(cfg.k_eff() == 7);
  CHECK(cfg.n_eff() == 123);
  // unit-bound default threshold: 2 sqrt(k) / sqrt(2 * 2k) = 1
  cfg.delta = 0;
  CHECK(cfg.delta_eff() == doctest::Approx(1.0).epsilon(1e-15));
  cfg.delta = 3.5;
  CHECK(cfg.delta_eff() == 3.5);
}

TEST_CASE("key/value application covers every field") {
  RunConfig cfg;
  apply_kv(cfg, "p", "64");
  apply_kv(cfg, "K", "7");
  apply_kv(cfg, "k", "21");
  apply_kv(cfg, "m", "500");
  apply_kv(cfg, "n", "1000");
  apply_kv(cfg, "T", "33");
  apply_kv(cfg, "t_inner", "9");
  apply_kv(cfg, "eta", "0.125");
  apply_kv(cfg, "b", "48");
  apply_kv(cfg, "d", "5");
  apply_kv(cfg, "delta", "2.5");
  apply_kv(cfg, "order", "3");
  apply_kv(cfg, "mode", "vr");
  apply_kv(cfg, "regime", "bernoulli");
  apply_kv(cfg, "seed", "99");
  apply_kv(cfg, "hash_reuse", "1");
  apply_kv(cfg, "include_diagonal", "true");
  apply_kv(cfg, "scheme", "repetition");
  apply_kv(cfg, "rep", "5");
  apply_kv(cfg, "exit_tol", "1e-4");
  CHECK(cfg.p == 64);
  CHECK(cfg.K == 7);
  CHECK(cfg.k == 21);
  CHECK(cfg.m == 500);
  CHECK(cfg.n == 1000);
  CHECK(cfg.T == 33);
  CHECK(cfg.t_inner == 9);
  CHECK(cfg.eta == 0.125);
  CHECK(cfg.b == 48);
  CHECK(cfg.d == 5);
  CHECK(cfg.delta == 2.5);
  CHECK(cfg.order == 3);
  CHECK(cfg.mode == Mode::vr);
  CHECK(cfg.regime == Regime::bernoulli);
  CHECK(cfg.seed == 99);
  CHECK(cfg.hash_reuse);
  CHECK(cfg.include_diagonal);
  CHECK(cfg.scheme == CodeScheme::repetition);
  CHECK(cfg.rep == 5);
  CHECK(cfg.exit_tol == 1e-4);

  CHECK_THROWS_AS(apply_kv(cfg, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_kv(cfg, "p", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_kv(cfg, "eta", ""), ConfigError);
  CHECK_THROWS_AS(apply_kv(cfg, "mode", "fancy"), ConfigError);
  CHECK_THROWS_AS(apply_kv(cfg, "regime", "gamma"), ConfigError);
}

TEST_CASE("config files parse with comments and blank lines") {
  const std::string path = "/tmp/intht_test_cfg.txt";
  {
    std::ofstream out(path);
    out << "# a comment line\n";
    out << "\n";
    out << "p = 32   # trailing comment\n";
    out << "eta=0.05\n";
    out << "  mode =  exact \n";
  }
  auto kv = parse_config_file(path);
  REQUIRE(kv.size() == 3);
  RunConfig cfg;
  for (const auto& [k, v] : kv) apply_kv(cfg, k, v);
  CHECK(cfg.p == 32);
  CHECK(cfg.eta == 0.05);
  CHECK(cfg.mode == Mode::exact);
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_config_file("/tmp/intht_no_such_cfg.txt"), ConfigError);
  {
    std::ofstream out(path);
    out << "just words\n";
  }
  CHECK_THROWS_AS(parse_config_file(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("validation rejects inconsistent configurations") {
  RunConfig ok;
  ok.validate();  // defaults are fine

  RunConfig c = ok;
  c.p = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.K = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.k = 5;
  c.K = 9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.m = 100;
  c.n = 50;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.eta = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.order = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.b = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.mode = Mode::vr;
  c.t_inner = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ok;
  c.scheme = CodeScheme::repetition;
  c.rep = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("csv round-trips exactly") {
  CsvTable t;
  t.header = {"a", "b", "value"};
  t.rows = {{"1", "x", fmt_g17(0.1)}, {"2", "y", fmt_g17(-3.25)}};
  const std::string path = "/tmp/intht_test_table.csv";
  write_csv(path, t);
  CsvTable back = read_csv(path);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.col("value") == 2);
  CHECK(back.col("missing") == -1);
  std::remove(path.c_str());
}

TEST_CASE("seventeen-digit formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 3.141592653589793, -2.2250738585072014e-308, 1e300}) {
    const std::string s = fmt_g17(v);
    CHECK(std::stod(s) == v);
  }
}
