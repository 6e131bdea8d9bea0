// Command-line driver: single runs, (b, K) and (m, p) sweeps, the order-3
// experiment, parameter validation, and dataset generation.  Config
// precedence is defaults < --config file < explicit flags.  Exit codes:
// 0 done, 2 configuration/usage error, 3 I/O or runtime failure.

#include <sys/resource.h>

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "intht/atee.hpp"
#include "intht/csv.hpp"
#include "intht/optimizer.hpp"
#include "intht/sweeps.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace intht;

long peak_rss_kb() {
  struct rusage ru {};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss;
}

// Registers every RunConfig field as a flag; values are applied to the final
// config only for flags the user actually passed, keeping file precedence.
struct ConfigFlags {
  RunConfig v;  // flag storage (CLI11 writes here)
  std::string config_path;
  std::string mode_s, regime_s, scheme_s;
  int threads = 0;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> apply_list;

  void bind(CLI::App* app) {
    auto opt = [&](CLI::Option* o, std::function<void(RunConfig&)> fn) {
      apply_list.emplace_back(o, std::move(fn));
    };
    app->add_option("--config", config_path, "key=value config file");
    opt(app->add_option("--p", v.p, "feature dimension"), [this](RunConfig& c) { c.p = v.p; });
    opt(app->add_option("--big-k,--K", v.K, "planted support size"),
        [this](RunConfig& c) { c.K = v.K; });
    opt(app->add_option("--k", v.k, "sparsity budget (0: 3K)"),
        [this](RunConfig& c) { c.k = v.k; });
    opt(app->add_option("--m", v.m, "batch size"), [this](RunConfig& c) { c.m = v.m; });
    opt(app->add_option("--n", v.n, "dataset size (0: 20m)"),
        [this](RunConfig& c) { c.n = v.n; });
    opt(app->add_option("--iters,--T", v.T, "iterations / outer rounds"),
        [this](RunConfig& c) { c.T = v.T; });
    opt(app->add_option("--t-inner", v.t_inner, "inner steps per round (vr)"),
        [this](RunConfig& c) { c.t_inner = v.t_inner; });
    opt(app->add_option("--eta", v.eta, "step size"), [this](RunConfig& c) { c.eta = v.eta; });
    opt(app->add_option("--b", v.b, "sketch budget"), [this](RunConfig& c) { c.b = v.b; });
    opt(app->add_option("--d", v.d, "sketch repetitions"), [this](RunConfig& c) { c.d = v.d; });
    opt(app->add_option("--delta", v.delta, "significance level (0: default bound)"),
        [this](RunConfig& c) { c.delta = v.delta; });
    opt(app->add_option("--order", v.order, "interaction order (2|3)"),
        [this](RunConfig& c) { c.order = v.order; });
    opt(app->add_option("--mode", mode_s, "atee|exact|vr"),
        [this](RunConfig& c) { c.mode = parse_mode(mode_s); });
    opt(app->add_option("--regime", regime_s, "uniform|bernoulli"),
        [this](RunConfig& c) { c.regime = parse_regime(regime_s); });
    opt(app->add_option("--seed", v.seed, "master seed"),
        [this](RunConfig& c) { c.seed = v.seed; });
    opt(app->add_option("--out", v.out, "output CSV path"),
        [this](RunConfig& c) { c.out = v.out; });
    opt(app->add_option("--dataset", v.dataset, "load a saved dataset"),
        [this](RunConfig& c) { c.dataset = v.dataset; });
    opt(app->add_flag("--hash-reuse", v.hash_reuse, "share bucket hashes across repetitions"),
        [this](RunConfig& c) { c.hash_reuse = v.hash_reuse; });
    opt(app->add_flag("--include-diagonal", v.include_diagonal,
                      "admit repeated indices in the planted support"),
        [this](RunConfig& c) { c.include_diagonal = v.include_diagonal; });
    opt(app->add_flag("--theory-schedule", v.theory_schedule,
                      "set k and eta from alpha and L"),
        [this](RunConfig& c) { c.theory_schedule = v.theory_schedule; });
    opt(app->add_option("--alpha", v.alpha, "restricted strong convexity"),
        [this](RunConfig& c) { c.alpha = v.alpha; });
    opt(app->add_option("--L", v.L, "restricted smoothness"),
        [this](RunConfig& c) { c.L = v.L; });
    opt(app->add_option("--scheme", scheme_s, "index code: plain|repetition"),
        [this](RunConfig& c) {
          if (scheme_s == "plain") c.scheme = CodeScheme::plain_binary;
          else if (scheme_s == "repetition") c.scheme = CodeScheme::repetition;
          else throw ConfigError("unknown scheme: " + scheme_s);
        });
    opt(app->add_option("--rep", v.rep, "repetition-code copies per bit"),
        [this](RunConfig& c) { c.rep = v.rep; });
    opt(app->add_option("--exit-tol", v.exit_tol, "early stop at frob <= tol * ||theta*||"),
        [this](RunConfig& c) { c.exit_tol = v.exit_tol; });
    opt(app->add_flag("--init-at-truth", v.init_at_truth, "start from the planted tensor"),
        [this](RunConfig& c) { c.init_at_truth = v.init_at_truth; });
    app->add_option("--threads", threads, "OpenMP thread cap (0: library default)");
  }

  RunConfig resolve(RunConfig cfg = RunConfig{}) const {
    if (!config_path.empty())
      for (const auto& [key, val] : parse_config_file(config_path)) apply_kv(cfg, key, val);
    for (const auto& [o, fn] : apply_list)
      if (o->count() > 0) fn(cfg);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    return cfg;
  }
};

DataSet make_dataset(const RunConfig& cfg) {
  if (!cfg.dataset.empty()) return load_dataset(cfg.dataset);
  if (cfg.regime == Regime::bernoulli)
    return gen_bernoulli(cfg.n_eff(), cfg.p, cfg.K, cfg.seed, cfg.include_diagonal);
  return gen_uniform(cfg.n_eff(), cfg.p, cfg.K, cfg.order, cfg.seed, cfg.include_diagonal);
}

void write_run_csv(const std::string& path, const RunResult& res) {
  CsvTable t;
  t.header = {"t", "frob_error", "precision", "recall", "atee_set_size", "wall_ms"};
  for (const IterateRecord& r : res.records)
    t.rows.push_back({std::to_string(r.t), fmt_g17(r.frob_error), fmt_g17(r.support_precision),
                      fmt_g17(r.support_recall), std::to_string(r.atee_set_size),
                      fmt_g17(r.wall_ms)});
  write_csv(path, t);
}

int cmd_run(RunConfig cfg) {
  const DataSet ds = make_dataset(cfg);
  if (!cfg.dataset.empty()) {  // a loaded dataset wins on shape
    cfg.p = ds.p;
    cfg.K = ds.K;
    cfg.order = ds.order;
    cfg.regime = ds.regime;
    cfg.n = ds.n;
  }
  if (cfg.theory_schedule) cfg.apply_theory_schedule();
  cfg.validate();
  const RunResult res = run_solver(cfg, ds);
  if (!cfg.out.empty()) write_run_csv(cfg.out, res);
  const double tol = 1e-3 * ds.theta.norm_f();
  const bool ok = res.success && res.final_frob < tol;
  std::printf(
      "summary mode=%s order=%d p=%u K=%u k=%u b=%u d=%u m=%u n=%u seed=%llu "
      "success=%d support_recovered=%d final_frob=%.17g first_below_tol=%d iters=%u "
      "wall_ms=%.3f peak_rss_kb=%ld\n",
      mode_name(cfg.mode).c_str(), cfg.order, cfg.p, cfg.K, cfg.k_eff(), cfg.b, cfg.d, cfg.m,
      cfg.n_eff(), static_cast<unsigned long long>(cfg.seed), ok ? 1 : 0, res.success ? 1 : 0,
      res.final_frob, res.first_below_tol, res.iters_run, res.wall_ms_total, peak_rss_kb());
  return 0;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells,
                     size_t seeds_per_cell) {
  CsvTable t;
  t.header = {"p", "K", "b", "m", "seeds", "successes", "success_rate", "mean_final_frob",
              "wall_ms"};
  for (size_t at = 0; at < cells.size(); at += seeds_per_cell) {
    size_t hits = 0;
    double frob = 0, wall = 0;
    for (size_t q = 0; q < seeds_per_cell; ++q) {
      const SweepCell& c = cells[at + q];
      hits += c.success ? 1 : 0;
      frob += c.final_frob;
      wall += c.wall_ms;
    }
    const SweepCell& c0 = cells[at];
    t.rows.push_back({std::to_string(c0.p), std::to_string(c0.K), std::to_string(c0.b),
                      std::to_string(c0.m), std::to_string(seeds_per_cell),
                      std::to_string(hits),
                      fmt_g17(static_cast<double>(hits) / seeds_per_cell),
                      fmt_g17(frob / seeds_per_cell), fmt_g17(wall)});
  }
  write_csv(path, t);
}

std::vector<uint64_t> seed_list(uint64_t base, size_t count) {
  std::vector<uint64_t> s(count);
  for (size_t i = 0; i < count; ++i) s[i] = base + i;
  return s;
}

int cmd_sweep_bk(RunConfig cfg, const std::vector<uint32_t>& Ks, const std::vector<uint32_t>& bs,
                 size_t nseeds) {
  cfg.validate();
  const std::vector<uint64_t> seeds = seed_list(cfg.seed, nseeds);
  const std::vector<SweepCell> cells = sweep_bk(cfg, Ks, bs, seeds);
  if (!cfg.out.empty()) write_sweep_csv(cfg.out, cells, seeds.size());
  for (const auto& [K, b] : minimal_b(cells, CellGoal::recovered, seeds.size()))
    std::printf("minimal-b K=%u b=%u\n", K, b);
  double wall = 0;
  for (const SweepCell& c : cells) wall += c.wall_ms;
  std::printf("sweep-bk cells=%zu wall_ms=%.3f peak_rss_kb=%ld\n", cells.size(), wall,
              peak_rss_kb());
  return 0;
}

int cmd_sweep_mp(RunConfig cfg, const std::vector<uint32_t>& ps, const std::vector<uint32_t>& ms,
                 size_t nseeds, size_t need) {
  cfg.mode = Mode::exact;  // the batch-size scaling experiment is exact-mode
  cfg.regime = Regime::bernoulli;
  cfg.validate();
  const std::vector<uint64_t> seeds = seed_list(cfg.seed, nseeds);
  const std::vector<SweepCell> cells = sweep_mp(cfg, ps, ms, seeds);
  if (!cfg.out.empty()) write_sweep_csv(cfg.out, cells, seeds.size());
  for (const auto& [p, m] : minimal_m(cells, CellGoal::recovered, need))
    std::printf("minimal-m p=%u m=%u\n", p, m);
  std::printf("sweep-mp cells=%zu peak_rss_kb=%ld\n", cells.size(), peak_rss_kb());
  return 0;
}

int cmd_validate(const AteeParams& prm, double g, const TheoryBounds& tb) {
  const ParamReport rep = validate_params(prm, g, tb);
  std::printf("b=%u (effective %u) d=%u delta=%.17g k_top=%u\n", prm.b, prm.b_eff(), prm.d,
              prm.delta, prm.k_top);
  std::printf("%s\n", rep.text().c_str());
  if (!rep.b_ok || !rep.d_ok)
    std::printf("warning: parameters below the recovery guarantee; runs still proceed\n");
  return 0;
}

int cmd_gen(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("gen requires --out");
  const DataSet ds = make_dataset(cfg);
  save_dataset(ds, cfg.out);
  std::printf("dataset p=%u n=%u K=%u order=%d regime=%s seed=%llu path=%s\n", ds.p, ds.n, ds.K,
              ds.order, regime_name(ds.regime).c_str(),
              static_cast<unsigned long long>(ds.seed), cfg.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse interaction regression via sketched hard thresholding"};
  app.require_subcommand(1);

  ConfigFlags run_f, bk_f, mp_f, o3_f, gen_f;
  CLI::App* c_run = app.add_subcommand("run", "single solver run");
  run_f.bind(c_run);
  CLI::App* c_o3 = app.add_subcommand("order3", "single order-3 run (p=30, K=20 defaults)");
  o3_f.bind(c_o3);

  CLI::App* c_bk = app.add_subcommand("sweep-bk", "grid over sketch budget b and sparsity K");
  bk_f.bind(c_bk);
  std::vector<uint32_t> Ks{5, 10, 20, 30}, bs{30, 60, 120, 240, 360, 480, 600};
  size_t bk_seeds = 3;
  c_bk->add_option("--Ks", Ks, "sparsity grid");
  c_bk->add_option("--bs", bs, "budget grid");
  c_bk->add_option("--sweep-seeds", bk_seeds, "seeds per cell");

  CLI::App* c_mp = app.add_subcommand("sweep-mp", "grid over batch size m and dimension p");
  mp_f.bind(c_mp);
  std::vector<uint32_t> ps{10, 40, 160, 640}, ms{1, 3, 9, 27, 81, 99};
  size_t mp_seeds = 5, mp_need = 4;
  c_mp->add_option("--ps", ps, "dimension grid");
  c_mp->add_option("--ms", ms, "batch grid");
  c_mp->add_option("--sweep-seeds", mp_seeds, "seeds per cell");
  c_mp->add_option("--need", mp_need, "successes required for minimal-m");

  CLI::App* c_val = app.add_subcommand("validate-params", "check b and d against the bounds");
  AteeParams vprm;
  TheoryBounds vtb;
  double v_g = 0;
  bool v_use_bound = false;
  c_val->add_option("--b", vprm.b);
  c_val->add_option("--d", vprm.d);
  c_val->add_option("--delta", vprm.delta);
  c_val->add_option("--k-top", vprm.k_top);
  c_val->add_option("--g", v_g, "gradient Frobenius norm estimate");
  c_val->add_option("--c", vtb.c, "failure-rate control");
  c_val->add_option("--L", vtb.L);
  c_val->add_option("--omega", vtb.omega);
  c_val->add_option("--G", vtb.G);
  c_val->add_flag("--use-bound", v_use_bound, "derive g from L, omega, G and k_top/2");

  CLI::App* c_gen = app.add_subcommand("gen", "generate and save a dataset");
  gen_f.bind(c_gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are config errors
  }

  try {
    if (c_run->parsed()) return cmd_run(run_f.resolve());
    if (c_o3->parsed()) {
      RunConfig base;  // order-3 experiment defaults
      base.p = 30;
      base.K = 20;
      base.order = 3;
      base.b = 1024;
      RunConfig cfg = o3_f.resolve(base);
      cfg.order = 3;
      return cmd_run(cfg);
    }
    if (c_bk->parsed()) return cmd_sweep_bk(bk_f.resolve(), Ks, bs, bk_seeds);
    if (c_mp->parsed()) return cmd_sweep_mp(mp_f.resolve(), ps, ms, mp_seeds, mp_need);
    if (c_val->parsed()) {
      if (vprm.k_top == 0) vprm.k_top = 120;
      if (v_use_bound) v_g = gradient_norm_bound(vtb, std::max(1u, vprm.k_top / 2));
      if (vprm.delta <= 0) vprm.delta = default_delta(vtb, std::max(1u, vprm.k_top / 2), vprm.k_top);
      return cmd_validate(vprm, v_g, vtb);
    }
    if (c_gen->parsed()) return cmd_gen(gen_f.resolve());
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
