#include "intht/sweeps.hpp"

#include <set>

namespace intht {

namespace {

DataSet cell_dataset(const RunConfig& cfg) {
  if (cfg.regime == Regime::bernoulli)
    return gen_bernoulli(cfg.n_eff(), cfg.p, cfg.K, cfg.seed, cfg.include_diagonal);
  return gen_uniform(cfg.n_eff(), cfg.p, cfg.K, cfg.order, cfg.seed, cfg.include_diagonal);
}

SweepCell run_cell(const RunConfig& cfg) {
  const DataSet ds = cell_dataset(cfg);
  const RunResult res = run_solver(cfg, ds);
  SweepCell cell;
  cell.p = cfg.p;
  cell.K = cfg.K;
  cell.b = cfg.b;
  cell.m = cfg.m;
  cell.seed = cfg.seed;
  cell.success = res.success;
  cell.first_below_tol = res.first_below_tol;
  cell.final_frob = res.final_frob;
  cell.iters = res.iters_run;
  cell.wall_ms = res.wall_ms_total;
  return cell;
}

bool goal_met(const SweepCell& c, CellGoal goal) {
  return goal == CellGoal::recovered ? c.success : c.first_below_tol >= 0;
}

// Minimal grid value per group at which enough seeds meet the goal.
std::map<uint32_t, uint32_t> minimal_axis(const std::vector<SweepCell>& cells, CellGoal goal,
                                          size_t min_successes, uint32_t SweepCell::*group,
                                          uint32_t SweepCell::*axis) {
  std::map<uint32_t, std::map<uint32_t, size_t>> hits;  // group -> axis -> #seeds meeting goal
  for (const SweepCell& c : cells) {
    size_t& h = hits[c.*group][c.*axis];
    if (goal_met(c, goal)) ++h;
  }
  std::map<uint32_t, uint32_t> out;
  for (const auto& [g, by_axis] : hits)
    for (const auto& [v, ok] : by_axis)
      if (ok >= min_successes) {
        out[g] = v;
        break;
      }
  return out;
}

}  // namespace

std::vector<SweepCell> sweep_bk(const RunConfig& base, const std::vector<uint32_t>& Ks,
                                const std::vector<uint32_t>& bs,
                                const std::vector<uint64_t>& seeds) {
  std::vector<RunConfig> cfgs;
  for (uint32_t K : Ks)
    for (uint32_t b : bs)
      for (uint64_t seed : seeds) {
        RunConfig c = base;
        c.K = K;
        c.b = b;
        c.seed = seed;
        cfgs.push_back(c);
      }
  std::vector<SweepCell> cells(cfgs.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < cfgs.size(); ++i) cells[i] = run_cell(cfgs[i]);
  return cells;
}

std::vector<SweepCell> sweep_mp(const RunConfig& base, const std::vector<uint32_t>& ps,
                                const std::vector<uint32_t>& ms,
                                const std::vector<uint64_t>& seeds) {
  std::vector<RunConfig> cfgs;
  for (uint32_t p : ps)
    for (uint32_t m : ms)
      for (uint64_t seed : seeds) {
        RunConfig c = base;
        c.p = p;
        c.m = m;  // n = 20 m follows automatically when base.n is 0
        c.seed = seed;
        cfgs.push_back(c);
      }
  std::vector<SweepCell> cells(cfgs.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < cfgs.size(); ++i) cells[i] = run_cell(cfgs[i]);
  return cells;
}

std::map<uint32_t, uint32_t> minimal_b(const std::vector<SweepCell>& cells, CellGoal goal,
                                       size_t min_successes) {
  return minimal_axis(cells, goal, min_successes, &SweepCell::K, &SweepCell::b);
}

std::map<uint32_t, uint32_t> minimal_m(const std::vector<SweepCell>& cells, CellGoal goal,
                                       size_t min_successes) {
  return minimal_axis(cells, goal, min_successes, &SweepCell::p, &SweepCell::m);
}

}  // namespace intht
