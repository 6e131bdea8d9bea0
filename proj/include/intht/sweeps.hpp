#pragma once

// Grid sweeps over (b, K) and (m, p) with one solver run per cell.  Cells
// execute in a worker pool but results are stored by grid position, so output
// order is deterministic regardless of scheduling.

#include <cstdint>
#include <map>
#include <vector>

#include "intht/config.hpp"
#include "intht/optimizer.hpp"

namespace intht {

struct SweepCell {
  uint32_t p = 0, K = 0, b = 0, m = 0;
  uint64_t seed = 0;
  bool success = false;       // exact support recovery at the end
  int first_below_tol = -1;   // iteration of first frob crossing, -1 if never
  double final_frob = 0;
  uint32_t iters = 0;
  double wall_ms = 0;
};

// Sketch-width sweep: for each K, b, seed runs the solver on a fresh planted
// instance (dataset seed = run seed).  Row order: K-major, then b, then seed.
std::vector<SweepCell> sweep_bk(const RunConfig& base, const std::vector<uint32_t>& Ks,
                                const std::vector<uint32_t>& bs,
                                const std::vector<uint64_t>& seeds);

// Batch-size sweep across dimensions.  Row order: p-major, then m, then seed.
std::vector<SweepCell> sweep_mp(const RunConfig& base, const std::vector<uint32_t>& ps,
                                const std::vector<uint32_t>& ms,
                                const std::vector<uint64_t>& seeds);

enum class CellGoal { converged, recovered };  // frob crossing vs support equality

// Smallest b (resp. m) per K (resp. p) at which at least min_successes seeds
// meet the goal; keys with no qualifying grid value are absent.
std::map<uint32_t, uint32_t> minimal_b(const std::vector<SweepCell>& cells, CellGoal goal,
                                       size_t min_successes);
std::map<uint32_t, uint32_t> minimal_m(const std::vector<SweepCell>& cells, CellGoal goal,
                                       size_t min_successes);

}  // namespace intht
