// Micro-benchmark comparing the OpenMP sketch-bank kernel against the serial
// reference on identical inputs.  The two variants must agree bit-for-bit;
// the max-|diff| column should print as exactly 0.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "intht/atee.hpp"
#include "intht/optimizer.hpp"
#include "intht/synth.hpp"

using namespace intht;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const double t0 = now_ms();
    fn();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  uint32_t p = 200, m = 4000, b = 360, d = 3, K = 20;
  int order = 2;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    const uint32_t v = static_cast<uint32_t>(std::stoul(argv[i + 1]));
    if (key == "--p") p = v;
    else if (key == "--m") m = v;
    else if (key == "--b") b = v;
    else if (key == "--d") d = v;
    else if (key == "--order") order = static_cast<int>(v);
    else if (key == "--big-k") K = v;
    else {
      std::fprintf(stderr, "unknown flag %s\n", key.c_str());
      return 2;
    }
  }

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("bank kernel benchmark: p=%u m=%u b=%u d=%u order=%d threads=%d\n", p, m, b, d,
              order, threads);

  const DataSet ds = gen_uniform(m, p, K, order, 7);
  std::vector<uint32_t> batch(m);
  for (uint32_t i = 0; i < m; ++i) batch[i] = i;
  std::vector<double> u;
  residuals(SparseTensor(order, p), ds, batch, u);

  GradientFactors f;
  f.X = &ds.X;
  f.idx = &batch;
  f.w = u;
  f.norm = 1.0 / m;
  f.order = order;

  AteeParams prm;
  prm.b = b;
  prm.d = d;
  prm.delta = 10.0;
  prm.k_top = 2 * 3 * K;
  const IndexCodeTable table = build_code_table(p, CodeScheme::plain_binary);

  SketchBank serial, parallel;
  const double t_serial =
      time_best_of(3, [&] { serial = build_sketch_bank_serial(f, table, prm, 42); });
  const double t_parallel =
      time_best_of(3, [&] { parallel = build_sketch_bank(f, table, prm, 42); });

  double max_diff = 0;
  for (size_t i = 0; i < serial.s.size(); ++i)
    max_diff = std::max(max_diff, std::fabs(serial.s[i] - parallel.s[i]));

  std::printf("%-22s %12s %12s %9s %10s\n", "kernel", "serial ms", "openmp ms", "speedup",
              "max|diff|");
  std::printf("%-22s %12.2f %12.2f %8.2fx %10g\n", "build_sketch_bank", t_serial, t_parallel,
              t_serial / t_parallel, max_diff);

  const double t_decode = time_best_of(3, [&] {
    const DecodedVotes v = decode_bank(parallel, table, prm, order);
    (void)v;
  });
  std::printf("%-22s %12.2f %12s\n", "decode_bank", t_decode, "-");
  return max_diff == 0.0 ? 0 : 1;
}
