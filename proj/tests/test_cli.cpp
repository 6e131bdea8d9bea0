// End-to-end checks of the command-line tool.  The binary path arrives in
// INTHT_BIN (ctest sets it); without it the suite degrades to a no-op so the
// unit runner still works standalone.  Runs are tiny on purpose -- these test
// plumbing (flags, config files, csv output, exit codes), not recovery.
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "intht/csv.hpp"

using namespace intht;

namespace {

std::string cli_bin() {
  const char* env = std::getenv("INTHT_BIN");
  return env ? std::string(env) : std::string();
}

#define NEED_BIN()                                \
  if (cli_bin().empty()) {                        \
    MESSAGE("INTHT_BIN not set, skipping");       \
    return;                                       \
  }

// Runs the tool with `args`, captures stdout+stderr, returns the exit code.
int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string cap = "tmp_cli_capture.txt";
  const int rc = std::system((cli_bin() + " " + args + " >" + cap + " 2>&1").c_str());
  if (out) {
    std::ifstream in(cap);
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// Summary fields are space-delimited key=value pairs, so pad the needle.
bool has_field(const std::string& out, const std::string& kv) {
  return out.find(" " + kv + " ") != std::string::npos ||
         out.find(" " + kv + "\n") != std::string::npos;
}

// Small atee run that finishes in milliseconds.
const char* kFastRun = "--p 12 --K 3 --k 9 --m 60 --n 600 --b 64 --d 3 --delta 8";

}  // namespace

TEST_CASE("run writes the per-iteration csv and a summary line") {
  NEED_BIN();
  std::string out;
  const int rc =
      run_cli(std::string("run ") + kFastRun + " --iters 12 --seed 7 --out tmp_cli_run_a.csv",
              &out);
  CHECK(rc == 0);
  CHECK(out.find("summary mode=atee") != std::string::npos);
  CHECK(has_field(out, "p=12"));
  CHECK(has_field(out, "b=64"));
  CHECK(has_field(out, "iters=12"));

  const CsvTable t = read_csv("tmp_cli_run_a.csv");
  const std::vector<std::string> want = {"t",      "frob_error",    "precision",
                                         "recall", "atee_set_size", "wall_ms"};
  CHECK(t.header == want);
  CHECK(t.rows.size() == 12);
  for (const auto& row : t.rows) CHECK(row.size() == want.size());
  CHECK(t.rows.front()[0] == "0");
  CHECK(t.rows.back()[0] == "11");
}

TEST_CASE("same seed gives the same csv, timing aside") {
  NEED_BIN();
  REQUIRE(run_cli(std::string("run ") + kFastRun +
                  " --iters 10 --seed 11 --out tmp_cli_det_a.csv") == 0);
  REQUIRE(run_cli(std::string("run ") + kFastRun +
                  " --iters 10 --seed 11 --out tmp_cli_det_b.csv") == 0);
  const CsvTable a = read_csv("tmp_cli_det_a.csv");
  const CsvTable b = read_csv("tmp_cli_det_b.csv");
  REQUIRE(a.header == b.header);
  REQUIRE(a.rows.size() == b.rows.size());
  size_t wall = 0;
  while (wall < a.header.size() && a.header[wall] != "wall_ms") ++wall;
  REQUIRE(wall < a.header.size());
  for (size_t r = 0; r < a.rows.size(); ++r)
    for (size_t c = 0; c < a.header.size(); ++c)
      if (c != wall) CHECK(a.rows[r][c] == b.rows[r][c]);
}

TEST_CASE("config file loses to an explicit flag") {
  NEED_BIN();
  {
    std::ofstream cfg("tmp_cli.cfg");
    cfg << "# tiny smoke configuration\n"
        << "p=12\nK=3\nk=9\nm=60\nn=600\nb=32\nd=3\ndelta=8\nT=6\nseed=7\n";
  }
  std::string out;
  CHECK(run_cli("run --config tmp_cli.cfg", &out) == 0);
  CHECK(has_field(out, "b=32"));
  CHECK(run_cli("run --config tmp_cli.cfg --b 64", &out) == 0);
  CHECK(has_field(out, "b=64"));
}

TEST_CASE("usage, config, and i/o failures get distinct exit codes") {
  NEED_BIN();
  std::string out;
  CHECK(run_cli("run --no-such-flag 1", &out) == 2);
  CHECK(run_cli("run --config tmp_cli_missing.cfg", &out) == 2);
  CHECK(out.find("config error") != std::string::npos);
  CHECK(run_cli(std::string("run ") + kFastRun + " --eta 0", &out) == 2);
  CHECK(run_cli("gen --p 10 --K 3 --n 100", &out) == 2);  // gen requires --out
  CHECK(run_cli(std::string("run ") + kFastRun +
                " --iters 2 --out /nonexistent-dir/x.csv", &out) == 3);
  CHECK(run_cli(std::string("run ") + kFastRun + " --dataset tmp_cli_no_ds.txt", &out) == 3);
}

TEST_CASE("validate-params reports the required budgets") {
  NEED_BIN();
  std::string out;
  CHECK(run_cli("validate-params --b 1728 --d 277 --delta 1 --k-top 40 --g 2", &out) == 0);
  CHECK(out.find("(effective 2048)") != std::string::npos);
  CHECK(out.find("min_b=1728") != std::string::npos);
  CHECK(out.find("min_d=277") != std::string::npos);
  CHECK(out.find("min_d_relaxed=244") != std::string::npos);
  CHECK(out.find("warning") == std::string::npos);

  CHECK(run_cli("validate-params --b 8 --d 1 --delta 1 --k-top 40 --g 2", &out) == 0);
  CHECK(out.find("LOW") != std::string::npos);
  CHECK(out.find("warning: parameters below the recovery guarantee") != std::string::npos);
}

TEST_CASE("generated datasets reload by path") {
  NEED_BIN();
  std::string out;
  CHECK(run_cli("gen --p 10 --K 3 --n 200 --seed 5 --out tmp_cli_ds.txt", &out) == 0);
  CHECK(out.find("dataset p=10") != std::string::npos);
  CHECK(run_cli("run --dataset tmp_cli_ds.txt --K 3 --k 9 --m 50 --b 64 --d 3 --delta 8"
                " --iters 6 --seed 5", &out) == 0);
  CHECK(has_field(out, "p=10"));   // shape comes from the file, not defaults
  CHECK(has_field(out, "n=200"));
}

TEST_CASE("theory schedule needs its constants") {
  NEED_BIN();
  std::string out;
  CHECK(run_cli(std::string("run ") + kFastRun + " --iters 2 --theory-schedule --L 1", &out) ==
        2);
  CHECK(run_cli(std::string("run ") + kFastRun +
                " --iters 2 --theory-schedule --alpha 0.5 --L 1", &out) == 0);
  CHECK(has_field(out, "k=12"));  // ceil(3 * 1 / 0.25)
}

TEST_CASE("a zero-iteration run still reports") {
  NEED_BIN();
  std::string out;
  CHECK(run_cli(std::string("run ") + kFastRun + " --iters 0 --out tmp_cli_zero.csv", &out) ==
        0);
  CHECK(has_field(out, "iters=0"));
  CHECK(read_csv("tmp_cli_zero.csv").rows.empty());
}

TEST_CASE("tiny sweep grids emit per-cell csv and count lines") {
  NEED_BIN();
  std::string out;
  CHECK(run_cli("sweep-bk --p 16 --K 3 --k 9 --m 150 --n 150 --d 3 --delta 8 --iters 25"
                " --exit-tol 1e-3 --seed 1 --sweep-seeds 1 --Ks 3 --bs 16 32"
                " --out tmp_cli_bk.csv",
                &out) == 0);
  CHECK(out.find("sweep-bk cells=2") != std::string::npos);
  CHECK(read_csv("tmp_cli_bk.csv").rows.size() == 2);

  CHECK(run_cli("sweep-mp --K 3 --k 9 --m 60 --n 120 --iters 20 --exit-tol 1e-3 --seed 1"
                " --sweep-seeds 2 --need 2 --ps 8 16 --ms 4 12 --out tmp_cli_mp.csv",
                &out) == 0);
  CHECK(out.find("sweep-mp cells=8") != std::string::npos);
  CHECK(read_csv("tmp_cli_mp.csv").rows.size() == 4);
}
