// One PASS/FAIL line per acceptance criterion. Trial counts, seeds and runtime
// limits are pinned here; tolerances live in the suites themselves.

#include <cstdio>
#include <string>
#include <vector>

#include "oneshot/verify.hpp"

namespace {

struct Run {
  const char* suite;
  long trials;
};

struct Criterion {
  int id;
  const char* what;
  std::vector<Run> runs;
  double max_seconds;  // 0: no runtime limit
};

}  // namespace

int main() {
  using namespace oneshot;
  const std::vector<Criterion> criteria = {
      {1, "tight triangle inequality, 1e4 Haar triples", {{"triangle", 10000}}, 60.0},
      {2, "pure-state variance identities, 1e3 states", {{"pure-variance", 1000}}, 0.0},
      {3, "Neyman-Pearson LP oracle (1e3) and type classes vs explicit tensors (1e2)",
       {{"np-oracle", 1000}, {"iid-types", 100}}, 0.0},
      {4, "low-error D_h residual: n* <= 2^10 and shrinking |residual|/a_n", {{"moderate-residual", 1}}, 300.0},
      {5, "smoothing oracles inside their brackets, 1e2 instances", {{"smoothing-sandwich", 100}}, 0.0},
      {6, "partially smoothed bracket contains I_max at n = 1, 50 states", {{"imax-anchor", 50}}, 0.0},
      {7, "convex split fidelity, 1e2 instances", {{"convex-split", 100}}, 0.0},
      {8, "de Finetti constants and Haar average (1e4 samples)", {{"de-finetti", 10000}}, 0.0},
      {9, "Renyi and variance dualities, 1e2 pure states", {{"renyi-duality", 100}}, 0.0},
      {10, "channel functionals and channel distance", {{"channel-layer", 1}}, 0.0},
      {11, "expansion coefficient identities on fixtures", {{"expansion-identities", 1}}, 0.0},
      {12, "strong converse and teleportation, 1e3 each", {{"strong-converse", 1000}, {"teleport", 1000}}, 0.0},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    bool pass = true;
    double seconds = 0.0;
    std::string notes;
    for (const auto& run : c.runs) {
      SuiteOptions opt;
      opt.trials = run.trials;
      opt.seed = 7;
      opt.fixture_dir = ONESHOT_FIXTURE_DIR;
      const SuiteResult r = run_suite(run.suite, opt);
      pass = pass && r.pass;
      seconds += r.seconds;
      char buf[160];
      std::snprintf(buf, sizeof buf, " [%s: %ld checks, %ld failures, worst %.3g]", run.suite, r.checks, r.failures,
                    r.worst);
      notes += buf;
      if (!r.pass && !r.detail.empty()) notes += " " + r.detail;
    }
    if (c.max_seconds > 0.0 && seconds > c.max_seconds) {
      pass = false;
      notes += " runtime limit exceeded";
    }
    std::printf("%s criterion %2d: %s (%.1f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.what, seconds, notes.c_str());
    std::fflush(stdout);
    if (!pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
