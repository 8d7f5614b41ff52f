#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oneshot {

// Property suites. Each samples seeded random instances, checks an inequality
// or identity against an independent evaluation, and counts violations.
struct SuiteInfo {
  std::string_view name;
  std::string_view module;
  std::string_view property;
  long default_trials;
};

inline constexpr std::array<std::string_view, 9> kModules = {
    "qregisters", "distances", "entropies", "hypotest", "smoothing",
    "qchannels",  "moddev",    "protocols", "cli"};

inline constexpr std::array<SuiteInfo, 25> kSuites = {{
    {"registers", "qregisters", "partial trace, purification and spectra agree with direct constructions", 200},
    {"triangle", "distances", "tight triangle inequality for the purified distance when P^2 + P^2 <= 1", 10000},
    {"channel-distance", "distances", "channel purified distance brackets the value at every sampled input", 6},
    {"pure-variance", "entropies", "V(A:B) = 4 V(A) and V(rho_AB || I x rho_B) = V(A) for pure states", 1000},
    {"renyi-duality", "entropies", "Renyi mutual information and variance dualities on pure tripartite states", 100},
    {"nonlockability", "entropies", "I_max(A;BC) <= I_max(A;B) + 2 log|C|", 100},
    {"mi-variance-bound", "entropies", "V(A:B) <= 4 log^2(2 d_A + 1)", 500},
    {"np-oracle", "hypotest", "D_h equals a sort-and-randomize linear program on diagonal inputs", 1000},
    {"iid-types", "hypotest", "type-class D_h equals explicit-tensor D_h for n <= 8", 100},
    {"spectrum-sandwich", "hypotest", "D_h^{eps-delta} + log delta <= information spectrum at eps", 300},
    {"smoothing-sandwich", "smoothing", "exact smoothed D_max / D_min inside their hypothesis-testing brackets", 100},
    {"imax-anchor", "smoothing", "partially smoothed bracket at n = 1 contains the conic I_max", 50},
    {"channel-layer", "qchannels", "capacity functionals on identity and depolarizing channels", 1},
    {"meta-converse", "qchannels", "covariant meta-converse equals the closed form on depolarizing channels", 10},
    {"moderate-residual", "moddev", "low-error D_h residual under the expansion, shrinking in units of a_n", 1},
    {"expansion-identities", "moddev", "coding = simulation / sqrt 2 and source = state splitting coefficients", 1},
    {"error-rescale", "moddev", "constant and polynomial rescaling of eps_n stay moderate", 200},
    {"convex-split", "protocols", "F(tau, sigma^n x rho_R) >= sqrt(1 - delta) under the block-count hypothesis", 100},
    {"state-splitting-cost", "protocols", "block count meets the hypothesis at cost <= D/2 + log 2/delta", 100},
    {"de-finetti", "protocols", "g_{n,d}, symmetric-projector state and Haar average", 10000},
    {"symmetrize", "protocols", "symmetrized channels are covariant and never increase P on invariant pairs", 20},
    {"teleport", "protocols", "P(p psi + (1-p) psi_perp, psi) <= sqrt(1-p)", 1000},
    {"strong-converse", "protocols", "P_succ <= 2^{-n(r - log d)} for arbitrary codebooks and POVMs", 1000},
    {"coding-converse-chain", "protocols", "triangle chain and its first-order slope", 2000},
    {"io-roundtrip", "cli", "state and channel JSON re-ingest bit-identically", 200},
}};

namespace detail {
constexpr bool module_covered(std::string_view m) {
  for (const auto& s : kSuites)
    if (s.module == m) return true;
  return false;
}
constexpr bool all_modules_covered() {
  for (auto m : kModules)
    if (!module_covered(m)) return false;
  for (const auto& s : kSuites) {
    bool known = false;
    for (auto m : kModules) known = known || s.module == m;
    if (!known) return false;
  }
  return true;
}
}  // namespace detail

static_assert(detail::all_modules_covered(), "every module needs a verification suite");

struct SuiteOptions {
  long trials = 0;  // 0: the suite default
  std::uint64_t seed = 7;
  std::string fixture_dir;  // expansion-identities reads every *.json here
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  long checks = 0;
  long failures = 0;
  double worst = 0.0;  // largest violation (or error) seen
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> suite_names();
bool has_suite(const std::string& name);
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace oneshot
