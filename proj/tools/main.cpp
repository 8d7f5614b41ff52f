// Command-line front end. Exit codes: 0 success, 1 property failure (verify),
// 2 malformed input, 3 domain violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "cli_util.hpp"
#include "oneshot/distances.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/hypotest.hpp"
#include "oneshot/io.hpp"
#include "oneshot/moddev.hpp"
#include "oneshot/protocols.hpp"
#include "oneshot/qchannels.hpp"
#include "oneshot/random.hpp"
#include "oneshot/smoothing.hpp"
#include "oneshot/verify.hpp"

#ifndef ONESHOT_FIXTURE_DIR
#define ONESHOT_FIXTURE_DIR "fixtures"
#endif

using json = nlohmann::json;
using namespace oneshot;

namespace {

constexpr const char* kGenerator = "philox4x32-10";

json bits(const EntropyValue& v) {
  if (v.finite) return v.bits;
  return v.bits > 0 ? "+inf" : "-inf";
}

json interval(const BoundInterval& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"lower_provenance", b.lower_provenance},
          {"upper_provenance", b.upper_provenance}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> labels_arg(const std::string& s) {
  if (s.empty()) return {};
  return cli::split(s, ',');
}

ErrorParam error_param(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("eps must lie in [0, 1]");
  return {eps, 1.0 - eps};
}

ModerateSequence sequence(const std::string& alpha, const std::string& table) {
  if (!table.empty()) {
    const json j = json::parse(read_text_file(table), nullptr, false);
    if (j.is_discarded() || !j.contains("n") || !j.contains("a"))
      throw ParseError("sequence table: expected {\"n\": [...], \"a\": [...]}");
    try {
      return ModerateSequence::table(j.at("n").get<std::vector<long long>>(), j.at("a").get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw ParseError(std::string("sequence table: ") + e.what());
    }
  }
  if (alpha.empty()) throw DomainError("a sequence needs --alpha or --table");
  return ModerateSequence::power(cli::parse_real(alpha));
}

std::string header(const std::string& command, std::uint64_t seed) {
  return "# " + command + " seed=" + std::to_string(seed) + " generator=" + kGenerator + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot quantum information toolkit"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out,-o", out_path, "Output file (default stdout)");

  // entropy
  std::string rho_path, sigma_path, tau_path, quantity = "von_neumann", labels;
  double alpha = 1.0, eps = 0.0;
  auto* ent = app.add_subcommand("entropy", "Entropic quantities of states");
  ent->add_option("--rho", rho_path, "State JSON")->required();
  ent->add_option("--sigma", sigma_path, "Second operator JSON");
  ent->add_option("--tau", tau_path, "A-side operator for mutual-information type quantities");
  ent->add_option("--quantity,-q", quantity,
                  "von_neumann | varentropy | relative | relative_variance | sandwiched | petz | dmax | dmin | "
                  "mutual_information | mutual_information_variance | imax | renyi_mi | info_spectrum");
  ent->add_option("--alpha", alpha, "Renyi order");
  ent->add_option("--eps", eps, "Information-spectrum parameter");
  ent->add_option("--labels", labels, "A-side labels, comma separated");

  // dist
  std::string kind = "all", ch_a, ch_b;
  std::uint64_t seed = 7;
  int starts = 32;
  auto* dist = app.add_subcommand("dist", "Fidelity, purified and trace distance; channel purified distance");
  dist->add_option("--rho", rho_path, "State JSON");
  dist->add_option("--sigma", sigma_path, "State JSON");
  dist->add_option("--tau", tau_path, "Third state: adds the tight triangle check");
  dist->add_option("--kind", kind, "fidelity | generalized_fidelity | purified | trace | all");
  dist->add_option("--channel-a", ch_a, "Channel JSON");
  dist->add_option("--channel-b", ch_b, "Channel JSON");
  dist->add_option("--seed", seed, "Seed for the channel optimizer");
  dist->add_option("--starts", starts, "Optimizer starts");

  // dh
  std::string eps_text;
  auto* dhc = app.add_subcommand("dh", "Hypothesis-testing relative entropy");
  dhc->add_option("--rho", rho_path, "State JSON")->required();
  dhc->add_option("--sigma", sigma_path, "Operator JSON")->required();
  dhc->add_option("--eps", eps_text, "Type-I error eps")->required();

  // smooth-bounds
  std::string smooth_kind = "dmax", r_labels;
  double delta = 0.0, k = 2.0, eps_prime = 0.0;
  int n_copies = 1;
  bool oracle = false;
  auto* sm = app.add_subcommand("smooth-bounds", "Enclosures of smoothed quantities");
  sm->add_option("--kind", smooth_kind, "dmax | dmin | imax-partial");
  sm->add_option("--rho", rho_path, "State JSON")->required();
  sm->add_option("--sigma", sigma_path, "Operator JSON (dmax, dmin)");
  sm->add_option("--eps", eps, "Smoothing radius")->required();
  sm->add_option("--delta", delta, "dmax: slack delta (default (1 - eps^2)/2)");
  sm->add_option("--k", k, "dmin / imax-partial: k > 1");
  sm->add_option("--eps-prime", eps_prime, "dmin: adds the D_max^{eps'} route");
  sm->add_option("--r-labels", r_labels, "imax-partial: labels of R");
  sm->add_option("--n", n_copies, "imax-partial: number of copies");
  sm->add_flag("--oracle", oracle, "Also print the exact value (diagonal inputs, at most 3 outcomes per register)");

  // channel
  std::string ch_path, meta_mode;
  auto* chc = app.add_subcommand("channel", "Channel functionals and meta-converse");
  chc->add_option("--channel", ch_path, "Channel JSON")->required();
  chc->add_option("--seed", seed, "Optimizer seed");
  chc->add_option("--starts", starts, "Optimizer starts (default 64)");
  chc->add_option("--meta-converse", meta_mode, "covariant | general");
  chc->add_option("--eps", eps, "Meta-converse error");

  // expand
  std::string task, state_path, alpha_text, table_path, n_range;
  auto* ex = app.add_subcommand("expand", "Moderate-deviation expansion curves (CSV)");
  ex->add_option("--task", task,
                 "state_splitting | source_low | source_high | channel_sim | channel_coding | imax_partial")
      ->required();
  ex->add_option("--state", state_path, "State JSON");
  ex->add_option("--labels", labels, "state_splitting: B labels; imax_partial: R labels");
  ex->add_option("--channel", ch_path, "Channel JSON");
  ex->add_option("--alpha", alpha_text, "a_n = n^{-alpha}; accepts p/q");
  ex->add_option("--table", table_path, "Tabulated sequence JSON {\"n\":[...],\"a\":[...]}");
  ex->add_option("--n", n_range, "n list, e.g. 16..16384 or 16..16384*2")->required();
  ex->add_option("--seed", seed, "Optimizer seed (channel tasks)");

  // residual
  std::string residual_task, p_text, q_text;
  double eta_fraction = 0.05, eta_abs = 0.0;
  auto* res = app.add_subcommand("residual", "Residual sweeps against the expansion (CSV)");
  res->add_option("--task", residual_task, "dh_iid_low | dh_iid_high | imax_upper | imax_lower")->required();
  res->add_option("--p", p_text, "dh tasks: distribution p");
  res->add_option("--q", q_text, "dh tasks: distribution q");
  res->add_option("--state", state_path, "imax tasks: diagonal rho_BR JSON");
  res->add_option("--r-labels", r_labels, "imax tasks: labels of R");
  res->add_option("--alpha", alpha_text, "a_n = n^{-alpha}; accepts p/q");
  res->add_option("--table", table_path, "Tabulated sequence JSON");
  res->add_option("--n", n_range, "n list")->required();
  res->add_option("--eta-fraction", eta_fraction, "Slack as a fraction of the second-order coefficient");
  res->add_option("--eta-abs", eta_abs, "Absolute slack added to the fraction");

  // verify
  std::string suite = "all", report = "verify_report.json", fixture_dir = ONESHOT_FIXTURE_DIR;
  long trials = 0;
  bool list = false;
  auto* ver = app.add_subcommand("verify", "Run property suites");
  ver->add_option("--suite", suite, "Suite name or all");
  ver->add_option("--trials", trials, "Trials (default per suite)");
  ver->add_option("--seed", seed, "Seed");
  ver->add_option("--report", report, "Report file");
  ver->add_option("--fixtures", fixture_dir, "Fixture directory for expansion-identities");
  ver->add_flag("--list", list, "List suites and exit");

  // protocol
  std::string demo, b_labels;
  int n_blocks = 0, dim = 2, samples = 10000, codewords = 4;
  double p_succ = 0.75;
  auto* pr = app.add_subcommand("protocol", "Protocol demos");
  pr->add_option("--demo", demo, "convex-split | de-finetti | strong-converse | teleport")->required();
  pr->add_option("--rho", rho_path, "convex-split: rho_BR JSON");
  pr->add_option("--sigma", sigma_path, "convex-split: sigma_B JSON");
  pr->add_option("--b-labels", b_labels, "convex-split: labels of B");
  pr->add_option("--blocks", n_blocks, "convex-split: block count (default: smallest meeting the hypothesis)");
  pr->add_option("--delta", delta, "convex-split: delta");
  pr->add_option("--n", n_copies, "de-finetti / strong-converse: n");
  pr->add_option("--d", dim, "local dimension");
  pr->add_option("--samples", samples, "Monte-Carlo samples");
  pr->add_option("--codewords", codewords, "strong-converse: codebook size");
  pr->add_option("--p", p_succ, "teleport: success probability");
  pr->add_option("--seed", seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ent->parsed()) {
      const HermitianOperator rho = load_operator(rho_path);
      auto second = [&]() {
        if (sigma_path.empty()) throw DomainError(quantity + " needs --sigma");
        return load_operator(sigma_path);
      };
      auto a_side = [&]() {
        if (!tau_path.empty()) return load_operator(tau_path);
        if (labels.empty()) throw DomainError(quantity + " needs --tau or --labels");
        return marginal(rho, labels_arg(labels));
      };
      json j{{"quantity", quantity}};
      if (quantity == "von_neumann") j["bits"] = bits(von_neumann(rho));
      else if (quantity == "varentropy") j["bits2"] = bits(varentropy(rho));
      else if (quantity == "relative") j["bits"] = bits(relative_entropy(rho, second()));
      else if (quantity == "relative_variance") j["bits2"] = bits(relative_entropy_variance(rho, second()));
      else if (quantity == "sandwiched") j["bits"] = bits(sandwiched_renyi(rho, second(), alpha));
      else if (quantity == "petz") j["bits"] = bits(petz_renyi(rho, second(), alpha));
      else if (quantity == "dmax") j["bits"] = bits(dmax(rho, second()));
      else if (quantity == "dmin") j["bits"] = bits(dmin(rho, second()));
      else if (quantity == "info_spectrum") j["bits"] = bits(info_spectrum(rho, second(), eps));
      else if (quantity == "mutual_information") j["bits"] = bits(mutual_information(rho, labels_arg(labels)));
      else if (quantity == "mutual_information_variance")
        j["bits2"] = bits(mutual_information_variance(rho, labels_arg(labels)));
      else if (quantity == "imax") {
        const ImaxResult r = imax_certified(rho, a_side());
        j["bits"] = bits(r.value);
        j["relative_gap"] = r.certificate.relative_gap;
      } else if (quantity == "renyi_mi") {
        const RenyiMIResult r = renyi_mutual_information(rho, a_side(), alpha);
        j["bits"] = bits(r.value);
        j["exact"] = r.exact;
      } else {
        throw DomainError("unknown quantity '" + quantity + "'");
      }
      cli::write_output(out_path, dump(j));
      return 0;
    }

    if (dist->parsed()) {
      json j;
      if (!ch_a.empty() || !ch_b.empty()) {
        if (ch_a.empty() || ch_b.empty()) throw DomainError("channel distance needs --channel-a and --channel-b");
        OptimizerConfig cfg;
        cfg.seed = seed;
        cfg.starts = starts;
        j["seed"] = seed;
        j["generator"] = kGenerator;
        j["channel_purified_distance"] = interval(channel_purified_distance(load_channel(ch_a), load_channel(ch_b), cfg));
      } else {
        if (rho_path.empty() || sigma_path.empty()) throw DomainError("dist needs --rho and --sigma");
        const HermitianOperator rho = load_operator(rho_path), sigma = load_operator(sigma_path);
        if (kind == "fidelity" || kind == "all") j["fidelity"] = fidelity(rho, sigma);
        if (kind == "generalized_fidelity" || kind == "all") j["generalized_fidelity"] = generalized_fidelity(rho, sigma);
        if (kind == "purified" || kind == "all") j["purified"] = purified_distance(rho, sigma);
        if (kind == "trace" || kind == "all") j["trace"] = trace_distance(rho, sigma);
        if (j.empty()) throw DomainError("unknown distance kind '" + kind + "'");
        if (!tau_path.empty()) {
          const TriangleCheck t = tight_triangle_check(rho, sigma, load_operator(tau_path));
          j["triangle"] = {{"applicable", t.applicable}, {"lhs", t.lhs}, {"rhs", t.rhs}};
        }
      }
      cli::write_output(out_path, dump(j));
      return 0;
    }

    if (dhc->parsed()) {
      const double e = cli::parse_real(eps_text);
      const DhResult r = dh_full(load_operator(rho_path), load_operator(sigma_path), error_param(e));
      json j{{"eps", e}, {"bits", bits(r.value)}, {"log2_beta", r.log2_beta}, {"commuting", r.commuting}};
      cli::write_output(out_path, dump(j));
      return 0;
    }

    if (sm->parsed()) {
      const HermitianOperator rho = load_operator(rho_path);
      json j{{"kind", smooth_kind}, {"eps", eps}};
      if (smooth_kind == "imax-partial") {
        if (r_labels.empty()) throw DomainError("imax-partial needs --r-labels");
        PartialImaxOptions opt;
        opt.k = k;
        j["n"] = n_copies;
        j["bounds"] = interval(imax_partially_smoothed_bounds(rho, labels_arg(r_labels), n_copies, eps, opt));
        if (oracle) {
          if (n_copies != 1) throw DomainError("the exact oracle is one-shot: use --n 1");
          j["oracle"] = exact_smoothing_oracle(rho, labels_arg(r_labels), eps);
        }
      } else {
        if (sigma_path.empty()) throw DomainError(smooth_kind + " needs --sigma");
        const HermitianOperator sigma = load_operator(sigma_path);
        if (smooth_kind == "dmax") {
          j["bounds"] = interval(dmax_smoothed_bounds(rho, sigma, eps, delta));
          if (oracle) j["oracle"] = exact_smoothing_oracle(SmoothingKind::dmax, rho, sigma, eps);
        } else if (smooth_kind == "dmin") {
          j["bounds"] = interval(dmin_smoothed_bounds(rho, sigma, eps, k, eps_prime));
          if (oracle) j["oracle"] = exact_smoothing_oracle(SmoothingKind::dmin, rho, sigma, eps);
        } else {
          throw DomainError("unknown kind '" + smooth_kind + "'");
        }
      }
      cli::write_output(out_path, dump(j));
      return 0;
    }

    if (chc->parsed()) {
      const Channel ch = load_channel(ch_path);
      OptimizerConfig cfg = channel_optimizer_defaults();
      cfg.seed = seed;
      if (chc->count("--starts")) cfg.starts = starts;
      const ChannelFunctionals f = channel_functionals(ch, cfg);
      json j{{"seed", seed},
             {"generator", kGenerator},
             {"capacity_bits", f.capacity_like},
             {"vmax_bits2", f.vmax},
             {"capacity_inputs", f.capacity_inputs.size()},
             {"starts", f.optimizer_report.starts},
             {"spread", f.optimizer_report.spread},
             {"converged", f.converged}};
      if (!meta_mode.empty()) {
        const MetaConverseMode m = meta_mode == "covariant" ? MetaConverseMode::covariant_mes
                                   : meta_mode == "general"
                                       ? MetaConverseMode::general_lowerconf
                                       : throw DomainError("meta-converse mode must be covariant or general");
        const MetaConverseResult r = meta_converse_bound(ch, eps, m, cfg);
        j["meta_converse"] = {{"eps", eps}, {"bits", r.value}, {"provenance", r.provenance}};
      }
      cli::write_output(out_path, dump(j));
      return 0;
    }

    if (ex->parsed()) {
      const auto t = parse_task(task);
      if (!t) throw DomainError("unknown task '" + task + "'");
      const ModerateSequence seq = sequence(alpha_text, table_path);
      ExpansionInputs in;
      if (!state_path.empty()) in.state = load_operator(state_path);
      in.labels = labels_arg(labels);
      if (!ch_path.empty()) {
        OptimizerConfig cfg = channel_optimizer_defaults();
        cfg.seed = seed;
        in.channel = channel_functionals(load_channel(ch_path), cfg);
      }
      const ExpansionTerm term = expansion_term(*t, in);
      std::ostringstream os;
      os << header("expand task=" + task + " (" + term.provenance + ")", seed);
      write_expansion_csv(os, term, seq, cli::parse_n_range(n_range));
      cli::write_output(out_path, os.str());
      return 0;
    }

    if (res->parsed()) {
      ResidualTask t;
      if (residual_task == "dh_iid_low") t = ResidualTask::dh_iid_low;
      else if (residual_task == "dh_iid_high") t = ResidualTask::dh_iid_high;
      else if (residual_task == "imax_upper") t = ResidualTask::imax_upper;
      else if (residual_task == "imax_lower") t = ResidualTask::imax_lower;
      else throw DomainError("unknown residual task '" + residual_task + "'");
      ResidualInstance inst;
      if (!p_text.empty()) inst.iid.p = cli::parse_real_list(p_text);
      if (!q_text.empty()) inst.iid.q = cli::parse_real_list(q_text);
      if (!state_path.empty()) inst.rho = load_operator(state_path);
      inst.r_labels = labels_arg(r_labels);
      const ResidualCurve c = residual_curve(t, inst, sequence(alpha_text, table_path), cli::parse_n_range(n_range),
                                             ResidualOptions{eta_fraction, eta_abs});
      std::ostringstream os;
      os << header("residual task=" + residual_task + " (" + c.provenance + ")", seed);
      os << "# slack=" << c.slack << " n_star_index=" << c.n_star_index << "\n";
      write_residual_csv(os, c);
      cli::write_output(out_path, os.str());
      return 0;
    }

    if (ver->parsed()) {
      if (list) {
        for (const auto& s : kSuites)
          std::printf("%-22s %-11s %s\n", std::string(s.name).c_str(), std::string(s.module).c_str(),
                      std::string(s.property).c_str());
        return 0;
      }
      std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      for (const auto& n : names)
        if (!has_suite(n)) throw DomainError("unknown suite '" + n + "' (see verify --list)");
      json rep{{"seed", seed}, {"generator", kGenerator}, {"suites", json::array()}};
      bool all_pass = true;
      for (const auto& n : names) {
        SuiteOptions o;
        o.trials = trials;
        o.seed = seed;
        o.fixture_dir = fixture_dir;
        const SuiteResult r = run_suite(n, o);
        all_pass = all_pass && r.pass;
        std::printf("%s %-22s checks=%ld failures=%ld worst=%.3g time=%.1fs %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.checks, r.failures, r.worst, r.seconds, r.detail.c_str());
        std::fflush(stdout);
        rep["suites"].push_back({{"name", r.name},
                                 {"pass", r.pass},
                                 {"checks", r.checks},
                                 {"failures", r.failures},
                                 {"worst", r.worst},
                                 {"seconds", r.seconds},
                                 {"detail", r.detail}});
      }
      rep["pass"] = all_pass;
      cli::write_output(report, dump(rep));
      return all_pass ? 0 : 1;
    }

    if (pr->parsed()) {
      json j{{"demo", demo}, {"seed", seed}, {"generator", kGenerator}};
      if (demo == "convex-split") {
        if (rho_path.empty() || sigma_path.empty() || b_labels.empty())
          throw DomainError("convex-split needs --rho, --sigma and --b-labels");
        ConvexSplitInstance inst{load_operator(rho_path), labels_arg(b_labels), load_operator(sigma_path), 1,
                                 delta > 0.0 ? delta : 0.5};
        const std::vector<std::string> bl = inst.b_labels;
        std::vector<std::string> rl;
        for (const auto& l : inst.rho_br.shape().labels())
          if (std::find(bl.begin(), bl.end(), l) == bl.end()) rl.push_back(l);
        const double d = dmax(inst.rho_br, tensor(inst.sigma_b, marginal(inst.rho_br, rl))).bits;
        inst.n = n_blocks > 0 ? n_blocks : static_cast<int>(std::ceil(std::exp2(d) / inst.delta - 1e-12));
        const ConvexSplitCheck c = convex_split_check(inst);
        j.update({{"n", inst.n},
                  {"delta", inst.delta},
                  {"dmax", c.dmax},
                  {"hypothesis", c.hypothesis},
                  {"fidelity", c.fidelity},
                  {"bound", c.bound},
                  {"pass", c.pass},
                  {"cost_bits", convex_split_cost(inst.n)}});
      } else if (demo == "de-finetti") {
        const DeFinettiObjects z = de_finetti(n_copies, dim);
        j.update({{"n", n_copies},
                  {"d", dim},
                  {"g", z.g},
                  {"g_bound", z.g_bound},
                  {"sym_dimension", z.sym_dimension},
                  {"postselection_factor", postselection_factor(n_copies, dim)},
                  {"monte_carlo_trace_norm", de_finetti_monte_carlo(z, samples, seed)},
                  {"samples", samples}});
      } else if (demo == "strong-converse") {
        CounterRng rng(seed);
        const int dd = static_cast<int>(std::lround(std::pow(dim, n_copies)));
        const RegisterShape s({"X"}, {dd});
        std::vector<Matrix> states, g, povm;
        Matrix sum = Matrix::Zero(dd, dd);
        for (int i = 0; i < codewords; ++i) {
          states.push_back(random_density(rng, s).matrix());
          g.push_back(states.back());
          sum += g.back();
        }
        const Matrix w = power_psd(sum, -0.5);
        for (const auto& x : g) povm.push_back(hermitian_part(w * x * w));
        povm[0] += Matrix::Identity(dd, dd) - support_projector(sum);
        const double r = std::log2(static_cast<double>(codewords)) / n_copies;
        const StrongConverseCheck c = strong_converse_check(states, povm, r, dim, n_copies);
        j.update({{"rate", r}, {"p_succ", c.p_succ}, {"bound", c.bound}, {"pass", c.pass}});
      } else if (demo == "teleport") {
        const TeleportCheck c = teleport_coding_check(p_succ, dim, samples, seed);
        j.update({{"p_succ", p_succ}, {"worst", c.worst}, {"bound", c.bound}, {"pass", c.pass}});
      } else {
        throw DomainError("unknown demo '" + demo + "'");
      }
      cli::write_output(out_path, dump(j));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalFailure& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
