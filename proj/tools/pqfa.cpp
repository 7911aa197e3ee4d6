// pqfa: command-line front end for the photonic periodic-language acceptor.
//
// Subcommands: accept-prob, error-prob, thresholds, min-photons, sweep,
// simulate. All options can also come from an INI file via --config;
// command-line flags override file values. Exit codes: 0 success, 2 usage
// error, 3 domain error, 4 I/O error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pqfa/pqfa.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Default output directory: $PQFA_OUT_DIR if set, otherwise the working
/// directory. An explicit --out always wins.
std::string resolve_out_path(const std::string& explicit_path, const char* default_name) {
  if (!explicit_path.empty()) return explicit_path;
  const char* dir = std::getenv("PQFA_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return default_name;
  return (std::filesystem::path(dir) / default_name).string();
}

pqfa::StrategyKind strategy_from_string(const std::string& name) {
  if (name == "H") return pqfa::StrategyKind::kH;
  if (name == "V") return pqfa::StrategyKind::kV;
  if (name == "Joint") return pqfa::StrategyKind::kJoint;
  throw std::invalid_argument("unknown strategy: " + name);
}

void print_error_prob_line(pqfa::StrategyKind strategy, const pqfa::AutomatonSpec& spec,
                           const pqfa::PhotonBudget& budget, const pqfa::ThresholdSet& t) {
  const double error = pqfa::error_probability(strategy, spec, budget);
  const bool valid = pqfa::binary_regime_valid(strategy, spec, budget);
  std::string threshold = "-";
  std::string floor = "-";
  if (strategy == pqfa::StrategyKind::kH) {
    threshold = format_double(t.n_th_h);
    floor = std::to_string(t.floor_h);
  } else if (strategy == pqfa::StrategyKind::kV) {
    threshold = format_double(t.n_th_v);
    floor = std::to_string(t.floor_v);
  }
  std::printf("%-6s %-10.3g threshold=%s floor=%s binary_valid=%d\n",
              pqfa::to_string(strategy), error, threshold.c_str(), floor.c_str(),
              valid ? 1 : 0);
}

void write_simulate_csv(const std::string& path, const pqfa::RunConfig& cfg,
                        const std::vector<pqfa::RunRecord>& records) {
  const pqfa::MeanCounts mu = pqfa::mean_counts(cfg.spec, cfg.word, cfg.budget);
  const pqfa::ThresholdSet t = pqfa::thresholds(cfg.spec, cfg.budget);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << "# pqfa simulate v1\n";
  os << "# tool: " << pqfa::kToolName << ' ' << pqfa::kVersion << '\n';
  os << "# rng: " << pqfa::kRngId << '\n';
  os << "# variant: " << pqfa::to_string(cfg.spec.variant()) << '\n';
  os << "# m: " << cfg.spec.m() << '\n';
  os << "# k: " << cfg.word.k << '\n';
  os << "# nc: " << format_double(cfg.budget.mean_signal()) << '\n';
  os << "# ndc: " << format_double(cfg.budget.mean_dark()) << '\n';
  os << "# repetitions: " << cfg.repetitions << '\n';
  os << "# seed: " << cfg.seed << '\n';
  os << "# mu_h: " << format_double(mu.mu_h) << '\n';
  os << "# mu_v: " << format_double(mu.mu_v) << '\n';
  os << "# n_th_h: " << format_double(t.n_th_h) << " floor_h: " << t.floor_h << '\n';
  os << "# n_th_v: " << format_double(t.n_th_v) << " floor_v: " << t.floor_v << '\n';
  os << "rep,n_h,n_v,decision_H,decision_V,decision_Joint\n";
  for (const pqfa::RunRecord& r : records) {
    os << r.rep << ',' << r.counts.n_h << ',' << r.counts.n_v << ',' << (r.accept_h ? 1 : 0)
       << ',' << (r.accept_v ? 1 : 0) << ',' << (r.accept_joint ? 1 : 0) << '\n';
  }
  if (!os) throw std::runtime_error("failed while writing: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic acceptor for the unary periodic language {a^k : k mod m = 0}: "
               "analytic error rates, photon thresholds and Monte Carlo simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(pqfa::kToolName) + ' ' + pqfa::kVersion);
  app.set_config("--config", "",
                 "Read options from an INI file; command-line flags override");

  // ---- accept-prob ------------------------------------------------------
  struct {
    std::uint32_t m = 2;
    std::uint64_t k = 0;
    std::string variant = "A1";
  } ap;
  auto* accept_cmd =
      app.add_subcommand("accept-prob", "Acceptance probability of the word a^k");
  accept_cmd->add_option("--m", ap.m, "Period of the language (>= 2)")->required();
  accept_cmd->add_option("--k", ap.k, "Word length k")->required();
  accept_cmd->add_option("--variant", ap.variant, "Automaton variant")
      ->check(CLI::IsMember({"A1", "A2"}));
  accept_cmd->callback([&] {
    const pqfa::AutomatonSpec spec(ap.m, pqfa::variant_from_string(ap.variant));
    std::printf("%.12f\n", pqfa::accept_probability(spec, pqfa::Word{ap.k}));
  });

  // ---- error-prob -------------------------------------------------------
  struct {
    std::uint32_t m = 2;
    double nc = 0.0;
    double ndc = 0.0;
    std::string strategy = "all";
    std::string variant = "A1";
  } ep;
  auto* error_cmd = app.add_subcommand(
      "error-prob", "Analytic acceptance-error probability of a strategy");
  error_cmd->add_option("--m", ep.m, "Period of the language (>= 2)")->required();
  error_cmd->add_option("--nc", ep.nc, "Mean signal photons per run")->required();
  error_cmd->add_option("--ndc", ep.ndc, "Mean dark counts per detector");
  error_cmd->add_option("--strategy", ep.strategy, "Strategy to report")
      ->check(CLI::IsMember({"H", "V", "Joint", "all"}));
  error_cmd->add_option("--variant", ep.variant, "Automaton variant")
      ->check(CLI::IsMember({"A1", "A2"}));
  error_cmd->callback([&] {
    const pqfa::AutomatonSpec spec(ep.m, pqfa::variant_from_string(ep.variant));
    const pqfa::PhotonBudget budget(ep.nc, ep.ndc);
    const pqfa::ThresholdSet t = pqfa::thresholds(spec, budget);
    if (ep.strategy == "all") {
      for (const pqfa::StrategyKind s :
           {pqfa::StrategyKind::kH, pqfa::StrategyKind::kV, pqfa::StrategyKind::kJoint}) {
        print_error_prob_line(s, spec, budget, t);
      }
    } else {
      print_error_prob_line(strategy_from_string(ep.strategy), spec, budget, t);
    }
  });

  // ---- thresholds -------------------------------------------------------
  struct {
    std::uint32_t m = 2;
    double nc = 0.0;
    double ndc = 0.0;
    std::string variant = "A1";
  } th;
  auto* thresholds_cmd = app.add_subcommand(
      "thresholds", "Decision thresholds and hypothesis means at a budget");
  thresholds_cmd->add_option("--m", th.m, "Period of the language (>= 2)")->required();
  thresholds_cmd->add_option("--nc", th.nc, "Mean signal photons per run")->required();
  thresholds_cmd->add_option("--ndc", th.ndc, "Mean dark counts per detector");
  thresholds_cmd->add_option("--variant", th.variant, "Automaton variant")
      ->check(CLI::IsMember({"A1", "A2"}));
  thresholds_cmd->callback([&] {
    const pqfa::AutomatonSpec spec(th.m, pqfa::variant_from_string(th.variant));
    const pqfa::PhotonBudget budget(th.nc, th.ndc);
    const pqfa::MeanCounts member = pqfa::mean_counts(spec, pqfa::Word{0}, budget);
    const pqfa::MeanCounts worst = pqfa::mean_counts(spec, pqfa::kWorstCaseWord, budget);
    const pqfa::ThresholdSet t = pqfa::thresholds(spec, budget);
    std::printf("mu_member_h=%s mu_member_v=%s\n", format_double(member.mu_h).c_str(),
                format_double(member.mu_v).c_str());
    std::printf("mu_worst_h=%s mu_worst_v=%s\n", format_double(worst.mu_h).c_str(),
                format_double(worst.mu_v).c_str());
    std::printf("n_th_h=%s floor_h=%lld\n", format_double(t.n_th_h).c_str(),
                static_cast<long long>(t.floor_h));
    std::printf("n_th_v=%s floor_v=%lld\n", format_double(t.n_th_v).c_str(),
                static_cast<long long>(t.floor_v));
  });

  // ---- min-photons ------------------------------------------------------
  struct {
    std::uint32_t m = 2;
    double ndc = 0.0;
    std::string detector = "H";
    std::string regime = "binary";
    std::string variant = "A1";
  } mp;
  auto* min_cmd = app.add_subcommand(
      "min-photons", "Minimum mean photon number for a reliable detector reading");
  min_cmd->add_option("--m", mp.m, "Period of the language (>= 2)")->required();
  min_cmd->add_option("--ndc", mp.ndc, "Mean dark counts (binary regime only)");
  min_cmd->add_option("--detector", mp.detector, "Detector to solve for")
      ->required()
      ->check(CLI::IsMember({"H", "V"}));
  min_cmd->add_option("--regime", mp.regime,
                      "ideal: noiseless floor criterion; binary: two-sigma separation")
      ->check(CLI::IsMember({"ideal", "binary"}));
  min_cmd->add_option("--variant", mp.variant, "Automaton variant")
      ->check(CLI::IsMember({"A1", "A2"}));
  min_cmd->callback([&] {
    const pqfa::AutomatonSpec spec(mp.m, pqfa::variant_from_string(mp.variant));
    const pqfa::Detector d = mp.detector == "H" ? pqfa::Detector::kH : pqfa::Detector::kV;
    std::uint64_t result = 0;
    if (mp.regime == "ideal") {
      if (mp.ndc != 0.0) {
        throw std::invalid_argument("the ideal regime is noiseless; --ndc does not apply");
      }
      result = pqfa::ideal_min_photons(spec, d);
    } else {
      result = pqfa::binary_regime_min_photons(spec, mp.ndc, d);
    }
    std::printf("%llu\n", static_cast<unsigned long long>(result));
  });

  // ---- sweep ------------------------------------------------------------
  struct {
    std::vector<std::uint32_t> ms;
    std::vector<double> ncs;
    std::uint64_t nc_start = 0;
    std::uint64_t nc_stop = 0;
    std::uint64_t nc_step = 1;
    std::vector<double> ndcs;
    std::vector<std::string> strategies;
    std::string regime = "error";
    std::string variant = "A1";
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string format = "csv";
    std::string out;
  } sw;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Tabulate error rates and photon minima over a parameter grid");
  sweep_cmd->add_option("--m", sw.ms, "Period values (repeatable)")->required();
  sweep_cmd->add_option("--nc", sw.ncs, "Explicit mean signal photon values (repeatable)");
  sweep_cmd->add_option("--nc-start", sw.nc_start, "First mean signal photon value (>= 1)");
  sweep_cmd->add_option("--nc-stop", sw.nc_stop, "Last mean signal photon value (inclusive)");
  sweep_cmd->add_option("--nc-step", sw.nc_step, "Range step (>= 1)");
  sweep_cmd->add_option("--ndc", sw.ndcs, "Mean dark count values (repeatable; default 0)");
  sweep_cmd->add_option("--strategy", sw.strategies, "Strategies to tabulate (default all)")
      ->check(CLI::IsMember({"H", "V", "Joint"}));
  sweep_cmd->add_option("--regime", sw.regime,
                        "error: full error-rate grid; ideal: noiseless minima per m")
      ->check(CLI::IsMember({"error", "ideal"}));
  sweep_cmd->add_option("--variant", sw.variant, "Automaton variant")
      ->check(CLI::IsMember({"A1", "A2"}));
  sweep_cmd->add_option("--reps", sw.reps,
                        "Monte Carlo repetitions per point (0 = analytic only)");
  sweep_cmd->add_option("--seed", sw.seed, "Master seed for empirical columns");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0 = auto)");
  sweep_cmd->add_option("--format", sw.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", sw.out, "Output path (default sweep.csv|json in $PQFA_OUT_DIR)");
  sweep_cmd->callback([&] {
    pqfa::SweepConfig cfg;
    cfg.ms = sw.ms;
    cfg.signal_means = sw.ncs;
    if (sw.nc_stop != 0) {
      if (sw.nc_start < 1 || sw.nc_step < 1 || sw.nc_stop < sw.nc_start) {
        throw std::invalid_argument(
            "invalid photon range: need 1 <= nc-start <= nc-stop and nc-step >= 1");
      }
      for (std::uint64_t v = sw.nc_start; v <= sw.nc_stop; v += sw.nc_step) {
        cfg.signal_means.push_back(static_cast<double>(v));
      }
    }
    cfg.dark_means = sw.ndcs.empty() ? std::vector<double>{0.0} : sw.ndcs;
    if (!sw.strategies.empty()) {
      cfg.strategies.clear();
      for (const std::string& name : sw.strategies) {
        cfg.strategies.push_back(strategy_from_string(name));
      }
    }
    cfg.regime = sw.regime == "ideal" ? pqfa::SweepRegime::kIdealMinima
                                      : pqfa::SweepRegime::kError;
    cfg.variant = pqfa::variant_from_string(sw.variant);
    cfg.repetitions = sw.reps;
    cfg.seed = sw.seed;
    cfg.threads = sw.threads;

    const pqfa::SweepResult result = pqfa::run_sweep(cfg);
    const bool json = sw.format == "json";
    const std::string path = resolve_out_path(sw.out, json ? "sweep.json" : "sweep.csv");
    if (json) {
      pqfa::write_json(path, result);
    } else {
      pqfa::write_csv(path, result);
    }
    std::printf("wrote %s (%zu rows)\n", path.c_str(), result.rows.size());
  });

  // ---- simulate ---------------------------------------------------------
  struct {
    std::uint32_t m = 2;
    std::uint64_t k = 0;
    double nc = 0.0;
    double ndc = 0.0;
    std::uint64_t reps = 100;
    std::uint64_t seed = 0;
    std::string variant = "A1";
    std::string out;
  } sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo photon-counting runs of one word, one row per repetition");
  sim_cmd->add_option("--m", sim.m, "Period of the language (>= 2)")->required();
  sim_cmd->add_option("--k", sim.k, "Word length k")->required();
  sim_cmd->add_option("--nc", sim.nc, "Mean signal photons per run")->required();
  sim_cmd->add_option("--ndc", sim.ndc, "Mean dark counts per detector");
  sim_cmd->add_option("--reps", sim.reps, "Number of repetitions");
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--variant", sim.variant, "Automaton variant")
      ->check(CLI::IsMember({"A1", "A2"}));
  sim_cmd->add_option("--out", sim.out, "Output path (default simulate.csv in $PQFA_OUT_DIR)");
  sim_cmd->callback([&] {
    const pqfa::AutomatonSpec spec(sim.m, pqfa::variant_from_string(sim.variant));
    const pqfa::PhotonBudget budget(sim.nc, sim.ndc);
    const pqfa::RunConfig cfg{spec, budget, pqfa::Word{sim.k}, sim.reps, sim.seed};
    const std::vector<pqfa::RunRecord> records = pqfa::simulate_runs(cfg);
    const std::string path = resolve_out_path(sim.out, "simulate.csv");
    write_simulate_csv(path, cfg, records);

    std::uint64_t h = 0, v = 0, joint = 0;
    for (const pqfa::RunRecord& r : records) {
      h += r.accept_h ? 1 : 0;
      v += r.accept_v ? 1 : 0;
      joint += r.accept_joint ? 1 : 0;
    }
    const auto n = static_cast<double>(records.size());
    std::printf("wrote %s (%zu rows)\n", path.c_str(), records.size());
    std::printf("accept rates: H=%.3g V=%.3g Joint=%.3g\n",
                static_cast<double>(h) / n, static_cast<double>(v) / n,
                static_cast<double>(joint) / n);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
