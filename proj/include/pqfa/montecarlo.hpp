#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pqfa/photon_model.hpp"
#include "pqfa/strategies.hpp"

namespace pqfa {

namespace detail {

// splitmix64 output finalizer. Used only to derive well-separated stream
// seeds; the draws themselves come from std::mt19937_64, whose sequence is
// pinned by the standard and therefore identical across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of one engine output.
// Deliberately avoids std::uniform_real_distribution, whose mapping is
// implementation-defined and would break run-to-run reproducibility claims
// across standard libraries.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Multiplication method: count uniforms until their product drops below
// e^(-mu). Expected cost grows with mu, so it is only used for small means.
inline std::uint64_t poisson_small_mean(std::mt19937_64& gen, double mu) {
  const double limit = std::exp(-mu);
  double prod = 1.0;
  std::uint64_t k = 0;
  while (true) {
    prod *= uniform01(gen);
    if (prod <= limit) return k;
    ++k;
  }
}

// Transformed rejection with a table-free dominating distribution
// G(u) = (2a/(0.5 - |u|) + b) u + mu + 0.43 on u in [-0.5, 0.5].
// O(1) expected cost per draw; the constants keep the acceptance rate
// between roughly 75% (mu = 10) and 89% (large mu).
inline std::uint64_t poisson_transformed_rejection(std::mt19937_64& gen, double mu) {
  const double log_mu = std::log(mu);
  const double b = 0.931 + 2.53 * std::sqrt(mu);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  while (true) {
    const double u = uniform01(gen) - 0.5;
    const double v = uniform01(gen);
    const double us = 0.5 - std::abs(u);
    const double g = (2.0 * a / us + b) * u + mu + 0.43;
    // Guard before any cast: us == 0 sends g to -infinity.
    if (g < 0.0) continue;
    // Rectangle wholly below the acceptance curve: accept without logs.
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::uint64_t>(g);
    }
    // Cheap rejection near the fold points of the majorizing density.
    if (us < 0.013 && v > us) continue;
    const auto k = static_cast<std::uint64_t>(g);
    const double kk = static_cast<double>(k);
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = kk * log_mu - mu - std::lgamma(kk + 1.0);
    if (lhs <= rhs) return k;
  }
}

}  // namespace detail

/// Draw one exact Poisson variate with the given mean. Both regimes are
/// rejection-free in distribution (no normal approximation anywhere), so
/// empirical histograms converge to poisson_pmf at every mean.
inline std::uint64_t sample_poisson(std::mt19937_64& gen, double mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw std::domain_error("sample_poisson: mean must be finite and non-negative");
  }
  if (mu == 0.0) return 0;
  if (mu < 10.0) return detail::poisson_small_mean(gen, mu);
  return detail::poisson_transformed_rejection(gen, mu);
}

/// Numeric stream labels mixed into seeds. Distinct per detector so the H
/// and V counts of one repetition are independent draws.
inline std::uint64_t detector_stream_id(Detector detector) {
  return detector == Detector::kH ? 1u : 2u;
}

/// Derive the engine seed for one (word, detector, repetition) cell by
/// chaining the splitmix64 finalizer over the coordinates. Every cell gets
/// its own freshly seeded engine, so any subset of repetitions can be
/// reproduced without replaying the ones before it.
inline std::uint64_t stream_seed(std::uint64_t master, Word word, Detector detector,
                                 std::uint64_t rep) {
  std::uint64_t s = detail::mix64(master);
  s = detail::mix64(s ^ word.k);
  s = detail::mix64(s ^ detector_stream_id(detector));
  s = detail::mix64(s ^ rep);
  return s;
}

// One Monte Carlo experiment: repeated photon-counting runs of a fixed word
// through a fixed automaton and budget.
struct RunConfig {
  AutomatonSpec spec;
  PhotonBudget budget;
  Word word;
  std::uint64_t repetitions = 0;
  std::uint64_t seed = 0;
};

// Outcome of a single repetition: raw counts plus all three verdicts.
struct RunRecord {
  std::uint64_t rep = 0;
  DetectorCounts counts;
  bool accept_h = false;
  bool accept_v = false;
  bool accept_joint = false;
};

/// Simulate all repetitions of one experiment. Deterministic in the seed:
/// the same config always produces the same records, element for element.
inline std::vector<RunRecord> simulate_runs(const RunConfig& cfg) {
  if (cfg.repetitions == 0) {
    throw std::invalid_argument("simulate_runs: repetitions must be positive");
  }
  const MeanCounts mu = mean_counts(cfg.spec, cfg.word, cfg.budget);
  const ThresholdSet t = thresholds(cfg.spec, cfg.budget);

  std::vector<RunRecord> records;
  records.reserve(cfg.repetitions);
  for (std::uint64_t rep = 0; rep < cfg.repetitions; ++rep) {
    std::mt19937_64 gen_h(stream_seed(cfg.seed, cfg.word, Detector::kH, rep));
    std::mt19937_64 gen_v(stream_seed(cfg.seed, cfg.word, Detector::kV, rep));
    const DetectorCounts counts{sample_poisson(gen_h, mu.mu_h), sample_poisson(gen_v, mu.mu_v)};
    const bool h = detail::h_accepts(counts.n_h, t);
    const bool v = detail::v_accepts(counts.n_v, t);
    records.push_back({rep, counts, h, v, h && v});
  }
  return records;
}

// Comparison of an empirical error rate against its analytic prediction.
// std_error describes the spread of the estimate (from the observed rates);
// the agreement flag instead scales with the spread the analytic model
// predicts, so a run with zero observed errors is not judged against a
// collapsed zero-width band.
struct EmpiricalReport {
  StrategyKind strategy = StrategyKind::kH;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double reject_member_rate = 0.0;  // member word wrongly rejected
  double accept_worst_rate = 0.0;   // worst-case word wrongly accepted
  std::uint64_t repetitions = 0;
  bool agrees = false;  // |empirical - analytic| <= 3 model std errors
};

namespace detail {

inline bool same_experiment(const RunConfig& a, const RunConfig& b) {
  return a.spec.m() == b.spec.m() && a.spec.variant() == b.spec.variant() &&
         a.budget.mean_signal() == b.budget.mean_signal() &&
         a.budget.mean_dark() == b.budget.mean_dark() && a.repetitions == b.repetitions &&
         a.seed == b.seed;
}

}  // namespace detail

/// Estimate a strategy's equal-prior error rate from two simulated
/// experiments that differ only in the word: one member word and one
/// non-member word. The standard error treats the two misclassification
/// rates as independent binomial proportions.
inline EmpiricalReport empirical_error(StrategyKind strategy, const RunConfig& member,
                                       const RunConfig& worst) {
  if (!detail::same_experiment(member, worst)) {
    throw std::invalid_argument(
        "empirical_error: configurations must share automaton, budget, repetitions and seed");
  }
  if (!member.spec.in_language(member.word)) {
    throw std::invalid_argument("empirical_error: first configuration needs a member word");
  }
  if (worst.spec.in_language(worst.word)) {
    throw std::invalid_argument("empirical_error: second configuration needs a non-member word");
  }

  // Error events mirror misclassification_rates: for the joint rule a
  // wrong verdict must be unanimous, so detector disagreements count as
  // inconclusive rather than as errors.
  const auto wrongly_rejects = [strategy](const RunRecord& r) {
    switch (strategy) {
      case StrategyKind::kH: return !r.accept_h;
      case StrategyKind::kV: return !r.accept_v;
      case StrategyKind::kJoint:
        return joint_verdict(r.accept_h, r.accept_v) == JointVerdict::kReject;
    }
    throw std::logic_error("empirical_error: unknown strategy");
  };
  const auto wrongly_accepts = [strategy](const RunRecord& r) {
    switch (strategy) {
      case StrategyKind::kH: return r.accept_h;
      case StrategyKind::kV: return r.accept_v;
      case StrategyKind::kJoint:
        return joint_verdict(r.accept_h, r.accept_v) == JointVerdict::kAccept;
    }
    throw std::logic_error("empirical_error: unknown strategy");
  };

  std::uint64_t reject_member = 0;
  for (const RunRecord& r : simulate_runs(member)) {
    if (wrongly_rejects(r)) ++reject_member;
  }
  std::uint64_t accept_worst = 0;
  for (const RunRecord& r : simulate_runs(worst)) {
    if (wrongly_accepts(r)) ++accept_worst;
  }

  const auto n = static_cast<double>(member.repetitions);
  const auto binomial_se = [n](double p_reject, double p_accept) {
    return 0.5 * std::sqrt((p_reject * (1.0 - p_reject) + p_accept * (1.0 - p_accept)) / n);
  };

  EmpiricalReport report;
  report.strategy = strategy;
  report.repetitions = member.repetitions;
  report.reject_member_rate = static_cast<double>(reject_member) / n;
  report.accept_worst_rate = static_cast<double>(accept_worst) / n;
  report.empirical = 0.5 * (report.reject_member_rate + report.accept_worst_rate);
  report.std_error = binomial_se(report.reject_member_rate, report.accept_worst_rate);

  const MisclassificationRates rates = misclassification_rates(strategy, member.spec, member.budget);
  report.analytic = 0.5 * (rates.reject_member + rates.accept_worst);
  const double model_se = binomial_se(rates.reject_member, rates.accept_worst);
  report.agrees = std::abs(report.empirical - report.analytic) <= 3.0 * model_se + 1e-12;
  return report;
}

/// Convenience form: member word a^m versus the worst-case word a^1.
inline EmpiricalReport empirical_error(StrategyKind strategy, const AutomatonSpec& spec,
                                       const PhotonBudget& budget, std::uint64_t repetitions,
                                       std::uint64_t seed) {
  const RunConfig member{spec, budget, Word{spec.m()}, repetitions, seed};
  const RunConfig worst{spec, budget, kWorstCaseWord, repetitions, seed};
  return empirical_error(strategy, member, worst);
}

}  // namespace pqfa
