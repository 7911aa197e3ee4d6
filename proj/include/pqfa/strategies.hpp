#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pqfa/photon_model.hpp"

namespace pqfa {

// How the observed counts are turned into an accept/reject verdict.
enum class StrategyKind { kH, kV, kJoint };

inline const char* to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::kH: return "H";
    case StrategyKind::kV: return "V";
    case StrategyKind::kJoint: return "Joint";
  }
  return "?";
}

// Click totals observed at the two detectors in one run.
struct DetectorCounts {
  std::uint64_t n_h = 0;
  std::uint64_t n_v = 0;
};

// Verdict of a strategy. For the joint strategy the two single-detector
// verdicts are kept so a disagreement between detectors stays visible.
struct Decision {
  bool accept = false;
  std::optional<std::pair<bool, bool>> per_detector;  // (H verdict, V verdict), Joint only
};

// The joint rule is a unanimity vote: it commits to a verdict only when
// both detectors agree, and abstains otherwise. Its error probability is
// the chance of a unanimous wrong verdict; disagreements are inconclusive,
// not errors.
enum class JointVerdict { kAccept, kReject, kInconclusive };

inline JointVerdict joint_verdict(bool h_accepts, bool v_accepts) {
  if (h_accepts && v_accepts) return JointVerdict::kAccept;
  if (!h_accepts && !v_accepts) return JointVerdict::kReject;
  return JointVerdict::kInconclusive;
}

// Prior probabilities of the two hypotheses: (worst-case word a^k1, member
// word a^m). Equal priors unless stated otherwise.
struct Priors {
  double p_worst = 0.5;
  double p_member = 0.5;
};

// Analytic error probabilities of the three strategies at one configuration.
struct ErrorProbabilities {
  double p_h = 0.0;
  double p_v = 0.0;
  double p_joint = 0.0;
  Priors priors;
};

// The four conditional outcome probabilities of one detector's rule, for the
// member word a^m and the worst-case word a^k1. Rows sum to 1.
struct ConfusionMatrix {
  double accept_given_member = 0.0;
  double reject_given_member = 0.0;
  double accept_given_worst = 0.0;
  double reject_given_worst = 0.0;
};

namespace detail {

// Boundary convention shared by decisions and the analytic error formulas:
// the rejection (H) resp. acceptance (V) region runs up to and including the
// floored threshold, so Monte Carlo decisions match the formulas exactly.
inline bool h_accepts(std::uint64_t n_h, const ThresholdSet& t) {
  return t.floor_h < 0 || n_h > static_cast<std::uint64_t>(t.floor_h);
}

inline bool v_accepts(std::uint64_t n_v, const ThresholdSet& t) {
  return t.floor_v >= 0 && n_v <= static_cast<std::uint64_t>(t.floor_v);
}

}  // namespace detail

/// Apply a strategy's decision rule to observed counts.
/// H accepts strictly above its floored threshold, V accepts at or below
/// its own, and Joint accepts only when both do (a non-accept of the joint
/// rule is a definite reject only if both detectors reject; see
/// joint_verdict for the three-way reading).
inline Decision decide(StrategyKind strategy, DetectorCounts counts, const ThresholdSet& t) {
  switch (strategy) {
    case StrategyKind::kH:
      return {detail::h_accepts(counts.n_h, t), std::nullopt};
    case StrategyKind::kV:
      return {detail::v_accepts(counts.n_v, t), std::nullopt};
    case StrategyKind::kJoint: {
      const bool h = detail::h_accepts(counts.n_h, t);
      const bool v = detail::v_accepts(counts.n_v, t);
      return {h && v, std::make_pair(h, v)};
    }
  }
  throw std::logic_error("decide: unknown strategy");
}

/// Conditional outcome probabilities of one detector's rule under the two
/// hypotheses a^m and a^k1.
inline ConfusionMatrix confusion_matrix(const AutomatonSpec& spec, const PhotonBudget& budget,
                                        Detector detector) {
  budget.require_signal();
  const ThresholdSet t = thresholds(spec, budget);
  const MeanCounts member = mean_counts(spec, Word{0}, budget);
  const MeanCounts worst = mean_counts(spec, kWorstCaseWord, budget);

  if (detector == Detector::kH) {
    const auto floor_h = static_cast<std::uint64_t>(t.floor_h);
    const double reject_member = poisson_cdf(floor_h, member.mu_h);
    const double accept_worst = poisson_sf(floor_h, worst.mu_h);
    return {1.0 - reject_member, reject_member, accept_worst, 1.0 - accept_worst};
  }
  const auto floor_v = static_cast<std::uint64_t>(t.floor_v);
  const double accept_member = poisson_cdf(floor_v, member.mu_v);
  const double accept_worst = poisson_cdf(floor_v, worst.mu_v);
  return {accept_member, 1.0 - accept_member, accept_worst, 1.0 - accept_worst};
}

// The two conditional misclassification probabilities of a strategy:
// rejecting the member word a^m and accepting the worst-case word a^k1.
struct MisclassificationRates {
  double reject_member = 0.0;
  double accept_worst = 0.0;
};

/// Conditional misclassification rates of a strategy. For the joint rule a
/// wrong verdict needs both detectors to err in the same direction (any
/// disagreement abstains), so each rate is the product of the two
/// detectors' independent confusion probabilities.
inline MisclassificationRates misclassification_rates(StrategyKind strategy,
                                                      const AutomatonSpec& spec,
                                                      const PhotonBudget& budget) {
  switch (strategy) {
    case StrategyKind::kH: {
      const ConfusionMatrix c = confusion_matrix(spec, budget, Detector::kH);
      return {c.reject_given_member, c.accept_given_worst};
    }
    case StrategyKind::kV: {
      const ConfusionMatrix c = confusion_matrix(spec, budget, Detector::kV);
      return {c.reject_given_member, c.accept_given_worst};
    }
    case StrategyKind::kJoint: {
      const ConfusionMatrix h = confusion_matrix(spec, budget, Detector::kH);
      const ConfusionMatrix v = confusion_matrix(spec, budget, Detector::kV);
      return {h.reject_given_member * v.reject_given_member,
              h.accept_given_worst * v.accept_given_worst};
    }
  }
  throw std::logic_error("misclassification_rates: unknown strategy");
}

namespace detail {

inline double weighted_error(const MisclassificationRates& rates, Priors priors) {
  return priors.p_member * rates.reject_member + priors.p_worst * rates.accept_worst;
}

}  // namespace detail

/// Error probability of the H strategy: prior-weighted sum of rejecting a^m
/// and accepting a^k1, both read off the H detector.
inline double error_probability_h(const AutomatonSpec& spec, const PhotonBudget& budget,
                                  Priors priors = {}) {
  return detail::weighted_error(misclassification_rates(StrategyKind::kH, spec, budget), priors);
}

/// Error probability of the V strategy.
inline double error_probability_v(const AutomatonSpec& spec, const PhotonBudget& budget,
                                  Priors priors = {}) {
  return detail::weighted_error(misclassification_rates(StrategyKind::kV, spec, budget), priors);
}

/// Error probability of the joint strategy.
inline double error_probability_joint(const AutomatonSpec& spec, const PhotonBudget& budget,
                                      Priors priors = {}) {
  return detail::weighted_error(misclassification_rates(StrategyKind::kJoint, spec, budget),
                                priors);
}

inline ErrorProbabilities error_probabilities(const AutomatonSpec& spec,
                                              const PhotonBudget& budget, Priors priors = {}) {
  return {error_probability_h(spec, budget, priors), error_probability_v(spec, budget, priors),
          error_probability_joint(spec, budget, priors), priors};
}

inline double error_probability(StrategyKind strategy, const AutomatonSpec& spec,
                                const PhotonBudget& budget, Priors priors = {}) {
  switch (strategy) {
    case StrategyKind::kH: return error_probability_h(spec, budget, priors);
    case StrategyKind::kV: return error_probability_v(spec, budget, priors);
    case StrategyKind::kJoint: return error_probability_joint(spec, budget, priors);
  }
  throw std::logic_error("error_probability: unknown strategy");
}

/// Whether the budget is large enough that treating acceptance as a binary
/// discrimination between a^m and a^k1 is faithful for this strategy.
/// Analytic error values below the minimum are still computable but should
/// be treated as unreliable. For m = 2 only two residue classes exist, so
/// the problem is binary by construction.
inline bool binary_regime_valid(StrategyKind strategy, const AutomatonSpec& spec,
                                const PhotonBudget& budget) {
  if (spec.m() < 3) return true;
  const double nc = budget.mean_signal();
  const auto valid_for = [&](Detector d) {
    return nc >= static_cast<double>(binary_regime_min_photons(spec, budget.mean_dark(), d));
  };
  switch (strategy) {
    case StrategyKind::kH: return valid_for(Detector::kH);
    case StrategyKind::kV: return valid_for(Detector::kV);
    case StrategyKind::kJoint: return valid_for(Detector::kH) && valid_for(Detector::kV);
  }
  throw std::logic_error("binary_regime_valid: unknown strategy");
}

}  // namespace pqfa
