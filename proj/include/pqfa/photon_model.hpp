#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "pqfa/automaton.hpp"
#include "pqfa/special_functions.hpp"

namespace pqfa {

// The two output ports of the polarizing beam splitter.
enum class Detector { kH, kV };

inline const char* to_string(Detector d) { return d == Detector::kH ? "H" : "V"; }

/// Photon budget of one experimental run: the mean number of signal photons
/// sent through the device and the mean dark counts registered per detector.
class PhotonBudget {
 public:
  PhotonBudget(double mean_signal, double mean_dark)
      : mean_signal_(mean_signal), mean_dark_(mean_dark) {
    if (mean_signal < 0.0 || mean_dark < 0.0) {
      throw std::invalid_argument("PhotonBudget: means must be non-negative");
    }
  }

  [[nodiscard]] double mean_signal() const { return mean_signal_; }
  [[nodiscard]] double mean_dark() const { return mean_dark_; }

  /// Dark-to-signal ratio eta = <N_dc> / <N_c>.
  [[nodiscard]] double eta() const {
    require_signal();
    return mean_dark_ / mean_signal_;
  }

  void require_signal() const {
    if (mean_signal_ <= 0.0) {
      throw std::domain_error("PhotonBudget: operation requires mean_signal > 0");
    }
  }

 private:
  double mean_signal_;
  double mean_dark_;
};

/// Overall Poisson means at the two detectors for a word a^k: the signal
/// splits as cos^2/sin^2 of the accumulated rotation, and each detector adds
/// its own dark-count mean.
struct MeanCounts {
  double mu_h = 0.0;
  double mu_v = 0.0;
  std::uint64_t k = 0;
};

/// Count distribution at one detector. Signal and dark counts are both
/// Poissonian and independent, so their sum is Poisson with the summed mean;
/// no numeric convolution is ever needed.
struct CountDistribution {
  double mu = 0.0;

  [[nodiscard]] double pmf(std::uint64_t n) const { return poisson_pmf(n, mu); }
  [[nodiscard]] double cdf(std::uint64_t n) const { return poisson_cdf(n, mu); }
};

/// Decision thresholds for both detectors: the count where the two
/// hypothesis pmfs (word in the language vs worst-case word) intersect,
/// plus the integer floors actually compared against.
struct ThresholdSet {
  double n_th_h = 0.0;
  double n_th_v = 0.0;
  std::int64_t floor_h = 0;
  std::int64_t floor_v = 0;
};

inline MeanCounts mean_counts(const AutomatonSpec& spec, Word word, const PhotonBudget& budget) {
  const double p = accept_probability(spec, word);
  return {budget.mean_signal() * p + budget.mean_dark(),
          budget.mean_signal() * (1.0 - p) + budget.mean_dark(), word.k};
}

inline CountDistribution count_distribution(const AutomatonSpec& spec, Word word,
                                            const PhotonBudget& budget, Detector detector) {
  const MeanCounts mu = mean_counts(spec, word, budget);
  return {detector == Detector::kH ? mu.mu_h : mu.mu_v};
}

// Representative worst-case word, k mod m = 1. Its mirror residue m-1 maps
// to the same means by periodicity.
inline constexpr Word kWorstCaseWord{1};

namespace detail {

// Intersection of two Poisson pmfs: (mu_a - mu_b) / (ln mu_a - ln mu_b).
// When the smaller mean is zero the intersection degenerates; the limit of
// the closed form is 0, so only a count of exactly zero sits below it.
inline double pmf_intersection(double mu_low, double mu_high) {
  if (mu_low <= 0.0) return 0.0;
  return (mu_high - mu_low) / (std::log(mu_high) - std::log(mu_low));
}

}  // namespace detail

/// Exact decision thresholds for both detectors at the given budget.
///
/// H discriminates mu_m^H (word in language) from mu_k1^H (worst case);
/// V discriminates the dark-count mean from mu_k1^V.
inline ThresholdSet thresholds(const AutomatonSpec& spec, const PhotonBudget& budget) {
  budget.require_signal();
  const MeanCounts in_lang = mean_counts(spec, Word{0}, budget);
  const MeanCounts worst = mean_counts(spec, kWorstCaseWord, budget);
  const double n_th_h = detail::pmf_intersection(worst.mu_h, in_lang.mu_h);
  const double n_th_v = detail::pmf_intersection(in_lang.mu_v, worst.mu_v);
  return {n_th_h, n_th_v, static_cast<std::int64_t>(std::floor(n_th_h)),
          static_cast<std::int64_t>(std::floor(n_th_v))};
}

/// Threshold on the detection frequency f = counts / <N_c>: midway between
/// the frequency of the correct word and the worst erroneously accepted one.
inline double threshold_frequency(const AutomatonSpec& spec, Detector detector) {
  const double c = std::cos(spec.theta());
  const double c2 = c * c;
  return detector == Detector::kH ? (1.0 + c2) / 2.0 : (1.0 - c2) / 2.0;
}

/// Observed detection frequency. May exceed 1 under dark counts.
inline double detection_frequency(std::uint64_t counts, const PhotonBudget& budget) {
  budget.require_signal();
  return static_cast<double>(counts) / budget.mean_signal();
}

namespace detail {

inline constexpr std::uint64_t kDefaultScanCap = 10'000'000;

[[noreturn]] inline void throw_capped_scan(const char* what) {
  throw std::runtime_error(std::string(what) + ": no solution found below the scan cap");
}

}  // namespace detail

/// Least integer mean photon number that makes the noiseless decision exact:
/// the floor of the frequency threshold must separate the two words'
/// expected counts.
inline std::uint64_t ideal_min_photons(const AutomatonSpec& spec, Detector detector,
                                       std::uint64_t scan_cap = detail::kDefaultScanCap) {
  const double c = std::cos(spec.theta());
  const double c2 = c * c;
  const double s2 = 1.0 - c2;
  for (std::uint64_t nc = 1; nc <= scan_cap; ++nc) {
    const double x = static_cast<double>(nc);
    if (detector == Detector::kH) {
      if (std::floor(x * (1.0 + c2) / 2.0) > std::floor(x * c2)) return nc;
    } else {
      if (std::floor(x * s2 / 2.0) < std::floor(x * s2)) return nc;
    }
  }
  detail::throw_capped_scan("ideal_min_photons");
}

/// Least integer mean photon number for which the second-worst word's count
/// cloud sits at least two standard deviations away from the relevant
/// hypothesis, so the acceptance problem is faithfully binary.
///
/// Requires m >= 3: with m = 2 there is no residue class 2 and no
/// second-worst word to separate.
inline std::uint64_t binary_regime_min_photons(const AutomatonSpec& spec, double mean_dark,
                                               Detector detector,
                                               std::uint64_t scan_cap = detail::kDefaultScanCap) {
  if (spec.m() < 3) {
    throw std::domain_error("binary_regime_min_photons: requires m >= 3");
  }
  if (mean_dark < 0.0) {
    throw std::domain_error("binary_regime_min_photons: mean_dark must be non-negative");
  }
  const double theta2 = 2.0 * spec.theta();
  const double c2 = std::cos(theta2) * std::cos(theta2);
  const double s2 = std::sin(theta2) * std::sin(theta2);
  for (std::uint64_t nc = 1; nc <= scan_cap; ++nc) {
    const double x = static_cast<double>(nc);
    if (detector == Detector::kH) {
      const double mu_k2 = x * c2 + mean_dark;
      const double mu_m = x + mean_dark;
      if (mu_k2 + 2.0 * std::sqrt(mu_k2) < mu_m - 2.0 * std::sqrt(mu_m)) return nc;
    } else {
      const double mu_k2 = x * s2 + mean_dark;
      if (mean_dark + 2.0 * std::sqrt(mean_dark) < mu_k2 - 2.0 * std::sqrt(mu_k2)) return nc;
    }
  }
  detail::throw_capped_scan("binary_regime_min_photons");
}

}  // namespace pqfa
