#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "pqfa/automaton.hpp"
#include "pqfa/photon_model.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace pqfa;

namespace {

// The reference operating point used throughout the suite: period 11 with a
// mean signal of 500 photons and 100 dark counts per detector.
const AutomatonSpec kM11{11};
const PhotonBudget kReferenceBudget{500.0, 100.0};

}  // namespace

TEST_CASE("photon budget validates and exposes its parameters", "[photon]") {
  CHECK_THROWS_AS(PhotonBudget(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PhotonBudget(10.0, -0.5), std::invalid_argument);

  const PhotonBudget budget{500.0, 100.0};
  CHECK(budget.mean_signal() == 500.0);
  CHECK(budget.mean_dark() == 100.0);
  CHECK_THAT(budget.eta(), WithinRel(0.2, 1e-15));

  const PhotonBudget dark_only{0.0, 5.0};
  CHECK_THROWS_AS(dark_only.eta(), std::domain_error);
  CHECK_THROWS_AS(dark_only.require_signal(), std::domain_error);
}

TEST_CASE("mean counts at the reference operating point", "[photon]") {
  // Member word: all signal reaches H, only dark counts reach V. The
  // acceptance probability is exactly 1 there, so the means are exact.
  const MeanCounts member = mean_counts(kM11, Word{11}, kReferenceBudget);
  CHECK(member.mu_h == 600.0);
  CHECK(member.mu_v == 100.0);

  // Worst-case word a^1: frozen from an independent high-precision
  // evaluation of 500 cos^2(pi/11) + 100 and its complement.
  const MeanCounts worst = mean_counts(kM11, kWorstCaseWord, kReferenceBudget);
  CHECK_THAT(worst.mu_h, WithinRel(560.3133832077953, 1e-13));
  CHECK_THAT(worst.mu_v, WithinRel(139.6866167922047, 1e-13));

  // The two detectors always share the full budget.
  for (std::uint64_t k = 0; k <= 22; ++k) {
    const MeanCounts mu = mean_counts(kM11, Word{k}, kReferenceBudget);
    INFO("k=" << k);
    REQUIRE_THAT(mu.mu_h + mu.mu_v, WithinAbs(700.0, 1e-9));
    REQUIRE(mu.mu_h >= 100.0);
    REQUIRE(mu.mu_v >= 100.0);
    REQUIRE(mu.mu_h <= 600.0);
    REQUIRE(mu.mu_v <= 600.0);
  }
}

TEST_CASE("worst-case word is the nearest non-member", "[photon]") {
  CHECK(kWorstCaseWord.k == 1);
  // No other non-member residue gets closer to the accepting state.
  const double p1 = accept_probability(kM11, kWorstCaseWord);
  for (std::uint64_t k = 2; k <= 10; ++k) {
    REQUIRE(accept_probability(kM11, Word{k}) <= p1);
  }
}

TEST_CASE("count distribution wraps the per-detector Poisson law", "[photon]") {
  const MeanCounts mu = mean_counts(kM11, Word{1}, kReferenceBudget);

  const CountDistribution h =
      count_distribution(kM11, Word{1}, kReferenceBudget, Detector::kH);
  const CountDistribution v =
      count_distribution(kM11, Word{1}, kReferenceBudget, Detector::kV);
  CHECK(h.mu == mu.mu_h);
  CHECK(v.mu == mu.mu_v);
  CHECK(h.pmf(560) == poisson_pmf(560, mu.mu_h));
  CHECK(h.cdf(579) == poisson_cdf(579, mu.mu_h));
  CHECK(v.pmf(118) == poisson_pmf(118, mu.mu_v));
  CHECK(v.cdf(118) == poisson_cdf(118, mu.mu_v));
}

TEST_CASE("count thresholds at the reference operating point", "[photon]") {
  const ThresholdSet t = thresholds(kM11, kReferenceBudget);

  // Equal-likelihood crossing points of the two Poisson hypotheses, frozen
  // from an independent high-precision evaluation of
  // (mu_hi - mu_lo) / (ln mu_hi - ln mu_lo).
  CHECK_THAT(t.n_th_h, WithinRel(579.93038504016033, 1e-13));
  CHECK_THAT(t.n_th_v, WithinRel(118.73998525843204, 1e-13));
  CHECK(t.floor_h == 579);
  CHECK(t.floor_v == 118);

  // The integer cutoffs are exactly the floors of the crossing points.
  CHECK(t.floor_h == static_cast<std::int64_t>(std::floor(t.n_th_h)));
  CHECK(t.floor_v == static_cast<std::int64_t>(std::floor(t.n_th_v)));

  // Thresholds sit strictly between the two hypothesis means.
  const MeanCounts member = mean_counts(kM11, Word{11}, kReferenceBudget);
  const MeanCounts worst = mean_counts(kM11, kWorstCaseWord, kReferenceBudget);
  CHECK(t.n_th_h > worst.mu_h);
  CHECK(t.n_th_h < member.mu_h);
  CHECK(t.n_th_v > member.mu_v);
  CHECK(t.n_th_v < worst.mu_v);

  CHECK_THROWS_AS(thresholds(kM11, PhotonBudget(0.0, 5.0)), std::domain_error);
}

TEST_CASE("dark-free V threshold takes the limit convention", "[photon]") {
  // Without dark counts the member word produces exactly zero V counts, so
  // the crossing point degenerates: a single V click already rejects.
  const PhotonBudget noiseless{500.0, 0.0};
  const ThresholdSet t = thresholds(kM11, noiseless);
  CHECK(t.n_th_v == 0.0);
  CHECK(t.floor_v == 0);
  CHECK(t.n_th_h > 0.0);
  CHECK(std::isfinite(t.n_th_h));

  // Even at period 2, where cos^2(pi/2) is a rounding-level residue rather
  // than an exact zero, the H threshold stays finite and positive.
  const ThresholdSet t2 = thresholds(AutomatonSpec{2}, noiseless);
  CHECK(t2.n_th_h > 0.0);
  CHECK(std::isfinite(t2.n_th_h));
}

TEST_CASE("threshold frequencies coincide with the cut point", "[photon]") {
  for (std::uint32_t m : {2u, 5u, 11u, 23u}) {
    const AutomatonSpec spec{m};
    const CutPoint cut = cut_point(spec);
    INFO("m=" << m);
    REQUIRE_THAT(threshold_frequency(spec, Detector::kH),
                 WithinRel(cut.lambda, 1e-15));
    REQUIRE_THAT(threshold_frequency(spec, Detector::kV),
                 WithinAbs(cut.rho, 1e-15));
  }
}

TEST_CASE("detection frequency normalizes by the signal mean", "[photon]") {
  CHECK_THAT(detection_frequency(560, kReferenceBudget),
             WithinRel(1.12, 1e-15));
  CHECK(detection_frequency(0, kReferenceBudget) == 0.0);
  CHECK_THROWS_AS(detection_frequency(3, PhotonBudget(0.0, 5.0)),
                  std::domain_error);
}

TEST_CASE("ideal-regime minimum photon numbers", "[photon]") {
  // Frozen smallest integer signal means for which the floored frequency
  // threshold separates the noiseless expected counts.
  const std::tuple<std::uint32_t, std::uint64_t, std::uint64_t> expected[] = {
      {2, 2, 1}, {5, 3, 3}, {11, 13, 13}, {23, 54, 54}};
  for (const auto& [m, min_h, min_v] : expected) {
    const AutomatonSpec spec{m};
    INFO("m=" << m);
    CHECK(ideal_min_photons(spec, Detector::kH) == min_h);
    CHECK(ideal_min_photons(spec, Detector::kV) == min_v);

    // Minimality: the defining floor inequality holds at the reported value
    // and fails for every smaller positive integer.
    const double c2 = std::cos(spec.theta()) * std::cos(spec.theta());
    const double s2 = 1.0 - c2;
    const auto separates = [&](std::uint64_t nc, Detector d) {
      const double x = static_cast<double>(nc);
      if (d == Detector::kH) {
        return std::floor(x * (1.0 + c2) / 2.0) > std::floor(x * c2);
      }
      return std::floor(x * s2 / 2.0) < std::floor(x * s2);
    };
    CHECK(separates(min_h, Detector::kH));
    CHECK(separates(min_v, Detector::kV));
    for (std::uint64_t nc = 1; nc < min_h; ++nc) {
      REQUIRE_FALSE(separates(nc, Detector::kH));
    }
    for (std::uint64_t nc = 1; nc < min_v; ++nc) {
      REQUIRE_FALSE(separates(nc, Detector::kV));
    }
  }

  // A scan cap below the answer is reported, not silently absorbed.
  CHECK_THROWS_AS(ideal_min_photons(kM11, Detector::kH, 5),
                  std::runtime_error);
}

TEST_CASE("binary-regime minimum photon numbers", "[photon]") {
  // Frozen smallest integer signal means giving a two-standard-deviation
  // gap between the second-worst word's count cloud and the decision
  // hypothesis, for each (m, dark mean) pair.
  struct Case {
    std::uint32_t m;
    double ndc;
    std::uint64_t min_h;
    std::uint64_t min_v;
  };
  const Case cases[] = {
      {5, 0.0, 9, 5},      {5, 100.0, 50, 49},   {11, 0.0, 159, 14},
      {11, 100.0, 238, 151}, {23, 0.0, 2909, 55}, {23, 100.0, 3010, 605}};
  for (const auto& c : cases) {
    const AutomatonSpec spec{c.m};
    INFO("m=" << c.m << " ndc=" << c.ndc);
    CHECK(binary_regime_min_photons(spec, c.ndc, Detector::kH) == c.min_h);
    CHECK(binary_regime_min_photons(spec, c.ndc, Detector::kV) == c.min_v);

    // Minimality against an inline restatement of the separation criterion.
    const double t2 = 2.0 * spec.theta();
    const double c2 = std::cos(t2) * std::cos(t2);
    const double s2 = std::sin(t2) * std::sin(t2);
    const auto separated = [&](std::uint64_t nc, Detector d) {
      const double x = static_cast<double>(nc);
      if (d == Detector::kH) {
        const double lo = x * c2 + c.ndc;
        const double hi = x + c.ndc;
        return lo + 2.0 * std::sqrt(lo) < hi - 2.0 * std::sqrt(hi);
      }
      const double hi = x * s2 + c.ndc;
      return c.ndc + 2.0 * std::sqrt(c.ndc) < hi - 2.0 * std::sqrt(hi);
    };
    CHECK(separated(c.min_h, Detector::kH));
    CHECK(separated(c.min_v, Detector::kV));
    CHECK_FALSE(separated(c.min_h - 1, Detector::kH));
    CHECK_FALSE(separated(c.min_v - 1, Detector::kV));
  }

  // Period 2 has no second-worst residue class; the question is ill-posed.
  CHECK_THROWS_AS(binary_regime_min_photons(AutomatonSpec{2}, 0.0, Detector::kH),
                  std::domain_error);
  CHECK_THROWS_AS(binary_regime_min_photons(kM11, -1.0, Detector::kV),
                  std::domain_error);
  CHECK_THROWS_AS(binary_regime_min_photons(kM11, 100.0, Detector::kH, 10),
                  std::runtime_error);
}
