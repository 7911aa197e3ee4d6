#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>

#include "pqfa/automaton.hpp"
#include "pqfa/photon_model.hpp"
#include "pqfa/strategies.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace pqfa;

namespace {

const AutomatonSpec kM11{11};
const PhotonBudget kReferenceBudget{500.0, 100.0};

}  // namespace

TEST_CASE("strategy names", "[strategies]") {
  CHECK(std::string{to_string(StrategyKind::kH)} == "H");
  CHECK(std::string{to_string(StrategyKind::kV)} == "V");
  CHECK(std::string{to_string(StrategyKind::kJoint)} == "Joint");
}

TEST_CASE("decision rules at the threshold boundaries", "[strategies]") {
  const ThresholdSet t = thresholds(kM11, kReferenceBudget);
  REQUIRE(t.floor_h == 579);
  REQUIRE(t.floor_v == 118);

  // H accepts strictly above its floor.
  CHECK_FALSE(decide(StrategyKind::kH, {579, 0}, t).accept);
  CHECK(decide(StrategyKind::kH, {580, 0}, t).accept);
  CHECK_FALSE(decide(StrategyKind::kH, {0, 0}, t).accept);

  // V accepts at or below its floor.
  CHECK(decide(StrategyKind::kV, {0, 118}, t).accept);
  CHECK_FALSE(decide(StrategyKind::kV, {0, 119}, t).accept);
  CHECK(decide(StrategyKind::kV, {0, 0}, t).accept);

  // Joint accepts only on unanimity and reports both verdicts.
  const Decision both = decide(StrategyKind::kJoint, {580, 118}, t);
  CHECK(both.accept);
  REQUIRE(both.per_detector.has_value());
  CHECK(both.per_detector->first);
  CHECK(both.per_detector->second);

  const Decision h_only = decide(StrategyKind::kJoint, {580, 119}, t);
  CHECK_FALSE(h_only.accept);
  CHECK(h_only.per_detector == std::make_pair(true, false));

  const Decision v_only = decide(StrategyKind::kJoint, {579, 118}, t);
  CHECK_FALSE(v_only.accept);
  CHECK(v_only.per_detector == std::make_pair(false, true));

  const Decision neither = decide(StrategyKind::kJoint, {579, 119}, t);
  CHECK_FALSE(neither.accept);
  CHECK(neither.per_detector == std::make_pair(false, false));

  // Single-detector strategies carry no per-detector breakdown.
  CHECK_FALSE(decide(StrategyKind::kH, {580, 118}, t).per_detector.has_value());
  CHECK_FALSE(decide(StrategyKind::kV, {580, 118}, t).per_detector.has_value());
}

TEST_CASE("joint verdict distinguishes abstention from rejection", "[strategies]") {
  CHECK(joint_verdict(true, true) == JointVerdict::kAccept);
  CHECK(joint_verdict(false, false) == JointVerdict::kReject);
  CHECK(joint_verdict(true, false) == JointVerdict::kInconclusive);
  CHECK(joint_verdict(false, true) == JointVerdict::kInconclusive);
}

TEST_CASE("degenerate thresholds keep the decision rules total", "[strategies]") {
  // A negative H floor means no count can fail the H rule; a negative V
  // floor means no count can pass the V rule.
  const ThresholdSet degenerate{0.0, 0.0, -1, -1};
  CHECK(decide(StrategyKind::kH, {0, 0}, degenerate).accept);
  CHECK_FALSE(decide(StrategyKind::kV, {0, 0}, degenerate).accept);

  // The dark-free limit: a single V click rejects, zero clicks accept.
  const ThresholdSet dark_free = thresholds(kM11, PhotonBudget{500.0, 0.0});
  REQUIRE(dark_free.floor_v == 0);
  CHECK(decide(StrategyKind::kV, {0, 0}, dark_free).accept);
  CHECK_FALSE(decide(StrategyKind::kV, {0, 1}, dark_free).accept);
}

TEST_CASE("confusion matrices at the reference operating point", "[strategies]") {
  const ConfusionMatrix h = confusion_matrix(kM11, kReferenceBudget, Detector::kH);
  const ConfusionMatrix v = confusion_matrix(kM11, kReferenceBudget, Detector::kV);

  // Frozen from an independent high-precision evaluation of the Poisson
  // tails at the floored thresholds 579 and 118.
  CHECK_THAT(h.reject_given_member, WithinRel(0.20188728787710487, 1e-12));
  CHECK_THAT(h.accept_given_worst, WithinRel(0.20810976306761995, 1e-12));
  CHECK_THAT(v.reject_given_member, WithinRel(0.034903671828681294, 1e-12));
  CHECK_THAT(v.accept_given_worst, WithinRel(0.033883775244770035, 1e-12));

  // Each conditional row is a probability distribution.
  for (const ConfusionMatrix& c : {h, v}) {
    CHECK_THAT(c.accept_given_member + c.reject_given_member, WithinAbs(1.0, 1e-15));
    CHECK_THAT(c.accept_given_worst + c.reject_given_worst, WithinAbs(1.0, 1e-15));
    for (double p : {c.accept_given_member, c.reject_given_member,
                     c.accept_given_worst, c.reject_given_worst}) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }

  CHECK_THROWS_AS(confusion_matrix(kM11, PhotonBudget(0.0, 5.0), Detector::kH),
                  std::domain_error);
}

TEST_CASE("misclassification rates and the joint product rule", "[strategies]") {
  const MisclassificationRates h =
      misclassification_rates(StrategyKind::kH, kM11, kReferenceBudget);
  const MisclassificationRates v =
      misclassification_rates(StrategyKind::kV, kM11, kReferenceBudget);
  const MisclassificationRates j =
      misclassification_rates(StrategyKind::kJoint, kM11, kReferenceBudget);

  // Single-detector rates coincide with the confusion-matrix entries.
  const ConfusionMatrix ch = confusion_matrix(kM11, kReferenceBudget, Detector::kH);
  const ConfusionMatrix cv = confusion_matrix(kM11, kReferenceBudget, Detector::kV);
  CHECK(h.reject_member == ch.reject_given_member);
  CHECK(h.accept_worst == ch.accept_given_worst);
  CHECK(v.reject_member == cv.reject_given_member);
  CHECK(v.accept_worst == cv.accept_given_worst);

  // A joint error requires both detectors to err the same way; any
  // disagreement abstains and is not a misclassification.
  CHECK_THAT(j.reject_member, WithinRel(h.reject_member * v.reject_member, 1e-15));
  CHECK_THAT(j.accept_worst, WithinRel(h.accept_worst * v.accept_worst, 1e-15));
}

TEST_CASE("analytic error probabilities at the reference operating point",
          "[strategies]") {
  // Frozen equal-prior error probabilities.
  const ErrorProbabilities p = error_probabilities(kM11, kReferenceBudget);
  CHECK_THAT(p.p_h, WithinRel(0.2049985254723624, 1e-12));
  CHECK_THAT(p.p_v, WithinRel(0.034393723536725705, 1e-12));
  CHECK_THAT(p.p_joint, WithinRel(0.007049076040235276, 1e-12));
  CHECK(p.priors.p_worst == 0.5);
  CHECK(p.priors.p_member == 0.5);

  // The joint strategy beats both single detectors here.
  CHECK(p.p_v < p.p_h);
  CHECK(p.p_joint < std::min(p.p_h, p.p_v));

  // The dispatcher and the named functions agree.
  CHECK(error_probability(StrategyKind::kH, kM11, kReferenceBudget) == p.p_h);
  CHECK(error_probability(StrategyKind::kV, kM11, kReferenceBudget) == p.p_v);
  CHECK(error_probability(StrategyKind::kJoint, kM11, kReferenceBudget) == p.p_joint);

  // Equal priors average the two conditional misclassification rates.
  const MisclassificationRates h =
      misclassification_rates(StrategyKind::kH, kM11, kReferenceBudget);
  CHECK_THAT(p.p_h, WithinRel(0.5 * (h.reject_member + h.accept_worst), 1e-15));
}

TEST_CASE("priors weight the two error directions", "[strategies]") {
  const MisclassificationRates h =
      misclassification_rates(StrategyKind::kH, kM11, kReferenceBudget);

  const double member_only =
      error_probability_h(kM11, kReferenceBudget, Priors{.p_worst = 0.0, .p_member = 1.0});
  CHECK_THAT(member_only, WithinRel(h.reject_member, 1e-15));

  const double worst_only =
      error_probability_h(kM11, kReferenceBudget, Priors{.p_worst = 1.0, .p_member = 0.0});
  CHECK_THAT(worst_only, WithinRel(h.accept_worst, 1e-15));

  // A lopsided prior interpolates linearly.
  const Priors lopsided{.p_worst = 0.25, .p_member = 0.75};
  CHECK_THAT(error_probability_h(kM11, kReferenceBudget, lopsided),
             WithinRel(0.75 * h.reject_member + 0.25 * h.accept_worst, 1e-15));
}

TEST_CASE("binary-regime validity per strategy", "[strategies]") {
  // At the reference budget all strategies are in regime (minima 238 and
  // 151 photons for H and V at this dark level).
  CHECK(binary_regime_valid(StrategyKind::kH, kM11, kReferenceBudget));
  CHECK(binary_regime_valid(StrategyKind::kV, kM11, kReferenceBudget));
  CHECK(binary_regime_valid(StrategyKind::kJoint, kM11, kReferenceBudget));

  // At 200 signal photons only the V detector is separated, so the joint
  // strategy is out of regime too.
  const PhotonBudget small{200.0, 100.0};
  CHECK_FALSE(binary_regime_valid(StrategyKind::kH, kM11, small));
  CHECK(binary_regime_valid(StrategyKind::kV, kM11, small));
  CHECK_FALSE(binary_regime_valid(StrategyKind::kJoint, kM11, small));

  // With only two residue classes the problem is binary by construction.
  const AutomatonSpec m2{2};
  const PhotonBudget tiny{1.0, 0.0};
  CHECK(binary_regime_valid(StrategyKind::kH, m2, tiny));
  CHECK(binary_regime_valid(StrategyKind::kV, m2, tiny));
  CHECK(binary_regime_valid(StrategyKind::kJoint, m2, tiny));
}
