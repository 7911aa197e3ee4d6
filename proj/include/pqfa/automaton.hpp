#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pqfa {

// Which of the two formally equivalent automaton definitions is in use.
// Both accept a unary word a^k with probability cos^2(k*pi/m); the variant
// only matters downstream, where it selects which detector a measurement
// strategy reads.
enum class Variant {
  kA1HProjector,   // accepting projector onto |H>
  kA2VComplement,  // identity minus the projector onto |V>
};

inline const char* to_string(Variant v) {
  return v == Variant::kA1HProjector ? "A1" : "A2";
}

/// Parse the short variant labels used on the command line and in output
/// metadata. Throws std::invalid_argument for anything else.
inline Variant variant_from_string(const std::string& name) {
  if (name == "A1" || name == "a1") return Variant::kA1HProjector;
  if (name == "A2" || name == "a2") return Variant::kA2VComplement;
  throw std::invalid_argument("variant_from_string: expected A1 or A2, got '" + name + "'");
}

// A unary input word a^k.
struct Word {
  std::uint64_t k = 0;
};

// Polarization state of the automaton qubit. Amplitudes are real by
// construction of the rotation unitary.
struct QfaState {
  double amp_h = 1.0;
  double amp_v = 0.0;

  [[nodiscard]] double norm_squared() const { return amp_h * amp_h + amp_v * amp_v; }
};

// Cut point lambda with isolation rho: words in the language are accepted
// with probability >= lambda + rho, words outside with probability
// <= lambda - rho. They satisfy lambda + rho = 1.
struct CutPoint {
  double lambda = 0.0;
  double rho = 0.0;
};

// 2x2 real matrix, row-major.
struct Mat2 {
  double m00 = 1.0, m01 = 0.0;
  double m10 = 0.0, m11 = 1.0;

  [[nodiscard]] double determinant() const { return m00 * m11 - m01 * m10; }

  [[nodiscard]] std::array<double, 2> apply(const std::array<double, 2>& v) const {
    return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]};
  }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
  }
};

/// The one-qubit automaton recognizing L_m = { a^k : k mod m = 0 }.
///
/// Each input symbol rotates the polarization by theta = pi/m. The rotation
/// angle is always derived from m, never stored independently.
class AutomatonSpec {
 public:
  explicit AutomatonSpec(std::uint32_t m, Variant variant = Variant::kA1HProjector)
      : m_(m), variant_(variant) {
    // m = 1 collapses every acceptance probability to 1 and leaves no
    // worst-case word to discriminate against.
    if (m < 2) {
      throw std::invalid_argument("AutomatonSpec: language modulus m must be >= 2, got " +
                                  std::to_string(m));
    }
  }

  [[nodiscard]] std::uint32_t m() const { return m_; }
  [[nodiscard]] Variant variant() const { return variant_; }
  [[nodiscard]] double theta() const { return std::numbers::pi / static_cast<double>(m_); }

  [[nodiscard]] bool in_language(Word word) const { return word.k % m_ == 0; }

 private:
  std::uint32_t m_;
  Variant variant_;
};

/// Rotation applied per input symbol: exp(-i*theta*sigma_y) as a real matrix,
/// turning |H> toward |V> by theta per letter.
inline Mat2 unitary_matrix(const AutomatonSpec& spec) {
  const double c = std::cos(spec.theta());
  const double s = std::sin(spec.theta());
  return {c, -s, s, c};
}

/// State after processing a^k, starting from |H>.
///
/// The state vector has period 2m in k (the acceptance probability has
/// period m); k is reduced mod 2m before the trigonometric evaluation so
/// huge word lengths lose no precision, while the global sign still matches
/// the k-fold product of unitary_matrix.
inline QfaState evolve(const AutomatonSpec& spec, Word word) {
  const std::uint64_t r = word.k % (2ull * spec.m());
  const double angle = static_cast<double>(r) * spec.theta();
  return {std::cos(angle), std::sin(angle)};
}

/// Probability that the automaton accepts a^k: cos^2(k*theta).
///
/// Identical for both variants. Exactly 1 when k mod m = 0, and at most
/// cos^2(theta) otherwise.
inline double accept_probability(const AutomatonSpec& spec, Word word) {
  const std::uint64_t r = word.k % spec.m();
  const double c = std::cos(static_cast<double>(r) * spec.theta());
  return c * c;
}

/// Cut point and isolation for recognizing L_m with the single-shot rule.
inline CutPoint cut_point(const AutomatonSpec& spec) {
  const double c = std::cos(spec.theta());
  const double c2 = c * c;
  return {(1.0 + c2) / 2.0, (1.0 - c2) / 2.0};
}

}  // namespace pqfa
