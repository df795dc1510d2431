#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace kb {

/// Raised when an arithmetic convention of the extended nonnegative
/// rationals is violated (0·∞, negative values, ∞ − ∞, 0 reciprocals).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact nonnegative rational extended with a single point at infinity.
///
/// Conventions: a + ∞ = ∞, a·∞ = ∞ for a > 0, 1/∞ = 0. The product 0·∞ and
/// the reciprocal of 0 are rejected with DomainError.
class ExtendedNonNeg {
 public:
  ExtendedNonNeg() = default;
  ExtendedNonNeg(const mpq_class& v);  // NOLINT(google-explicit-constructor)
  ExtendedNonNeg(long v);              // NOLINT(google-explicit-constructor)

  static ExtendedNonNeg infinity();
  /// Parses "inf", an integer, "p/q" or a decimal like "0.25".
  static ExtendedNonNeg parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && sgn(value_) == 0; }
  /// Finite value; throws DomainError on ∞.
  const mpq_class& value() const;

  ExtendedNonNeg reciprocal() const;

  friend ExtendedNonNeg operator+(const ExtendedNonNeg& a, const ExtendedNonNeg& b);
  friend ExtendedNonNeg operator*(const ExtendedNonNeg& a, const ExtendedNonNeg& b);
  ExtendedNonNeg& operator+=(const ExtendedNonNeg& other);

  friend bool operator==(const ExtendedNonNeg& a, const ExtendedNonNeg& b);
  friend std::strong_ordering operator<=>(const ExtendedNonNeg& a, const ExtendedNonNeg& b);

  /// Canonical rendering: "inf", "3", "3/4".
  std::string str() const;
  /// Table rendering: "inf" or always "p/q" (integers as "p/1").
  std::string fraction_str() const;

 private:
  mpq_class value_{0};
  bool infinite_ = false;
};

/// Saturating difference max(a − b, 0); ∞ − ∞ throws.
ExtendedNonNeg monus(const ExtendedNonNeg& a, const ExtendedNonNeg& b);

/// Three-valued verdict for comparisons between enclosures.
enum class Tri { True, False, Unknown };

const char* to_string(Tri t);

/// Closed enclosure [lo, hi] of an extended nonnegative value. Exact values
/// are degenerate intervals.
class Interval {
 public:
  Interval() = default;
  Interval(ExtendedNonNeg exact);  // NOLINT(google-explicit-constructor)
  Interval(const mpq_class& exact) : Interval(ExtendedNonNeg(exact)) {}  // NOLINT
  Interval(long exact) : Interval(ExtendedNonNeg(exact)) {}              // NOLINT
  Interval(ExtendedNonNeg lo, ExtendedNonNeg hi);

  static Interval infinity() { return Interval(ExtendedNonNeg::infinity()); }

  const ExtendedNonNeg& lo() const { return lo_; }
  const ExtendedNonNeg& hi() const { return hi_; }
  bool exact() const { return lo_ == hi_; }
  /// hi − lo, with ∞ when only hi is infinite and 0 when both are.
  ExtendedNonNeg width() const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  Interval& operator+=(const Interval& other);
  friend bool operator==(const Interval& a, const Interval& b) = default;

  /// "p/q" for exact values, "[lo;hi]" otherwise.
  std::string str() const;
  std::string fraction_str() const;

 private:
  ExtendedNonNeg lo_;
  ExtendedNonNeg hi_;
};

ExtendedNonNeg scale(const mpq_class& k, const ExtendedNonNeg& v);
Interval scale(const mpq_class& k, const Interval& v);
Interval max(const Interval& a, const Interval& b);

/// a ≤ b: True when a.hi ≤ b.lo, False when a.lo > b.hi, otherwise Unknown.
Tri certainly_leq(const Interval& a, const Interval& b);
inline Tri certainly_leq(const ExtendedNonNeg& a, const ExtendedNonNeg& b) {
  return a <= b ? Tri::True : Tri::False;
}

/// Outward-rounded dyadic enclosure of log2(x) for x > 0 with `frac_bits`
/// fractional bits. Exact for powers of two. The result may be negative.
std::pair<mpq_class, mpq_class> log2_enclosure(const mpq_class& x, unsigned frac_bits);

/// Outward-rounded dyadic enclosure of x^r for x ≥ 0. Exact for integer r.
std::pair<mpq_class, mpq_class> pow_enclosure(const mpq_class& x, const mpq_class& r,
                                              unsigned frac_bits);

mpq_class pow2(long exponent);
bool is_power_of_two(const mpz_class& v);

}  // namespace kb
