#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtj/field.hpp"
#include "qtj/poly.hpp"

namespace qtj {

/// Absolute value on k_infinity, recorded as a power of q. Besides exact
/// values q^e and exact zero there is a third state for quantities that vanish
/// at the retained precision: below(e) means only |x| < q^e is known.
class AbsValue {
 public:
  enum class Kind { Power, Zero, Below };

  static AbsValue power(long long e) { return AbsValue(Kind::Power, e); }
  static AbsValue zero() { return AbsValue(Kind::Zero, 0); }
  static AbsValue below(long long e) { return AbsValue(Kind::Below, e); }

  Kind kind() const { return kind_; }
  bool is_power() const { return kind_ == Kind::Power; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_below() const { return kind_ == Kind::Below; }
  /// The exponent e of q^e, or the strict bound of below(e).
  long long log_q() const { return e_; }

  /// Decides |x| < q^e; nullopt when the retained precision cannot tell.
  std::optional<bool> less_than_power(long long e) const;

  friend AbsValue operator*(const AbsValue& a, const AbsValue& b);
  friend bool operator==(const AbsValue&, const AbsValue&) = default;
  /// Unordered whenever a below() bound straddles the other operand.
  friend std::partial_ordering operator<=>(const AbsValue& a, const AbsValue& b);

  /// "q^-3", "0", "<q^-20".
  std::string to_string() const;

 private:
  AbsValue(Kind k, long long e) : kind_(k), e_(e) {}
  Kind kind_;
  long long e_;
};

/// Element of k_infinity = F_q((1/T)) known to a fixed absolute floor: the
/// coefficients of T^e are known for every e >= -prec, everything below is
/// unknown. Coefficients are stored from the floor upward and trimmed at the
/// top, so an empty store means "zero at this precision".
///
/// Every operation propagates the floor exactly (no guard digits): addition
/// keeps the higher of the two floors, multiplication loses |other| worth of
/// precision, inversion of x with |x| = q^e moves the floor by -2e.
class Laurent {
 public:
  /// Zero known to exponent -prec.
  Laurent(FieldPtr field, long long prec);

  static Laurent from_poly(const Poly& p, long long prec);
  static Laurent monomial(FieldPtr field, Fq c, long long exponent, long long prec);
  static Laurent one(FieldPtr field, long long prec) { return monomial(std::move(field), Field::one(), 0, prec); }
  /// Coefficients listed from T^top downward.
  static Laurent from_descending(FieldPtr field, long long top, const std::vector<Fq>& coeffs, long long prec);

  const FieldPtr& field() const { return field_; }
  const Field& F() const { return *field_; }

  long long prec() const { return -floor_; }
  /// Lowest exponent whose coefficient is known.
  long long floor() const { return floor_; }
  bool is_zero() const { return c_.empty(); }
  /// Exponent of the top nonzero coefficient, if any is known.
  std::optional<long long> top_degree() const;
  /// Top exponent, or floor-1 as an upper bound when zero at precision.
  long long magnitude_bound() const { return c_.empty() ? floor_ - 1 : floor_ + (long long)c_.size() - 1; }
  AbsValue abs() const;
  Fq leading() const;
  /// Coefficient of T^e; throws PrecisionError below the floor.
  Fq coeff(long long e) const;
  /// Known coefficients from the floor upward (index 0 is the floor).
  const std::vector<Fq>& raw() const { return c_; }

  /// Same value with the floor raised to -p (never lowered).
  Laurent with_prec(long long p) const;
  /// Multiplication by T^k.
  Laurent shifted(long long k) const;
  Laurent scaled(Fq c) const;

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator-(const Laurent& a);
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  friend Laurent operator/(const Laurent& a, const Laurent& b) { return a * b.inv(); }

  /// Throws PrecisionError if the series vanishes at retained precision.
  Laurent inv() const;
  /// Integer powers; negative exponents go through inv().
  Laurent pow(long long n) const;
  /// x -> x^p, coefficientwise.
  Laurent frobenius() const;

  /// Sum of the coefficients of T^i, i >= 0. Needs the floor at or below 0.
  Poly integer_part() const;
  Laurent fractional_part() const;
  /// Distance to the nearest element of A: q^m for the top nonzero negative
  /// exponent m, or below(floor) when nothing nonzero is retained.
  AbsValue fractional_norm() const;

  /// Equality of every coefficient at exponents >= floor_exp. Throws
  /// PrecisionError if either side is unknown there.
  bool agrees_above(const Laurent& o, long long floor_exp) const;
  /// Equality on the exponents both sides retain.
  bool agrees_on_common(const Laurent& o) const;

 private:
  Laurent(FieldPtr field, long long floor, std::vector<Fq> c);
  void trim();

  FieldPtr field_;
  long long floor_;
  std::vector<Fq> c_;
};

/// Square root. Odd characteristic: Newton iteration seeded from the leading
/// term; `leading` picks the sign (default: the root with the smaller
/// encoding). Characteristic 2: coefficientwise inverse Frobenius, requiring
/// every retained exponent to be even. Throws std::domain_error for a
/// non-square leading coefficient or an odd top degree.
Laurent sqrt(const Laurent& x, std::optional<Fq> leading = std::nullopt);

/// Canonical text "T^2 + 2*T^-1 + O(T^-7)" where the O-term is the first
/// unknown exponent.
std::string to_string(const Laurent& x);

}  // namespace qtj
