#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "qtj/field.hpp"

namespace qtj {

/// Element of A = F_q[T]. Coefficients ascend in T-degree and are trimmed so
/// the leading one is nonzero; the zero polynomial has no coefficients and
/// degree -1 (standing in for -infinity).
class Poly {
 public:
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  Poly(FieldPtr field, std::vector<Fq> coeffs);

  static Poly constant(FieldPtr field, Fq c);
  static Poly monomial(FieldPtr field, Fq c, int degree);
  /// T^k.
  static Poly t_power(FieldPtr field, int k) { return monomial(field, Field::one(), k); }
  /// Polynomial over the prime field from integer coefficients (ascending).
  static Poly from_ints(FieldPtr field, const std::vector<long long>& coeffs);

  const FieldPtr& field() const { return field_; }
  const Field& F() const { return *field_; }
  const std::vector<Fq>& coeffs() const { return c_; }

  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Fq coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : Field::zero(); }
  Fq leading() const { return c_.empty() ? Field::zero() : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == Field::one(); }
  /// True when this is T^j for some j >= 0.
  bool is_t_power() const;

  /// The unique monic scalar multiple; throws std::domain_error on zero.
  Poly monic() const;
  Poly scaled(Fq c) const;
  /// Multiplication by T^k, k >= 0.
  Poly shifted(int k) const;
  Poly pow(unsigned e) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  /// Total order: by degree, then coefficients from the top down.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

 private:
  void trim();

  FieldPtr field_;
  std::vector<Fq> c_;
};

/// Quotient and remainder with deg(remainder) < deg(b). Throws
/// std::domain_error when b = 0.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(Poly a, Poly b);

/// Canonical text "T^2 + 2*T + 1"; "0" for zero.
std::string to_string(const Poly& p);

}  // namespace qtj
