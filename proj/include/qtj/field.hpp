#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qtj {

/// Element of F_q, stored as the base-p digit encoding c_0 + c_1 p + ... of
/// its coefficient vector in F_p[X]/(modulus). Zero encodes as 0, one as 1.
/// Arithmetic goes through the owning Field.
struct Fq {
  std::uint8_t v = 0;

  constexpr bool is_zero() const { return v == 0; }
  friend constexpr bool operator==(Fq, Fq) = default;
  friend constexpr auto operator<=>(Fq, Fq) = default;
};

/// Parameters of F_q = F_p[X]/(modulus), q = p^r. The modulus is monic of
/// degree r, coefficients ascending; for r = 1 it is the placeholder X.
struct FieldSpec {
  int p = 2;
  int r = 1;
  std::vector<int> modulus;
};

/// Built-in irreducible modulus for p^r <= 27 (plus a few larger), if any.
std::optional<std::vector<int>> default_modulus(int p, int r);

/// Exhaustive irreducibility test over F_p (trial division by every monic
/// polynomial of degree <= r/2).
bool is_irreducible_mod_p(int p, std::span<const int> monic_ascending);

bool is_prime(int n);

/// The finite field F_q with table-driven arithmetic. Immutable once built and
/// shared between all polynomials and series over it.
class Field {
 public:
  /// Validates the description (p prime, modulus irreducible, q <= 256) and fills in
  /// the default modulus when none is given. Throws ConfigError.
  static std::shared_ptr<const Field> make(FieldSpec spec);
  static std::shared_ptr<const Field> make(int p, int r = 1) { return make(FieldSpec{p, r, {}}); }

  int p() const { return spec_.p; }
  int r() const { return spec_.r; }
  int q() const { return q_; }
  const FieldSpec& spec() const { return spec_; }

  static constexpr Fq zero() { return Fq{0}; }
  static constexpr Fq one() { return Fq{1}; }
  /// Image of an integer under Z -> F_p -> F_q.
  Fq from_int(long long n) const;
  /// Element with the given coefficients over F_p (ascending powers of X).
  Fq from_digits(std::span<const int> digits) const;
  std::vector<int> digits(Fq x) const;
  /// All q elements in encoding order.
  std::vector<Fq> elements() const;
  /// The nonzero elements in encoding order.
  std::vector<Fq> units() const;

  Fq add(Fq x, Fq y) const { return Fq{add_[idx(x, y)]}; }
  Fq sub(Fq x, Fq y) const { return Fq{add_[idx(x, Fq{neg_[y.v]})]}; }
  Fq neg(Fq x) const { return Fq{neg_[x.v]}; }
  Fq mul(Fq x, Fq y) const { return Fq{mul_[idx(x, y)]}; }
  /// Multiplicative inverse; throws std::domain_error on zero.
  Fq inv(Fq x) const;
  Fq div(Fq x, Fq y) const { return mul(x, inv(y)); }
  Fq pow(Fq x, long long e) const;
  /// Frobenius x -> x^p.
  Fq frobenius(Fq x) const { return Fq{frob_[x.v]}; }
  /// Inverse Frobenius x -> x^{1/p}.
  Fq frobenius_inv(Fq x) const { return Fq{frob_inv_[x.v]}; }
  /// A square root of x (the one with the smaller encoding), if x is a square.
  std::optional<Fq> sqrt(Fq x) const;

  /// Raw table rows used by the hot Laurent kernels.
  const std::uint8_t* add_row(Fq x) const { return add_.data() + std::size_t(x.v) * q_; }
  const std::uint8_t* mul_row(Fq x) const { return mul_.data() + std::size_t(x.v) * q_; }

  /// "3" for prime fields; "(w^2+2*w+1)" style over the generator w otherwise.
  std::string to_string(Fq x) const;

 private:
  explicit Field(FieldSpec spec);
  std::size_t idx(Fq x, Fq y) const { return std::size_t(x.v) * q_ + y.v; }

  FieldSpec spec_;
  int q_ = 0;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_, frob_, frob_inv_;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace qtj
