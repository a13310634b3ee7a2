#include <doctest.h>

#include "gen.hpp"
#include "qtj/errors.hpp"
#include "qtj/laurent.hpp"
#include "qtj/poly.hpp"

using namespace qtj;
using testgen::Gen;

TEST_CASE("field tables satisfy the field axioms") {
  Gen g(11);
  for (int trial = 0; trial < 40; ++trial) {
    const FieldPtr F = g.field();
    for (int k = 0; k < 50; ++k) {
      const Fq x = g.element(*F), y = g.element(*F), z = g.element(*F);
      CHECK(F->add(F->add(x, y), z) == F->add(x, F->add(y, z)));
      CHECK(F->mul(F->mul(x, y), z) == F->mul(x, F->mul(y, z)));
      CHECK(F->mul(x, F->add(y, z)) == F->add(F->mul(x, y), F->mul(x, z)));
      CHECK(F->add(x, F->neg(x)) == Field::zero());
      CHECK(F->sub(x, y) == F->add(x, F->neg(y)));
      CHECK(F->frobenius_inv(F->frobenius(x)) == x);
      CHECK(F->from_digits(F->digits(x)) == x);
      if (!x.is_zero()) {
        CHECK(F->mul(x, F->inv(x)) == Field::one());
        CHECK(F->pow(x, F->q() - 1) == Field::one());
      }
      if (auto s = F->sqrt(F->mul(x, x))) CHECK(F->mul(*s, *s) == F->mul(x, x));
    }
  }
}

TEST_CASE("field construction rejects bad parameters") {
  CHECK_THROWS_AS(Field::make(4, 1), ConfigError);
  CHECK_THROWS_AS(Field::make(2, 9), ConfigError);
  CHECK_THROWS_AS(Field::make(FieldSpec{2, 2, {1, 0, 1}}), ConfigError);  // X^2 + 1 = (X+1)^2
  CHECK(Field::make(FieldSpec{2, 2, {1, 1, 1}})->q() == 4);
  CHECK(Field::make(3, 2)->elements().size() == 9);
  CHECK(Field::make(5)->units().size() == 4);
}

TEST_CASE("polynomial division and gcd") {
  Gen g(12);
  for (int trial = 0; trial < 300; ++trial) {
    const FieldPtr F = g.field();
    const Poly a = g.poly(F, 7);
    const Poly b = g.nonzero_poly(F, 4);
    const auto [quo, rem] = divmod(a, b);
    CHECK(quo * b + rem == a);
    CHECK(rem.degree() < b.degree());
    const Poly c = g.poly(F, 5);
    CHECK(a * c == c * a);
    if (!a.is_zero() && !c.is_zero()) CHECK((a * c).degree() == a.degree() + c.degree());
    const Poly gg = gcd(a, b);
    CHECK(divmod(a, gg).second.is_zero());
    CHECK(divmod(b, gg).second.is_zero());
  }
  const FieldPtr F = Field::make(3);
  CHECK_THROWS_AS(divmod(Poly::t_power(F, 2), Poly(F)), std::domain_error);
  CHECK(to_string(Poly::from_ints(F, {1, 0, 2})) == "2*T^2 + 1");
  CHECK(to_string(Poly(F)) == "0");
}

TEST_CASE("laurent arithmetic is ultrametric and multiplicative") {
  Gen g(13);
  for (int trial = 0; trial < 300; ++trial) {
    const FieldPtr F = g.field();
    const Laurent x = g.nonzero_laurent(F, 20);
    const Laurent y = g.nonzero_laurent(F, 20);
    // |xy| = |x||y| exactly.
    CHECK((x * y).abs() == x.abs() * y.abs());
    // |x + y| <= max(|x|, |y|), with equality when the sizes differ.
    const Laurent s = x + y;
    const long long mx = std::max(x.abs().log_q(), y.abs().log_q());
    CHECK(s.magnitude_bound() <= mx);
    if (x.abs().log_q() != y.abs().log_q()) CHECK(s.abs() == AbsValue::power(mx));
    // x y / y = x on every retained exponent.
    CHECK((x * y / y).agrees_on_common(x));
    CHECK((x * x.inv()).agrees_on_common(Laurent::one(F, 40)));
    CHECK((x - x).is_zero());
    CHECK(x.pow(3).agrees_on_common(x * x * x));
    CHECK(x.pow(-2).agrees_on_common((x * x).inv()));
    CHECK(x.frobenius().agrees_on_common(x.pow(F->p())));
  }
}

TEST_CASE("precision floors propagate exactly") {
  const FieldPtr F = Field::make(2);
  const Laurent x = Laurent::from_poly(Poly::t_power(F, 2), 10);  // T^2 + O(T^-11)
  const Laurent y = Laurent::monomial(F, Field::one(), -1, 4);    // T^-1 + O(T^-5)
  CHECK((x + y).floor() == -4);
  CHECK((x * y).floor() == -4 + 2);
  CHECK(x.inv().floor() == -10 - 4);
  CHECK(to_string(y) == "T^-1 + O(T^-5)");
  CHECK_THROWS_AS(y.coeff(-5), PrecisionError);
  CHECK_THROWS_AS(Laurent(F, 5).inv(), PrecisionError);
}

TEST_CASE("sqrt round trip") {
  Gen g(14);
  for (int trial = 0; trial < 200; ++trial) {
    const FieldPtr F = g.field();
    const Laurent x = g.nonzero_laurent(F, 24);
    const Laurent sq = x * x;
    const Laurent r = sqrt(sq);
    CHECK((r * r).agrees_on_common(sq));
    CHECK((r.agrees_on_common(x) || r.agrees_on_common(-x)));
  }
  const FieldPtr F3 = Field::make(3);
  CHECK_THROWS_AS(sqrt(Laurent::monomial(F3, F3->from_int(2), 0, 8)), std::domain_error);
  CHECK_THROWS_AS(sqrt(Laurent::monomial(F3, Field::one(), 1, 8)), std::domain_error);
}

TEST_CASE("fractional norm uses the three-state absolute value") {
  const FieldPtr F = Field::make(2);
  const Laurent x = Laurent::from_descending(F, 1, {Field::one(), Field::zero(), Field::zero(), Field::one()}, 6);
  // T + T^-2 + O(T^-7)
  CHECK(x.integer_part() == Poly::t_power(F, 1));
  CHECK(x.fractional_norm() == AbsValue::power(-2));
  const Laurent y = Laurent::from_poly(Poly::t_power(F, 3), 6);
  CHECK(y.fractional_norm() == AbsValue::below(-6));
  CHECK(y.fractional_norm().less_than_power(-6) == std::optional<bool>(true));
  CHECK_FALSE(y.fractional_norm().less_than_power(-7).has_value());
  CHECK(AbsValue::power(-3).less_than_power(-2) == std::optional<bool>(true));
  CHECK(AbsValue::power(-2).less_than_power(-2) == std::optional<bool>(false));
  CHECK(AbsValue::zero().less_than_power(-100) == std::optional<bool>(true));
  CHECK(AbsValue::power(-3).to_string() == "q^-3");
  CHECK(AbsValue::below(-20).to_string() == "<q^-20");
}
