#include <doctest.h>

#include <algorithm>
#include <set>

#include "gen.hpp"
#include "qtj/errors.hpp"
#include "qtj/lattice.hpp"

using namespace qtj;
using testgen::Gen;

namespace {

std::vector<std::string> texts(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const Poly& p : ps) out.push_back(to_string(p));
  return out;
}

}  // namespace

TEST_CASE("epsilon index") {
  const EpsilonIndex e = EpsilonIndex::from_m(7, 3);
  CHECK(e.N == 2);
  CHECK(e.l == 1);
  CHECK(e.d_l() == 1);
  CHECK(e.eps_log() == -7);
  CHECK_THROWS_AS(EpsilonIndex::from_m(-1, 2), ConfigError);
}

TEST_CASE("basis description examples") {
  const FieldPtr F2 = Field::make(2);
  const QuadraticUnit u = solve(Poly::t_power(F2, 1), Field::one(), 40);
  const BasisDescription b = basis_lambda(u, {1, 0, 1});
  const auto gens = b.generators(3);
  REQUIRE(gens.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(gens[i] == Generator{0, i + 1});

  const FieldPtr F3 = Field::make(3);
  const QuadraticUnit v = solve(Poly::from_ints(F3, {1, 0, 1}), Field::one(), 40);
  const auto g2 = basis_lambda(v, {1, 1, 2}).generators(5);
  REQUIRE(g2.size() == 3);
  CHECK(g2[0] == Generator{0, 1});
  CHECK(g2[1] == Generator{1, 2});
  CHECK(g2[2] == Generator{0, 2});
  // l = d-1: a single generator from block N.
  const auto g3 = basis_lambda(v, {2, 1, 2}).generators(4);
  REQUIRE(g3.size() == 1);
  CHECK(g3[0] == Generator{0, 2});
  // N = 0, l = 0: the full block B(0).
  const auto g4 = basis_lambda(v, {0, 0, 2}).generators(1);
  CHECK(g4 == std::vector<Generator>{{1, 0}, {0, 0}});
  CHECK(basis_lambda(v, {3, 0, 2}).materialize(5).empty());
  CHECK(span_elements(F3, {}) == std::vector<Poly>{Poly(F3)});
}

TEST_CASE("brute force examples") {
  // tests/oracle/derive_fixtures.py
  const FieldPtr F = Field::make(2);
  const QuadraticUnit u = solve(Poly::t_power(F, 1), Field::one(), 40);
  CHECK(texts(brute_force_lambda(u.f(), -1, 3)) ==
        std::vector<std::string>{"0", "T", "T^2 + 1", "T^2 + T + 1", "T^3", "T^3 + T", "T^3 + T^2 + 1",
                                 "T^3 + T^2 + T + 1"});
  CHECK(brute_force_lambda(u.f(), 0, 3).size() == 16);
  CHECK(texts(brute_force_lambda(u.f(), -2, -1)) == std::vector<std::string>{"0"});
  const Laurent coarse = u.f().with_prec(3);
  CHECK_THROWS_AS(brute_force_lambda(coarse, -2, 4), PrecisionError);
}

TEST_CASE("monic elements") {
  const FieldPtr F = Field::make(2);
  const Poly t = Poly::t_power(F, 1);
  CHECK(texts(monic_elements(std::vector<Poly>{t}, 1)) == std::vector<std::string>{"T"});
  const std::vector<Poly> basis{t, Poly::from_ints(F, {1, 0, 1})};
  CHECK(texts(monic_elements(basis, 2)) == std::vector<std::string>{"T", "T^2 + 1", "T^2 + T + 1"});
  Gen g(31);
  for (int trial = 0; trial < 30; ++trial) {
    const FieldPtr Fg = g.small_field();
    const QuadraticUnit w = g.quadratic_unit(Fg, 2, 40);
    const BasisDescription desc = basis_lambda(w, EpsilonIndex::from_m(g.uniform(1, 4), w.d()));
    const int top = desc.lowest_degree() + 4;
    const auto mats = desc.materialize(top);
    const auto mon = monic_elements(desc, top);
    std::size_t expected = 0, power = 1;
    for (std::size_t i = 0; i < mats.size(); ++i) {
      expected += power;
      power *= std::size_t(Fg->q());
    }
    CHECK(mon.size() == expected);
    for (const Poly& p : mon) CHECK(p.is_monic());
  }
}

TEST_CASE("condition tuples") {
  const FieldPtr F = Field::make(2);
  const QuadraticUnit u1 = solve(Poly::t_power(F, 1), Field::one(), 40);
  CHECK(nonbas_tuples(u1, {1, 0, 1}, 0, true, 0).empty());
  CHECK(nonbas_tuples(u1, {1, 0, 1}, 0, true, 1).empty());
  const QuadraticUnit u2 = solve(Poly::from_ints(F, {1, 0, 1}), Field::one(), 40);
  const auto m0 = nonbas_tuples(u2, {1, 0, 2}, 0, true, 0);
  REQUIRE(m0.size() == 1);
  CHECK(to_string(m0[0].c[0]) == "T + 1");

  ConditionTuple t{{Poly::t_power(F, 1)}};
  CHECK_FALSE(condition_I(t, 2));
  CHECK(condition_II(t, 2));
  CHECK_FALSE(condition_III(t, 0));
}

TEST_CASE("decompose") {
  const FieldPtr F = Field::make(3);
  const QuadraticUnit u = solve(Poly::from_ints(F, {1, 0, 1}), F->from_int(2), 60);
  const BasisDescription desc = basis_lambda(u, {1, 0, 2});
  const auto Qb = monic_binet_polys(u.a(), u.b(), 4);
  const Decomposition gen = decompose(desc, Qb[2].shifted(1));
  CHECK(gen.kind == Decomposition::Kind::Bas);
  CHECK(*gen.generator == Generator{1, 2});
  const Decomposition sum = decompose(desc, Qb[1] + Qb[2]);
  REQUIRE(sum.kind == Decomposition::Kind::NonBas);
  CHECK(sum.tuple->c.size() == 2);
  CHECK(sum.tuple->c[0] == Poly::constant(F, Field::one()));
  CHECK(sum.tuple->c[1] == Poly::constant(F, Field::one()));
  CHECK(decompose(desc, Poly::t_power(F, 1)).kind == Decomposition::Kind::NotMember);

  // decompose inverts tuple_element on every condition-satisfying tuple.
  for (const auto& t : nonbas_tuples(u, {1, 0, 2}, 1, true, 0)) {
    const Decomposition d = decompose(desc, tuple_element(desc, t));
    REQUIRE(d.kind == Decomposition::Kind::NonBas);
    CHECK(*d.tuple == t);
  }
}

TEST_CASE("property: basis span equals the exhaustive search") {
  Gen g(32);
  for (int trial = 0; trial < 40; ++trial) {
    const FieldPtr F = g.small_field();
    const QuadraticUnit u = g.quadratic_unit(F, 2, 60);
    const EpsilonIndex idx = EpsilonIndex::from_m(g.uniform(0, 4), u.d());
    const int bound = std::min(idx.m() + 3 * u.d(), F->q() == 2 ? 10 : 6);
    const auto brute = brute_force_lambda(u.f(), idx.eps_log(), bound);
    CHECK(span_elements(F, basis_lambda(u, idx).materialize(bound)) == brute);
    CHECK(span_elements(F, lambda_basis(u.f(), idx.eps_log(), bound)) == brute);
  }
}

TEST_CASE("property: generator errors are distinct powers and lattices nest") {
  Gen g(33);
  for (int trial = 0; trial < 40; ++trial) {
    const FieldPtr F = g.field();
    const QuadraticUnit u = g.quadratic_unit(F, 3, 80);
    const BasisDescription all = basis_lambda(u, {0, 0, u.d()});
    std::set<long long> errors;
    const auto gens = all.generators(5 * u.d() - 1);
    for (const Generator& gen : gens) {
      const AbsValue e = (Laurent::from_poly(all.generator_poly(gen), 80) * u.f()).fractional_norm();
      REQUIRE(e.is_power());
      errors.insert(e.log_q());
    }
    CHECK(errors.size() == gens.size());
    CHECK(*errors.rbegin() == -1);
    CHECK(*errors.begin() == -long(gens.size()));

    const int m = g.uniform(0, 3 * u.d());
    const auto outer = basis_lambda(u, EpsilonIndex::from_m(m, u.d())).generators(6 * u.d());
    const auto inner = basis_lambda(u, EpsilonIndex::from_m(m + 1, u.d())).generators(6 * u.d());
    REQUIRE(inner.size() + 1 == outer.size());
    CHECK(std::equal(inner.begin(), inner.end(), outer.begin() + 1));
  }
}

TEST_CASE("coordinates and span membership") {
  Gen g(34);
  for (int trial = 0; trial < 100; ++trial) {
    const FieldPtr F = g.field();
    std::vector<Poly> basis;
    for (int deg = 0; deg <= 6; ++deg) {
      if (g.coin()) basis.push_back(g.monic(F, deg));
    }
    Poly x(F);
    std::vector<Fq> coeffs;
    for (const Poly& b : basis) {
      coeffs.push_back(g.element(*F));
      x += b.scaled(coeffs.back());
    }
    const auto c = coordinates(basis, x);
    REQUIRE(c.has_value());
    CHECK(*c == coeffs);
    CHECK(in_span(basis, x));
  }
}
