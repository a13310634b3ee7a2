#include <doctest.h>

#include <map>
#include <tuple>

#include "gen.hpp"
#include "qtj/errors.hpp"
#include "qtj/limit_values.hpp"

using namespace qtj;
using testgen::Gen;

namespace {

Poly T(const FieldPtr& F, int k = 1) { return Poly::t_power(F, k); }

}  // namespace

TEST_CASE("zeta_T_l") {
  const FieldPtr F = Field::make(3);
  CHECK(to_string(zeta_T_l(F, 4, 2, 3, 10)) == "1 + O(T^-11)");
  CHECK(to_string(zeta_T_l(F, 1, 0, 2, 10)) == "1 + T^-1 + O(T^-11)");
  CHECK(to_string(zeta_T_l(F, 2, 0, 3, 10)) == "1 + T^-2 + T^-4 + O(T^-11)");
}

TEST_CASE("H sums") {
  const FieldPtr F = Field::make(2);
  const QuadraticUnit u = solve(T(F), Field::one(), 60);
  const TruncatedSum h = H_l(u, 0, 1, 0);
  CHECK(h.value.agrees_on_common(Laurent::one(F, 40)));
  CHECK(h.tail_bound == AbsValue::power(-1));

  Gen g(51);
  for (int trial = 0; trial < 20; ++trial) {
    const FieldPtr Fg = g.small_field();
    const QuadraticUnit v = g.quadratic_unit(Fg, 2, 80);
    const int q = Fg->q();
    const int d = v.d();
    for (int n : {q - 1, q * q - 1}) {
      const int mc = g.uniform(0, 2);
      const TruncatedSum geo = H_full(v, n, 0);
      const Laurent direct = H_geometric_direct(v, n, 3LL * n * d);
      CHECK(geo.value.agrees_on_common(direct));
      CHECK(direct.abs() == AbsValue::power(-(long long)n * d));
      const int l = g.uniform(0, d - 1);
      const TruncatedSum a0 = H_l(v, l, n, mc);
      const TruncatedSum a1 = H_l(v, l, n, mc + 1);
      CHECK(a0.value.abs() == AbsValue::power(0));
      CHECK(a1.value.agrees_on_common(a0.value));
      CHECK((a1.value - a0.value.with_prec(a1.value.prec())).magnitude_bound() <= a0.tail_bound.log_q());
      CHECK(a0.tail_bound == AbsValue::power(-(long long)n * d * (mc + 1)));
      const TruncatedSum b0 = H_full(v, n, mc);
      const TruncatedSum b1 = H_full(v, n, mc + 1);
      CHECK(b1.value.agrees_on_common(b0.value));
    }
  }
}

TEST_CASE("limit values: tuple and lattice routes agree, |J_tilde| = 1") {
  Gen g(52);
  for (int trial = 0; trial < 10; ++trial) {
    const FieldPtr F = g.small_field();
    const QuadraticUnit u = g.quadratic_unit(F, 2, 60);
    const int l = g.uniform(0, u.d() - 1);
    const int mc = F->q() == 2 ? 3 : 2;
    const LimitValue tuple = limit_value(u, l, mc);
    const LimitValue lattice = limit_value_lattice(u, l);
    CHECK(tuple.J_tilde_is_unit());
    CHECK(lattice.J_tilde_is_unit());
    CHECK(tuple.J_tilde_l.agrees_on_common(lattice.J_tilde_l));
  }
}

TEST_CASE("size of the limit values depends only on q, d and l") {
  // Measured on every monic a, b for q in {2, 3} and d in {1, 2}.
  const std::map<std::tuple<int, int, int>, long long> expected = {
      {{2, 1, 0}, 7}, {{2, 2, 0}, 16}, {{2, 2, 1}, 4}, {{3, 1, 0}, 13}, {{3, 2, 0}, 41}, {{3, 2, 1}, 9}};
  for (int p : {2, 3}) {
    const FieldPtr F = Field::make(p);
    for (int d = 1; d <= 2; ++d) {
      for (const auto& [a, b] : testgen::unit_grid(F, d)) {
        const QuadraticUnit u = solve(a, b, 60);
        const ValueSet vs = value_set(u);
        REQUIRE(vs.values.size() == std::size_t(d));
        CHECK(vs.distinct);
        for (int l = 0; l < d; ++l) {
          REQUIRE(vs.values[l].j_l.has_value());
          CHECK(vs.values[l].j_l->abs() == AbsValue::power(expected.at({p, d, l})));
        }
      }
    }
  }
}

TEST_CASE("convergence for q=2, a=T, b=1") {
  const FieldPtr F = Field::make(2);
  const QuadraticUnit u = solve(T(F), Field::one(), 60);
  PrecisionPlan plan;
  plan.target = 16;
  const LimitValue lim = limit_value_lattice(u, 0, plan);
  const auto trace = convergence_trace(u, lim, 1, 8, plan);
  REQUIRE(trace.size() == 8);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    REQUIRE(trace[i].gap.is_power());
    // Measured rate: q^{-2d} per step.
    if (trace[i + 1].gap.is_power()) CHECK(trace[i + 1].gap.log_q() == trace[i].gap.log_q() - 2);
  }
  CHECK(trace.back().gap < AbsValue::power(-8));
}

TEST_CASE("hat identity and hat convergence") {
  Gen g(53);
  for (int trial = 0; trial < 8; ++trial) {
    const FieldPtr F = g.small_field();
    const QuadraticUnit u = g.quadratic_unit(F, 2, 80);
    const long long R = 20;
    for (int N = 1; N <= 3; ++N) {
      const EpsilonIndex idx{N, g.uniform(0, u.d() - 1), u.d()};
      const PowerSumPair z = zeta_pair(u, idx, R);
      const Laurent direct =
          assemble_approximant(z.z1.value, z.z2.value, idx.eps_log(), 0, z.z1.tail_bound).J_tilde;
      CHECK(direct.agrees_on_common(hat_J_tilde(u, idx, R)));
    }
  }
  // Hat sums approach H_l at rate q^{-2d} per N.
  const FieldPtr F = Field::make(3);
  const QuadraticUnit u = solve(Poly::from_ints(F, {1, 1}), Field::one(), 80);
  const int n = 2, mc = 6;
  const TruncatedSum target = H_l(u, 0, n, mc);
  const TruncatedSum target_full = H_full(u, n, mc);
  for (int N = 1; N <= 3; ++N) {
    const HatSums hs = hat_convergence(u, 0, N, n, mc);
    CHECK((hs.H_Nl.value - target.value).abs() == AbsValue::power(-2 - 2 * N));
    CHECK((hs.H_N.value - target_full.value).abs() == AbsValue::power(-6 - 2 * N));
  }
}

TEST_CASE("comparisons with infinity") {
  const FieldPtr F = Field::make(2);
  const Laurent x = Laurent::from_poly(T(F, 3), 10);
  const Laurent y = x + Laurent::monomial(F, Field::one(), -9, 10);
  CHECK(values_agree(x, y, 8));
  CHECK_FALSE(values_agree(x, y, 9));
  CHECK(values_agree(std::nullopt, std::nullopt, 8));
  CHECK_FALSE(values_agree(x, std::nullopt, 8));
  CHECK(*gap(x, y) == AbsValue::power(-9));
  CHECK_FALSE(gap(x, std::nullopt).has_value());
}
