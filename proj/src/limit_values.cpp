#include "qtj/limit_values.hpp"

#include <algorithm>

#include "qtj/errors.hpp"

namespace qtj {

namespace {

QuadraticUnit at_prec(const QuadraticUnit& u, long long prec) {
  if (u.prec() >= prec) return u;
  return solve(u.a(), u.b(), prec);
}

std::vector<Laurent> bar_powers(const QuadraticUnit& u, int i_max) {
  std::vector<Laurent> out{Laurent::one(u.field(), u.prec())};
  for (int i = 1; i <= i_max; ++i) out.push_back(out.back() * u.f_bar());
  return out;
}

// sum over the tuples of (sum_i c_i X_i)^-n, each term known to T^-target.
Laurent tuple_power_sum(const std::vector<Laurent>& X, int d, int d_l, int m_cutoff, TupleOptions opt, int n,
                        long long target) {
  const FieldPtr& field = X.front().field();
  std::vector<std::vector<Laurent>> TX(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (int j = 0; j < d; ++j) TX[i].push_back(X[i].shifted(j));
  }
  Laurent sum(field, target);
  for_each_nonbas_tuple(field, d, d_l, m_cutoff, opt, [&](const ConditionTuple& t) {
    Laurent S(field, target + 1);
    bool first = true;
    for (int i = 0; i <= t.m(); ++i) {
      const auto& cs = t.c[i].coeffs();
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (cs[j].is_zero()) continue;
        const Laurent term = TX[i][j].scaled(cs[j]);
        if (first) {
          S = term;
          first = false;
        } else {
          S += term;
        }
      }
    }
    const long long deg = *S.top_degree();
    const long long rel = target - n * deg;
    if (rel < 0) return;
    if (S.floor() > deg - rel) throw PrecisionError("unit known too coarsely for the tuple sum");
    sum += S.with_prec(rel - deg).inv().pow(n).with_prec(target);
  });
  return sum;
}

}  // namespace

Laurent zeta_T_l(const FieldPtr& field, int n, int l, int d, long long prec) {
  if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  if (n < 1) throw ConfigError("zeta exponent must be positive");
  Laurent out(field, prec);
  for (int j = 0; j <= d - 1 - l; ++j) out += Laurent::monomial(field, Field::one(), -(long long)n * j, prec);
  return out;
}

long long tuple_sum_prec(int n, int d, int m_cutoff) { return (long long)n * d * (m_cutoff + 1) - 1; }

long long tuple_unit_prec(int q, int d, int m_cutoff) {
  return tuple_sum_prec(q * q - 1, d, m_cutoff) + (long long)(m_cutoff + 2) * d + 8;
}

int default_m_cutoff(int q, int d, long long target) {
  int m = 0;
  while ((long long)(q - 1) * d * (m + 1) <= target) ++m;
  return m;
}

TruncatedSum H_l(const QuadraticUnit& u0, int l, int n, int m_cutoff) {
  const int d = u0.d();
  if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  const QuadraticUnit u = at_prec(u0, tuple_unit_prec(u0.F().q(), d, m_cutoff));
  const long long target = tuple_sum_prec(n, d, m_cutoff);
  Laurent value = zeta_T_l(u.field(), n, l, d, target);
  value += tuple_power_sum(bar_powers(u, m_cutoff), d, d - 1 - l, m_cutoff, {true, 0, true}, n, target);
  return {value, AbsValue::power(-(target + 1)), m_cutoff};
}

TruncatedSum H_full(const QuadraticUnit& u0, int n, int m_cutoff) {
  const int d = u0.d();
  const QuadraticUnit u = at_prec(u0, tuple_unit_prec(u0.F().q(), d, m_cutoff));
  const long long target = tuple_sum_prec(n, d, m_cutoff);
  const Laurent geometric =
      (zeta_T_l(u.field(), n, 0, d, target + n * d) * (u.f_bar().pow(n) - Laurent::one(u.field(), u.prec())).inv())
          .with_prec(target);
  Laurent value = geometric;
  value += tuple_power_sum(bar_powers(u, m_cutoff), d, d - 1, m_cutoff, {false, 1, false}, n, target);
  return {value, AbsValue::power(-(target + 1)), m_cutoff};
}

Laurent H_geometric_direct(const QuadraticUnit& u, int n, long long prec) {
  const int d = u.d();
  const Laurent inv_n = u.f_bar().inv().pow(n);
  Laurent sum(u.field(), prec);
  Laurent term = inv_n;
  for (int i = 1; (long long)n * d * i <= prec; ++i) {
    sum += term.with_prec(prec);
    term = term * inv_n;
  }
  return (zeta_T_l(u.field(), n, 0, d, prec) * sum).with_prec(prec);
}

LimitValue limit_value(const QuadraticUnit& u, int l, int m_cutoff) {
  const int q = u.F().q();
  const TruncatedSum a1 = H_l(u, l, q - 1, m_cutoff);
  const TruncatedSum b1 = H_full(u, q - 1, m_cutoff);
  const TruncatedSum a2 = H_l(u, l, q * q - 1, m_cutoff);
  const TruncatedSum b2 = H_full(u, q * q - 1, m_cutoff);
  const ApproximantValue v = assemble_approximant(a1.value + b1.value, a2.value + b2.value, 0, m_cutoff, a1.tail_bound);
  return LimitValue{l, v.j, v.J, v.J_tilde, m_cutoff, a1.tail_bound, v.infinity_floor};
}

namespace {

// Degree cap and unit precision that cover the enumeration cutoff for
// generators starting in degree 0.
struct GeneratorBudget {
  long long complete_to;
  long long unit_prec;
};

GeneratorBudget budget(int q, int d, long long R) {
  const long long complete_to = R / (q - 1) + 1;
  const long long i_max = complete_to / d + 1;
  return {complete_to, R + (i_max + 2) * d + 8};
}

}  // namespace

LaurentGenerators limit_generators(const QuadraticUnit& u0, int l, long long R) {
  const int d = u0.d();
  if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  const GeneratorBudget b = budget(u0.F().q(), d, R);
  const QuadraticUnit u = at_prec(u0, b.unit_prec);
  LaurentGenerators g;
  g.complete_to = b.complete_to;
  for (int j = 0; j <= d - 1 - l; ++j) g.gens.push_back(Laurent::monomial(u.field(), Field::one(), j, R));
  Laurent p = Laurent::one(u.field(), u.prec());
  for (int i = 1; (long long)i * d <= b.complete_to; ++i) {
    p = p * u.f_bar();
    for (int j = 0; j < d && (long long)i * d + j <= b.complete_to; ++j) g.gens.push_back(p.shifted(j).with_prec(R));
  }
  return g;
}

LaurentGenerators hat_generators(const QuadraticUnit& u0, EpsilonIndex idx, long long R) {
  const int d = u0.d();
  const GeneratorBudget b = budget(u0.F().q(), d, R);
  const QuadraticUnit u = at_prec(u0, b.unit_prec);
  const Laurent one = Laurent::one(u.field(), u.prec());
  const Laurent rho = u.f_bar_conj() * u.f_bar().inv();
  Laurent rho_pow = rho.pow(idx.N + 1);  // rho^{N+i+1} for the current i
  LaurentGenerators g;
  g.complete_to = b.complete_to;
  const Laurent damp0 = one - rho_pow;
  for (int j = 0; j <= idx.d_l(); ++j) g.gens.push_back(damp0.shifted(j).with_prec(R));
  Laurent p = one;
  for (int i = 1; (long long)i * d <= b.complete_to; ++i) {
    p = p * u.f_bar();
    rho_pow = rho_pow * rho;
    const Laurent gen = p * (one - rho_pow);
    for (int j = 0; j < d && (long long)i * d + j <= b.complete_to; ++j) g.gens.push_back(gen.shifted(j).with_prec(R));
  }
  return g;
}

LimitValue limit_value_lattice(const QuadraticUnit& u, int l, const PrecisionPlan& plan) {
  int cutoff = 0;
  AbsValue tail = AbsValue::zero();
  const ApproximantValue v = solve_adaptive(plan, u.F().q(), [&](long long R) {
    const PowerSumPair z = zeta_pair(limit_generators(u, l, R), R, plan.threads);
    cutoff = z.z1.cutoff_degree;
    tail = z.z1.tail_bound;
    return assemble_approximant(z.z1.value, z.z2.value, 0, cutoff, tail);
  });
  return LimitValue{l, v.j, v.J, v.J_tilde, cutoff / u.d(), tail, v.infinity_floor};
}

Laurent hat_J_tilde(const QuadraticUnit& u, EpsilonIndex idx, long long R) {
  const PowerSumPair z = zeta_pair(hat_generators(u, idx, R), R);
  return assemble_approximant(z.z1.value, z.z2.value, idx.eps_log(), z.z1.cutoff_degree, z.z1.tail_bound).J_tilde;
}

HatSums hat_convergence(const QuadraticUnit& u0, int l, int N, int n, int m_cutoff) {
  const int d = u0.d();
  if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  const QuadraticUnit u = at_prec(u0, tuple_unit_prec(u0.F().q(), d, m_cutoff));
  const long long target = tuple_sum_prec(n, d, m_cutoff);
  const Laurent one = Laurent::one(u.field(), u.prec());
  const Laurent rho = u.f_bar_conj() * u.f_bar().inv();

  // X_i = f_bar^i (1 - rho^{N+i+1}), i = 0..m_cutoff.
  std::vector<Laurent> X;
  Laurent p = one;
  Laurent rho_pow = rho.pow(N + 1);
  for (int i = 0; i <= m_cutoff; ++i) {
    if (i > 0) {
      p = p * u.f_bar();
      rho_pow = rho_pow * rho;
    }
    X.push_back(p * (one - rho_pow));
  }

  Laurent h_nl = (zeta_T_l(u.field(), n, l, d, target) * (one - rho.pow(N + 1)).inv().pow(n)).with_prec(target);
  h_nl += tuple_power_sum(X, d, d - 1 - l, m_cutoff, {true, 0, true}, n, target);

  // zeta_T(n) sum_{i >= 1} f_bar^{-n i} (1 - rho^{N+i+1})^{-n}
  Laurent geo(u.field(), target);
  const Laurent inv_fbar_n = u.f_bar().inv().pow(n);
  Laurent fpow = inv_fbar_n;
  Laurent rp = rho.pow(N + 2);
  for (int i = 1; (long long)n * d * i <= target; ++i) {
    geo += (fpow * (one - rp).inv().pow(n)).with_prec(target);
    fpow = fpow * inv_fbar_n;
    rp = rp * rho;
  }
  Laurent h_n = (zeta_T_l(u.field(), n, 0, d, target) * geo).with_prec(target);
  h_n += tuple_power_sum(X, d, d - 1, m_cutoff, {false, 1, false}, n, target);

  const AbsValue tail = AbsValue::power(-(target + 1));
  return {{h_nl, tail, m_cutoff}, {h_n, tail, m_cutoff}};
}

bool values_agree(const std::optional<Laurent>& x, const std::optional<Laurent>& y, long long floor) {
  if (!x || !y) return !x && !y;
  return x->agrees_above(*y, -floor);
}

std::optional<AbsValue> gap(const std::optional<Laurent>& x, const std::optional<Laurent>& y) {
  if (!x || !y) return std::nullopt;
  return (*x - *y).abs();
}

ValueSet value_set(const QuadraticUnit& u, const PrecisionPlan& plan0, long long comparison_floor) {
  PrecisionPlan plan = plan0;
  plan.target = std::max(plan.target, comparison_floor);
  ValueSet out;
  out.comparison_floor = comparison_floor;
  for (int attempt = 0;; ++attempt) {
    out.values.clear();
    for (int l = 0; l < u.d(); ++l) out.values.push_back(limit_value_lattice(u, l, plan));
    bool distinct = true;
    for (int a = 0; a < u.d(); ++a) {
      for (int b = a + 1; b < u.d(); ++b) {
        const auto& x = out.values[a].j_l;
        const auto& y = out.values[b].j_l;
        if (!x || !y || x->agrees_on_common(*y)) distinct = false;
      }
    }
    out.distinct = distinct;
    out.retries = attempt;
    if (distinct || attempt == 2) return out;
    plan.target *= 2;
  }
}

std::vector<ConvergencePoint> convergence_trace(const QuadraticUnit& u, const LimitValue& limit, int N_min,
                                                int N_max, const PrecisionPlan& plan) {
  std::vector<ConvergencePoint> out;
  for (int N = N_min; N <= N_max; ++N) {
    const EpsilonIndex idx{N, limit.l, u.d()};
    if (idx.m() == 0) continue;
    const ApproximantValue v = j_eps(u, idx, plan);
    ConvergencePoint pt;
    pt.N = N;
    pt.j = v.j;
    pt.infinite = v.is_infinite();
    if (auto g = gap(v.j, limit.j_l)) pt.gap = *g;
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qtj
