#include "qtj/zeta_approx.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "qtj/errors.hpp"

namespace qtj {

namespace {

Laurent frobenius_q(Laurent x) {
  for (int i = 0; i < x.F().r(); ++i) x = x.frobenius();
  return x;
}

// sum_{u in F_q^x} u^-n
Fq unit_power_sum(const Field& F, int n) {
  Fq s = Field::zero();
  for (Fq u : F.units()) s = F.add(s, F.pow(u, -n));
  return s;
}

// lam^-n known down to T^-(target).
Laurent inverse_power(const Poly& lam, int n, long long target) {
  const long long e = lam.degree();
  const long long rel = target - n * e;
  return Laurent::from_poly(lam, rel - e).inv().pow(n).with_prec(target);
}

}  // namespace

AbsValue zeta_tail_bound(int n, int cutoff) { return AbsValue::power(-(long long)n * (cutoff + 1)); }

TruncatedSum zeta_from_elements(const std::vector<Poly>& elements, int n, int cutoff, bool all_nonzero) {
  if (n < 1) throw ConfigError("zeta exponent must be positive");
  if (elements.empty()) throw ConfigError("empty element set");
  const FieldPtr& field = elements.front().field();
  const long long target = (long long)n * (cutoff + 1) - 1;
  Laurent sum(field, target);
  for (const Poly& lam : elements) {
    if (!lam.is_monic() || lam.degree() > cutoff) continue;
    sum += inverse_power(lam, n, target);
  }
  if (all_nonzero) sum = sum.scaled(unit_power_sum(*field, n));
  return {sum, zeta_tail_bound(n, cutoff), cutoff};
}

TruncatedSum zeta_f_eps(const std::vector<Poly>& degree_basis, int n, int cutoff, bool all_nonzero) {
  if (degree_basis.empty()) throw ConfigError("empty lattice basis");
  return zeta_from_elements(monic_elements(degree_basis, cutoff), n, cutoff, all_nonzero);
}

TruncatedSum zeta_f_eps(const BasisDescription& desc, int n, int cutoff, bool all_nonzero) {
  const auto basis = desc.materialize(cutoff);
  if (basis.empty()) {
    return {Laurent(desc.field(), (long long)n * (cutoff + 1) - 1), zeta_tail_bound(n, cutoff), cutoff};
  }
  return zeta_f_eps(basis, n, cutoff, all_nonzero);
}

LaurentGenerators generators_from_polys(const std::vector<Poly>& degree_basis, long long complete_to,
                                        long long rel_prec) {
  LaurentGenerators g;
  g.complete_to = complete_to;
  if (degree_basis.empty()) return g;
  const long long D0 = degree_basis.front().degree();
  for (const Poly& p : degree_basis) g.gens.push_back(Laurent::from_poly(p, rel_prec - D0));
  return g;
}

PowerSumPair zeta_pair_enumerated(const LaurentGenerators& g, long long R, int threads) {
  if (g.gens.empty()) throw PrecisionError("lattice has no monic element within the degrees examined");
  if (R < 0) throw ConfigError("relative precision must be nonnegative");
  const FieldPtr& field = g.gens.front().field();
  const Field& F = *field;
  const long long q = F.q();
  const long long n1 = q - 1;
  const long long n2 = q * q - 1;

  std::vector<long long> deg;
  for (const auto& x : g.gens) {
    const auto top = x.top_degree();
    if (!top || x.leading() != Field::one()) throw InvariantViolation("lattice generator is not monic");
    if (!deg.empty() && *top <= deg.back()) throw InvariantViolation("lattice generator degrees must increase");
    deg.push_back(*top);
  }
  const long long D0 = deg.front();
  auto negligible = [&](long long D, long long k) { return (q - 1) * (D - D0 + k) > R; };

  std::size_t kstar = 0;
  while (kstar < deg.size() && !negligible(deg[kstar], (long long)kstar)) ++kstar;
  if (kstar == deg.size()) {
    const long long next = std::max(g.complete_to + 1, deg.back() + 1);
    if (!negligible(next, (long long)kstar)) {
      throw PrecisionError("lattice generators known only to degree " + std::to_string(g.complete_to) +
                           ", short of the enumeration cutoff");
    }
  }

  const long long floor1 = n1 * D0 + R;
  const long long floor2 = n2 * D0 + R;

  struct Item {
    std::size_t top;
    int second;  // coefficient code of gens[top-1], -1 when top == 0
  };
  std::vector<Item> items;
  for (std::size_t t = 0; t < kstar; ++t) {
    if (t == 0) {
      items.push_back({0, -1});
    } else {
      for (int c = 0; c < q; ++c) items.push_back({t, c});
    }
  }

  struct Acc {
    Laurent s1, s2;
    long long terms = 0;
  };
  auto run = [&](std::size_t first, std::size_t stride, Acc& acc) {
    for (std::size_t w = first; w < items.size(); w += stride) {
      const Item& it = items[w];
      const long long Dt = deg[it.top];
      const long long R1 = R - n1 * (Dt - D0);
      const long long R2 = R - n2 * (Dt - D0);
      Laurent base = g.gens[it.top];
      int below = int(it.top);
      if (it.second >= 0) {
        const Fq c{std::uint8_t(it.second)};
        if (!c.is_zero()) base += g.gens[it.top - 1].scaled(c);
        below = int(it.top) - 1;
      }
      auto leaf = [&](const Laurent& S) {
        if (S.floor() > Dt - R1) throw PrecisionError("lattice generator known too coarsely for the zeta sum");
        const Laurent x = S.with_prec(R1 - Dt).inv();
        const Laurent y = (n1 == 1) ? x : x.pow(n1);
        acc.s1 += y.with_prec(floor1);
        if (R2 >= 0) {
          const Laurent y2 = y.with_prec(n1 * Dt + R2);
          acc.s2 += (frobenius_q(y2) * y2).with_prec(floor2);
        }
        ++acc.terms;
      };
      auto dfs = [&](auto&& self, int i, const Laurent& S) -> void {
        if (i < 0) {
          leaf(S);
          return;
        }
        for (Fq c : F.elements()) self(self, i - 1, c.is_zero() ? S : S + g.gens[i].scaled(c));
      };
      dfs(dfs, below - 1, base);
    }
  };

  const int nthreads = std::max(1, std::min<int>(threads, int(items.size())));
  std::vector<Acc> accs(nthreads, Acc{Laurent(field, floor1), Laurent(field, floor2), 0});
  if (nthreads == 1) {
    run(0, 1, accs[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        try {
          run(std::size_t(t), std::size_t(nthreads), accs[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  PowerSumPair out{{Laurent(field, floor1), AbsValue::zero(), 0}, {Laurent(field, floor2), AbsValue::zero(), 0}, R, 0};
  for (const auto& a : accs) {
    out.z1.value += a.s1;
    out.z2.value += a.s2;
    out.terms += a.terms;
  }
  const int M = int(deg[kstar - 1]);
  out.z1.cutoff_degree = out.z2.cutoff_degree = M;
  out.z1.tail_bound = zeta_tail_bound(int(n1), M);
  out.z2.tail_bound = zeta_tail_bound(int(n2), M);
  return out;
}

namespace {

Laurent trim_rel(const Laurent& x, long long W) {
  const auto top = x.top_degree();
  if (!top) return x;
  return x.with_prec(W - *top);
}

// Lowest power of X in the Goss polynomial G_n, for |alpha_1| <= 1.
int goss_min_power(int n, int q) {
  std::vector<int> mp(n + 1, 0);
  mp[1] = 1;
  for (int j = 2; j <= n; ++j) {
    mp[j] = 1 + mp[j - 1];
    if (j - q >= 1) mp[j] = std::min(mp[j], 1 + mp[j - q]);
  }
  return mp[n];
}

}  // namespace

PowerSumPair zeta_pair(const LaurentGenerators& g, long long R, int /*threads*/) {
  if (g.gens.empty()) throw PrecisionError("lattice has no monic element within the degrees examined");
  if (R < 0) throw ConfigError("relative precision must be nonnegative");
  const FieldPtr& field = g.gens.front().field();
  const int q = field->q();
  const int n1 = q - 1;
  const int n2 = q * q - 1;

  std::vector<long long> deg;
  for (const auto& x : g.gens) {
    const auto top = x.top_degree();
    if (!top || x.leading() != Field::one()) throw InvariantViolation("lattice generator is not monic");
    if (!deg.empty() && *top <= deg.back()) throw InvariantViolation("lattice generator degrees must increase");
    deg.push_back(*top);
  }
  // Work in T^{-D0} Lambda, whose lowest generator has degree 0.
  const long long D0 = deg.front();
  const long long W = R + 2;
  const int mp = std::min(n1, goss_min_power(n2, q));
  auto tail_negligible = [&](long long D, long long k) { return (long long)(q - 1) * (D + k) > R; };

  Laurent s1(field, R), s2(field, R);
  Laurent alpha1(field, W);
  std::vector<Laurent> tq;  // e_{V_i}(g_i)^{-(q-1)}
  std::size_t k = 0;
  long long blocks = 0;
  for (;; ++k) {
    if (k == deg.size()) {
      const long long next = std::max(g.complete_to + 1, deg.back() + 1) - D0;
      if (tail_negligible(next, (long long)k)) break;
      throw PrecisionError("lattice generators known only to degree " + std::to_string(g.complete_to) +
                           ", short of the summation cutoff");
    }
    if (tail_negligible(deg[k] - D0, (long long)k)) break;
    // omega = e_{V_k}(g_k), V_k the span of the lower generators.
    Laurent omega = trim_rel(g.gens[k].shifted(-D0), W);
    for (const Laurent& c : tq) omega = trim_rel(omega - frobenius_q(omega) * c, W);
    if (omega.is_zero()) throw PrecisionError("lattice generator known too coarsely for the zeta sum");
    const Laurent t = omega.inv();
    const long long s = -*t.top_degree();
    // |G_n(t)| <= |t|^mp and |t| only shrinks from here on.
    if (k > 0 && s * mp > R) break;

    std::vector<Laurent> G{Laurent(field, W), t};
    for (int j = 2; j <= n2; ++j) {
      Laurent inner = G[j - 1];
      if (j - q >= 1) inner += alpha1 * G[j - q];
      G.push_back(t * inner);
    }
    s1 += G[n1].with_prec(R);
    s2 += G[n2].with_prec(R);
    const Laurent c = G[1].pow(q - 1);
    alpha1 -= c;
    tq.push_back(c);
    ++blocks;
  }

  const int M = int(deg[k == 0 ? 0 : k - 1]);
  PowerSumPair out{{s1.shifted(-(long long)n1 * D0), zeta_tail_bound(n1, M), M},
                   {s2.shifted(-(long long)n2 * D0), zeta_tail_bound(n2, M), M},
                   R,
                   blocks};
  return out;
}

ApproximantValue assemble_approximant(const Laurent& z1, const Laurent& z2, int eps_log, int cutoff,
                                      AbsValue tail_bound) {
  const FieldPtr& field = z1.field();
  const int q = field->q();
  if (z1.is_zero()) throw PrecisionError("zeta(q-1) vanishes at retained precision");
  const Laurent denom = frobenius_q(z1) * z1;
  const Laurent J_tilde = z2 * denom.inv();

  const long long big = J_tilde.prec() + 4LL * q * q + 8;
  const Laurent br1 = Laurent::from_poly(Poly::t_power(field, q) - Poly::t_power(field, 1), big);
  const Laurent br2 = Laurent::from_poly(Poly::t_power(field, q * q) - Poly::t_power(field, 1), big);
  const Laurent J = br2 * br1.pow(q + 1).inv() * J_tilde;
  const Laurent delta = br1.inv() - J;

  ApproximantValue v{std::nullopt, J, J_tilde, eps_log, cutoff, tail_bound, 0};
  if (delta.is_zero()) {
    v.infinity_floor = delta.floor();
  } else {
    v.j = delta.inv();
  }
  return v;
}

long long initial_rel_prec(const PrecisionPlan& plan, int q) {
  if (plan.rel_start > 0) return plan.rel_start;
  // |j| has come out as q^{q^2+q+1} on every lattice tried, which costs twice
  // that below the leading term of J_tilde.
  return plan.target + 2LL * q * q + q + 4;
}

PowerSumPair zeta_pair(const QuadraticUnit& u, EpsilonIndex idx, long long rel_prec, int threads) {
  const BasisDescription desc = basis_lambda(u, idx);
  const int q = u.F().q();
  const long long max_deg = desc.lowest_degree() + rel_prec / (q - 1) + 1;
  const auto basis = desc.materialize(int(max_deg));
  return zeta_pair(generators_from_polys(basis, max_deg, rel_prec), rel_prec, threads);
}

ApproximantValue solve_adaptive(const PrecisionPlan& plan, int q,
                                const std::function<ApproximantValue(long long)>& compute) {
  long long R = initial_rel_prec(plan, q);
  bool retried_infinite = false;
  while (true) {
    ApproximantValue v = compute(R);
    if (v.j && v.j->floor() <= -plan.target) return v;
    long long next = 0;
    if (v.j) {
      next = R + (v.j->floor() + plan.target) + 2;
    } else {
      // Vanishing at this precision: one more look before calling it infinite.
      if (retried_infinite) return v;
      retried_infinite = true;
      next = 2 * R;
    }
    if (next > plan.rel_max) {
      if (!v.j) return v;
      throw PrecisionError("j not determined to T^-" + std::to_string(plan.target) + " within relative precision " +
                           std::to_string(plan.rel_max));
    }
    R = next;
  }
}

ApproximantValue j_eps(const QuadraticUnit& u, EpsilonIndex idx, const PrecisionPlan& plan) {
  return solve_adaptive(plan, u.F().q(), [&](long long R) {
    const PowerSumPair z = zeta_pair(u, idx, R, plan.threads);
    return assemble_approximant(z.z1.value, z.z2.value, idx.eps_log(), z.z1.cutoff_degree, z.z1.tail_bound);
  });
}

SeriesSource rational_series(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw ConfigError("denominator must be nonzero");
  return [num, den](long long prec) {
    long long extra = 2LL * den.degree() + 4;
    while (true) {
      const long long p = prec + extra;
      const Laurent n = Laurent::from_poly(num, p);
      const Laurent out = n * Laurent::from_poly(den, p + std::max(0LL, n.magnitude_bound())).inv();
      if (out.floor() <= -prec) return out.with_prec(prec);
      extra *= 2;
    }
  };
}

int rational_threshold(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw ConfigError("denominator must be nonzero");
  const Poly g = gcd(num, den);
  return divmod(den, g).first.degree();
}

KernelLattice kernel_lattice(const SeriesSource& f, int eps_log, long long rel_prec, int q, int max_degree) {
  const long long m = std::max(0, -eps_log);
  long long B = m + 2;
  while (true) {
    if (B > max_degree) {
      throw PrecisionError("no lattice element found up to degree " + std::to_string(max_degree));
    }
    const Laurent fx = f(m + B + 2);
    std::vector<Poly> basis = lambda_basis(fx, eps_log, int(B));
    if (basis.empty()) {
      B *= 2;
      continue;
    }
    const long long need = basis.front().degree() + rel_prec / (q - 1) + 1;
    if (B >= need) return {std::move(basis), B};
    B = std::min<long long>(need, max_degree);
    if (B < need) throw PrecisionError("lattice basis would exceed degree " + std::to_string(max_degree));
  }
}

ApproximantValue j_eps(const SeriesSource& f, int eps_log, const PrecisionPlan& plan) {
  const FieldPtr field = f(1).field();
  const int q = field->q();
  return solve_adaptive(plan, q, [&](long long R) {
    const KernelLattice lat = kernel_lattice(f, eps_log, R, q);
    const PowerSumPair z = zeta_pair(generators_from_polys(lat.basis, lat.complete_to, R), R, plan.threads);
    return assemble_approximant(z.z1.value, z.z2.value, eps_log, z.z1.cutoff_degree, z.z1.tail_bound);
  });
}

ApproximantValue j_eps_from_elements(const std::vector<Poly>& elements, int eps_log, int cutoff) {
  if (elements.empty()) throw ConfigError("empty element set");
  const int q = elements.front().F().q();
  const TruncatedSum z1 = zeta_from_elements(elements, q - 1, cutoff);
  const TruncatedSum z2 = zeta_from_elements(elements, q * q - 1, cutoff);
  return assemble_approximant(z1.value, z2.value, eps_log, cutoff, z1.tail_bound);
}

std::string j_text(const ApproximantValue& v) { return v.j ? to_string(*v.j) : std::string("inf"); }

}  // namespace qtj
