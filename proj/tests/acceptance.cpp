// Acceptance run: one PASS/FAIL line per criterion with its pinned tolerance.
// Exit status 1 when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qtj/errors.hpp"
#include "qtj/general_quadratic.hpp"
#include "qtj/lattice.hpp"
#include "qtj/limit_values.hpp"
#include "qtj/quadratic_unit.hpp"
#include "qtj/zeta_approx.hpp"

using namespace qtj;

namespace {

constexpr long long kFloor = 8;  // comparison floor q^-8
constexpr long long kUnitPrec = 96;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct GridUnit {
  QuadraticUnit u;
  std::string label;
};

// q in {2, 3}, every monic a with 1 <= deg a <= 2, every b in F_q^x.
std::vector<GridUnit> test_grid() {
  std::vector<GridUnit> out;
  for (int p : {2, 3}) {
    const FieldPtr F = Field::make(p);
    for (int d = 1; d <= 2; ++d) {
      long long count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (long long code = 0; code < count; ++code) {
        std::vector<Fq> c;
        long long x = code;
        for (int i = 0; i < d; ++i, x /= p) c.push_back(F->from_int(x % p));
        c.push_back(Field::one());
        const Poly a(F, c);
        for (Fq b : F->units()) {
          out.push_back({solve(a, b, kUnitPrec), "q=" + std::to_string(p) + " a=" + to_string(a) + " b=" + F->to_string(b)});
        }
      }
    }
  }
  return out;
}

PrecisionPlan plan_for(long long target) {
  PrecisionPlan plan;
  plan.target = target;
  return plan;
}

SeriesSource unit_source(const QuadraticUnit& u, bool conjugate) {
  return [u, conjugate](long long prec) {
    const QuadraticUnit v = prec > u.prec() ? solve(u.a(), u.b(), prec) : u;
    return conjugate ? v.f_conj() : v.f();
  };
}

Outcome generator_oracle(const std::vector<GridUnit>& grid) {
  Outcome o;
  int cells = 0, bad = 0;
  for (const GridUnit& g : grid) {
    const int d = g.u.d();
    for (int N = 0; N <= 3; ++N) {
      for (int l = 0; l < d; ++l) {
        const int bound = (N + 3) * d;
        const auto span = span_elements(g.u.field(), basis_lambda(g.u, {N, l, d}).materialize(bound));
        const auto brute = brute_force_lambda(g.u.f(), -(N * d + l), bound);
        ++cells;
        if (span != brute) {
          ++bad;
          if (o.pass) o.detail = " first mismatch " + g.label + " N=" + std::to_string(N) + " l=" + std::to_string(l);
          o.pass = false;
        }
      }
    }
  }
  o.detail = std::to_string(cells - bad) + "/" + std::to_string(cells) + " cells equal" + o.detail;
  return o;
}

Outcome error_law(const std::vector<GridUnit>& grid) {
  Outcome o;
  int checks = 0;
  for (const GridUnit& g : grid) {
    for (int n = 0; n <= 8; ++n) {
      for (int l = 0; l < g.u.d(); ++l) {
        ++checks;
        try {
          if (error_norm(g.u, n, l) != AbsValue::power(l - (n + 1) * g.u.d())) o.pass = false;
        } catch (const std::exception& e) {
          o.pass = false;
          o.detail = std::string(" ") + e.what();
        }
      }
    }
  }
  o.detail = std::to_string(checks) + " norms" + o.detail;
  return o;
}

Outcome binet_identity(const std::vector<GridUnit>& grid) {
  Outcome o;
  int checks = 0;
  for (const GridUnit& g : grid) {
    const QuadraticUnit& u = g.u;
    const auto Q = binet_polys(u.a(), u.b(), 8);
    const long long prec = u.prec();
    for (int n = 0; n <= 8; ++n) {
      const Laurent closed = (u.f().pow(n + 1) - u.f_conj().pow(n + 1)) / u.sqrtD();
      const Laurent diff = Laurent::from_poly(Q[n], prec) - closed;
      ++checks;
      if (!diff.is_zero() || diff.floor() > -8) o.pass = false;
    }
    try {
      binet_terms(u, 8);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string(" ") + e.what();
    }
  }
  o.detail = std::to_string(checks) + " identities, char 2 uses sqrt(D) = a" + o.detail;
  return o;
}

struct GridLimits {
  std::vector<ValueSet> sets;
};

Outcome convergence(const std::vector<GridUnit>& grid, const GridLimits& lim, bool& any_infinite) {
  Outcome o;
  int cells = 0, below = 0, monotone = 0, identities = 0, identity_bad = 0;
  std::string worst;
  long long worst_gap = -1000;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const QuadraticUnit& u = grid[i].u;
    for (int l = 0; l < u.d(); ++l) {
      const auto trace = convergence_trace(u, lim.sets[i].values[l], 0, 8, plan_for(12));
      ++cells;
      bool dec = true;
      long long prev = 1LL << 40;
      for (const ConvergencePoint& pt : trace) {
        if (pt.infinite) any_infinite = true;
        if (pt.infinite || !pt.gap.is_power()) continue;
        if (pt.gap.log_q() >= prev) dec = false;
        prev = pt.gap.log_q();
      }
      monotone += dec;
      const AbsValue last = trace.back().gap;
      if (last.less_than_power(-kFloor).value_or(false)) {
        ++below;
      } else {
        o.pass = false;
        if (last.log_q() > worst_gap) {
          worst_gap = last.log_q();
          worst = grid[i].label + " l=" + std::to_string(l) + " gap " + last.to_string();
        }
      }
      for (int N = 1; N <= 8; ++N) {
        const EpsilonIndex idx{N, l, u.d()};
        const long long R = 24;
        const PowerSumPair z = zeta_pair(u, idx, R);
        const Laurent direct = assemble_approximant(z.z1.value, z.z2.value, idx.eps_log(), 0, z.z1.tail_bound).J_tilde;
        ++identities;
        if (!direct.agrees_on_common(hat_J_tilde(u, idx, R))) {
          ++identity_bad;
          o.pass = false;
        }
      }
    }
  }
  std::ostringstream os;
  os << below << "/" << cells << " cells below q^-8 at N=8, " << monotone << "/" << cells << " monotone, hat identity "
     << (identities - identity_bad) << "/" << identities;
  if (!worst.empty()) os << "; largest gap " << worst;
  o.detail = os.str();
  return o;
}

Outcome cardinality(const std::vector<GridUnit>& grid, const GridLimits& lim) {
  Outcome o;
  int distinct = 0, conj_ok = 0, conj_total = 0, max_N = 0;
  std::string bad;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const QuadraticUnit& u = grid[i].u;
    const ValueSet& vs = lim.sets[i];
    if (vs.values.size() == std::size_t(u.d()) && vs.distinct) {
      ++distinct;
    } else {
      o.pass = false;
      bad = grid[i].label;
    }
    // Scan j_eps(f') upward until two consecutive values agree at the floor;
    // that stabilized cluster must be j(f)_l.
    const SeriesSource conj = unit_source(u, true);
    for (int l = 0; l < u.d(); ++l) {
      ++conj_total;
      std::optional<Laurent> prev;
      bool have_prev = false, matched = false;
      for (int N = 1; N <= 40; ++N) {
        const ApproximantValue v = j_eps(conj, -(N * u.d() + l), plan_for(12));
        if (have_prev && values_agree(prev, v.j, kFloor)) {
          matched = values_agree(v.j, vs.values[l].j_l, kFloor);
          max_N = std::max(max_N, N);
          break;
        }
        prev = v.j;
        have_prev = true;
      }
      if (matched) {
        ++conj_ok;
      } else {
        o.pass = false;
        bad = grid[i].label + " l=" + std::to_string(l) + " (conjugate)";
      }
    }
  }
  std::ostringstream os;
  os << distinct << "/" << grid.size() << " value sets with d distinct values, conjugate clusters " << conj_ok << "/"
     << conj_total << " (stabilized by N=" << max_N << ")";
  if (!bad.empty()) os << "; failing " << bad;
  o.detail = os.str();
  return o;
}

Outcome unit_J_tilde(const std::vector<GridUnit>& grid, const GridLimits& lim) {
  Outcome o;
  int checks = 0, ok = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const LimitValue& v : lim.sets[i].values) {
      ++checks;
      ok += v.J_tilde_is_unit();
    }
    for (int l = 0; l < grid[i].u.d(); ++l) {
      const LimitValue t = limit_value(grid[i].u, l, 2);
      ++checks;
      ok += t.J_tilde_is_unit();
    }
  }
  o.pass = ok == checks;
  o.detail = std::to_string(ok) + "/" + std::to_string(checks) + " limits (lattice and tuple routes)";
  return o;
}

Outcome rationality(bool grid_infinite) {
  Outcome o;
  std::mt19937 rng(7);
  int cells = 0, inf = 0;
  std::string degrees;
  for (int s = 0; s < 10; ++s) {
    const FieldPtr F = Field::make(std::uniform_int_distribution<int>(0, 1)(rng) ? 3 : 2);
    const int q = F->q();
    auto draw = [&](int deg) {
      std::vector<long long> c;
      for (int i = 0; i < deg; ++i) c.push_back(std::uniform_int_distribution<int>(0, q - 1)(rng));
      c.push_back(std::uniform_int_distribution<int>(1, q - 1)(rng));
      return Poly::from_ints(F, c);
    };
    Poly num = draw(std::uniform_int_distribution<int>(0, 3)(rng));
    Poly den = draw(std::uniform_int_distribution<int>(1, 3)(rng));
    const Poly g = gcd(num, den);
    num = divmod(num, g).first;
    den = divmod(den, g).first;
    const int threshold = rational_threshold(num, den);
    degrees += (s ? "," : "") + std::to_string(num.degree()) + "/" + std::to_string(den.degree());
    const SeriesSource src = rational_series(num, den);
    for (int m = std::max(1, threshold); m <= threshold + 3; ++m) {
      ++cells;
      if (j_eps(src, -m, plan_for(12)).is_infinite()) ++inf;
    }
  }
  o.pass = inf == cells && !grid_infinite;
  o.detail = std::to_string(inf) + "/" + std::to_string(cells) + " infinite from m = deg Q on (deg P/deg Q " + degrees +
             "), quadratic grid " + (grid_infinite ? "has" : "has no") + " infinity";
  return o;
}

Outcome sandwich() {
  Outcome o;
  const FieldPtr F = Field::make(2);
  const QuadraticUnit u = solve(Poly::t_power(F, 1), Field::one(), kUnitPrec);
  std::vector<Poly> small;
  for (const Poly& p : polys_up_to_degree(F, 2)) {
    if (!p.is_zero()) small.push_back(p);
  }
  int cells = 0, ok = 0, constant = 0, triples = 0, max_index = 0;
  for (const Poly& x : {Poly(F), Poly::from_ints(F, {1, 1})}) {
    for (const Poly& y : small) {
      for (const Poly& z : small) {
        const GeneralQuadratic g(u, x, y, z);
        int first = -1;
        bool same = true;
        for (int m = z.degree() + 1; m <= z.degree() + 4; ++m) {
          const int D = m + 2 * (y.degree() + z.degree()) + 4;
          const SandwichReport r = sandwich_check(g, -m, D);
          const CosetDecomposition c = coset_reps(g, -m, D);
          ++cells;
          const bool good = r.lower_ok && r.upper_ok && r.stable && r.index_dim <= index_bound(y, z) &&
                            c.exact_cover && c.coefficients_low && c.reps_outside_sublattice;
          ok += good;
          max_index = std::max(max_index, r.index_dim);
          if (first < 0) first = r.index_dim;
          same = same && r.index_dim == first;
        }
        ++triples;
        constant += same;
      }
    }
  }
  o.pass = ok == cells && constant == triples;
  o.detail = std::to_string(ok) + "/" + std::to_string(cells) + " (x,y,z,eps) cells, index constant in eps for " +
             std::to_string(constant) + "/" + std::to_string(triples) + " triples, max index " + std::to_string(max_index);
  return o;
}

Outcome cluster_sample() {
  Outcome o;
  std::mt19937 rng(1);
  std::ostringstream os;
  int stable = 0;
  for (int s = 0; s < 5; ++s) {
    const int p = std::uniform_int_distribution<int>(0, 1)(rng) ? 3 : 2;
    const FieldPtr F = Field::make(p);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    auto rc = [&](bool nz) { return std::uniform_int_distribution<int>(nz ? 1 : 0, p - 1)(rng); };
    std::vector<long long> ac(d + 1);
    for (int i = 0; i < d; ++i) ac[i] = rc(false);
    ac[d] = 1;
    const Fq b = F->from_int(rc(true));
    auto poly1 = [&](bool nonzero) {
      while (true) {
        const long long c0 = rc(false), c1 = rc(false);
        const Poly P = Poly::from_ints(F, {c0, c1});
        if (!nonzero || !P.is_zero()) return P;
      }
    };
    const Poly x = poly1(false), y = poly1(true), z = poly1(true);
    const GeneralQuadratic g(solve(Poly::from_ints(F, ac), b, kUnitPrec), x, y, z);
    std::vector<int> ls;
    for (int l = 0; l < d; ++l) ls.push_back(l);
    const ClusterScan s6 = cluster_values(g, ls, 1, 6, plan_for(12), kFloor);
    const ClusterScan s10 = cluster_values(g, ls, 1, 10, plan_for(12), kFloor);
    bool members = true;
    for (const Cluster& c : s10.clusters) {
      for (const auto& [N, l] : c.support) {
        for (const ScanPoint& pt : s10.points) {
          if (pt.N == N && pt.l == l) members = members && values_agree(pt.j, c.value, kFloor);
        }
      }
    }
    const bool same = same_clusters(s6.clusters, s10.clusters, kFloor);
    stable += same && members;
    os << (s ? "; " : "") << "h=(" << to_string(x) << " + (" << to_string(y) << ")f)/(" << to_string(z) << ") q=" << p
       << " a=" << to_string(g.unit().a()) << ": " << s6.clusters.size() << " vs " << s10.clusters.size();
  }
  o.pass = stable == 5;
  o.detail = std::to_string(stable) + "/5 stable between N<=6 and N<=10 [" + os.str() + "]";
  return o;
}

Outcome kernel_properties(const std::vector<GridUnit>& grid) {
  Outcome o;
  std::mt19937_64 rng(10);
  int ultra = 0, mult = 0, roots = 0, total = 0;
  for (int s = 0; s < 300; ++s) {
    const int pick = int(rng() % 3);
    const FieldPtr F = pick == 0 ? Field::make(2) : pick == 1 ? Field::make(3) : Field::make(2, 2);
    auto draw = [&]() {
      const long long top = static_cast<long long>(rng() % 7) - 3;
      std::vector<Fq> c{Fq{std::uint8_t(1 + rng() % (F->q() - 1))}};
      for (long long e = top - 1; e >= -20; --e) c.push_back(Fq{std::uint8_t(rng() % F->q())});
      return Laurent::from_descending(F, top, c, 20);
    };
    const Laurent x = draw(), y = draw();
    ++total;
    const Laurent sum = x + y;
    const long long mx = std::max(x.abs().log_q(), y.abs().log_q());
    ultra += sum.magnitude_bound() <= mx &&
             (x.abs().log_q() == y.abs().log_q() || sum.abs() == AbsValue::power(mx));
    mult += (x * y).abs() == x.abs() * y.abs();
    const Laurent r = sqrt(x * x);
    roots += (r * r).agrees_on_common(x * x) && (r.agrees_on_common(x) || r.agrees_on_common(-x));
  }
  // Exhaustive zeta sums against the basis description, same cutoff.
  int dual = 0, dual_total = 0, tails = 0, tail_total = 0;
  for (const GridUnit& g : grid) {
    const int d = g.u.d();
    const int q = g.u.F().q();
    for (int m = 1; m <= 2 * d; ++m) {
      const EpsilonIndex idx = EpsilonIndex::from_m(m, d);
      const BasisDescription desc = basis_lambda(g.u, idx);
      const int cutoff = desc.lowest_degree() + (q == 2 ? 6 : 3);
      const auto brute = brute_force_lambda(g.u.f(), idx.eps_log(), cutoff);
      for (int n : {q - 1, q * q - 1}) {
        const TruncatedSum a = zeta_f_eps(desc, n, cutoff);
        const TruncatedSum b = zeta_from_elements(brute, n, cutoff);
        ++dual_total;
        dual += a.value.floor() == b.value.floor() && a.value.agrees_on_common(b.value);
        const TruncatedSum c1 = zeta_f_eps(desc, n, cutoff - 1);
        const TruncatedSum c2 = zeta_f_eps(desc, n, cutoff - 2);
        ++tail_total;
        tails += a.value.agrees_on_common(c1.value) && c1.value.agrees_on_common(c2.value) &&
                 (a.value - c1.value.with_prec(a.value.prec())).magnitude_bound() <= c1.tail_bound.log_q() &&
                 (c1.value - c2.value.with_prec(c1.value.prec())).magnitude_bound() <= c2.tail_bound.log_q();
      }
    }
  }
  // Translation and scalar invariance through the kernel path.
  int inv = 0, inv_total = 0;
  for (std::size_t i = 0; i < grid.size(); i += 3) {
    const QuadraticUnit& u = grid[i].u;
    const FieldPtr F = u.field();
    const Poly shift = Poly::from_ints(F, {1, 0, 1, 1});
    const Fq c = F->units().back();
    const SeriesSource moved = [u, shift, c](long long prec) {
      const QuadraticUnit v = prec > u.prec() ? solve(u.a(), u.b(), prec) : u;
      return (v.f() + Laurent::from_poly(shift, prec)).scaled(c);
    };
    for (int m = 1; m <= 2 * u.d(); ++m) {
      const ApproximantValue base = j_eps(unit_source(u, false), -m, plan_for(12));
      const ApproximantValue other = j_eps(moved, -m, plan_for(12));
      ++inv_total;
      inv += base.j && other.j && base.j->agrees_above(*other.j, -12);
    }
  }
  o.pass = ultra == total && mult == total && roots == total && dual == dual_total && tails == tail_total &&
           inv == inv_total;
  std::ostringstream os;
  os << "ultrametric " << ultra << "/" << total << ", multiplicative " << mult << "/" << total << ", sqrt " << roots << "/"
     << total << ", dual-path zeta " << dual << "/" << dual_total << ", translation+scalar " << inv << "/" << inv_total
     << ", tail bounds " << tails << "/" << tail_total;
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  auto report = [&](int id, const char* name, const char* tol, const std::function<Outcome()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("[%s] C%-2d %-28s tol: %-34s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, tol, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  };

  const std::vector<GridUnit> grid = test_grid();
  GridLimits lim;
  for (const GridUnit& g : grid) lim.sets.push_back(value_set(g.u, plan_for(12), kFloor));
  bool grid_infinite = false;
  for (const ValueSet& vs : lim.sets) {
    for (const LimitValue& v : vs.values) grid_infinite = grid_infinite || !v.j_l.has_value();
  }

  report(1, "basis vs exhaustive lattice", "exact set equality", [&] { return generator_oracle(grid); });
  report(2, "error law", "exact, ||T^l Qbar_n f|| = q^(l-(n+1)d)", [&] { return error_law(grid); });
  report(3, "Binet identity", "exact on retained coefficients", [&] { return binet_identity(grid); });
  report(4, "convergence to j(f)_l", "gap < q^-8 by N=8; hat identity exact",
         [&] { return convergence(grid, lim, grid_infinite); });
  report(5, "d distinct limit values", "distinct at q^-8; conjugate at q^-8", [&] { return cardinality(grid, lim); });
  report(6, "|J_tilde(f)_l| = 1", "exact leading term", [&] { return unit_J_tilde(grid, lim); });
  report(7, "rationals become infinite", "exact: inf at retained precision", [&] { return rationality(grid_infinite); });
  report(8, "sandwich and index bound", "exact containment, index <= 2(deg y+deg z)", [] { return sandwich(); });
  report(9, "finitely many clusters", "clusters at q^-8, N<=6 vs N<=10", [] { return cluster_sample(); });
  report(10, "kernel properties", "exact", [&] { return kernel_properties(grid); });

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/10 criteria passed in %.1fs\n", 10 - failed, total);
  return failed == 0 ? 0 : 1;
}
