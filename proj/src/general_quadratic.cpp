#include "qtj/general_quadratic.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "qtj/errors.hpp"
#include "qtj/limit_values.hpp"

namespace qtj {

GeneralQuadratic::GeneralQuadratic(QuadraticUnit unit, Poly x, Poly y, Poly z)
    : unit_(std::move(unit)), x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  if (y_.is_zero()) throw ConfigError("y must be nonzero");
  if (z_.is_zero()) throw ConfigError("z must be nonzero");
}

Laurent GeneralQuadratic::f(long long prec) const {
  if (unit_.prec() >= prec) return unit_.f().with_prec(prec);
  return solve(unit_.a(), unit_.b(), prec).f();
}

Laurent GeneralQuadratic::h(long long prec) const {
  long long extra = y_.degree() + 2 * z_.degree() + 4;
  while (true) {
    const long long p = prec + extra;
    const Laurent num = Laurent::from_poly(x_, p) + Laurent::from_poly(y_, p) * f(p);
    const Laurent out = num * Laurent::from_poly(z_, p + num.magnitude_bound()).inv();
    if (out.floor() <= -prec) return out.with_prec(prec);
    extra *= 2;
  }
}

SeriesSource GeneralQuadratic::source() const {
  return [g = *this](long long prec) { return g.h(prec); };
}

std::vector<Poly> GeneralQuadratic::min_poly() const {
  const Poly& a = unit_.a();
  const Poly b = Poly::constant(field(), unit_.b());
  const Poly two_x = x_ + x_;
  return {x_ * x_ + a * x_ * y_ - b * y_ * y_, -(two_x * z_ + a * y_ * z_), z_ * z_};
}

int quotient_dimension(const Poly& modulus, int K) {
  if (modulus.is_zero()) throw ConfigError("modulus must be nonzero");
  const Field& F = modulus.F();
  // Row-reduce the multiples T^i modulus, i = 0..K - deg modulus, as
  // coefficient vectors of length K+1.
  std::vector<std::vector<Fq>> rows;
  for (int i = 0; i + modulus.degree() <= K; ++i) {
    std::vector<Fq> v(K + 1, Field::zero());
    const Poly p = modulus.shifted(i);
    for (int k = 0; k <= p.degree(); ++k) v[k] = p.coeff(k);
    rows.push_back(std::move(v));
  }
  int rank = 0;
  for (int col = K; col >= 0 && rank < int(rows.size()); --col) {
    int piv = -1;
    for (int r = rank; r < int(rows.size()); ++r) {
      if (!rows[r][col].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    const Fq s = F.inv(rows[rank][col]);
    for (auto& x : rows[rank]) x = F.mul(x, s);
    for (int r = 0; r < int(rows.size()); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const Fq c = rows[r][col];
      for (int k = 0; k <= K; ++k) rows[r][k] = F.sub(rows[r][k], F.mul(c, rows[rank][k]));
    }
    ++rank;
  }
  return K + 1 - rank;
}

int index_bound(const Poly& y, const Poly& z) { return 2 * (y.degree() + z.degree()); }

namespace {

int log_q_size(std::size_t n, int q) {
  int k = 0;
  std::size_t s = 1;
  while (s < n) {
    s *= std::size_t(q);
    ++k;
  }
  if (s != n) throw InvariantViolation("lattice size is not a power of q");
  return k;
}

bool in_lambda(const Laurent& f, const Poly& p, int eps_log) {
  if (p.is_zero()) return true;
  const auto r = (Laurent::from_poly(p, f.prec() + p.degree()) * f).fractional_norm().less_than_power(eps_log);
  if (!r) throw PrecisionError("series known too coarsely for a membership test");
  return *r;
}

struct Spaces {
  std::vector<Poly> middle;  // Lambda_eps(h), degree <= D
  std::vector<Poly> lower;   // z Lambda_{eps/|y|}(f), degree <= D
};

Spaces spaces(const GeneralQuadratic& g, int eps_log, int D) {
  const int m = -eps_log;
  const long long prec = D + m + g.y().degree() + g.z().degree() + 4;
  Spaces s;
  s.middle = brute_force_lambda(g.h(prec), eps_log, D);
  const int Dl = D - g.z().degree();
  if (Dl < 0) {
    s.lower = {Poly(g.field(), {})};
  } else {
    for (const Poly& mu : brute_force_lambda(g.f(prec), eps_log - g.y().degree(), Dl)) s.lower.push_back(g.z() * mu);
  }
  std::sort(s.lower.begin(), s.lower.end());
  return s;
}

void require_hypothesis(const GeneralQuadratic& g, int eps_log) {
  if (g.z().degree() + eps_log >= 0) throw ConfigError("need |z| eps < 1");
}

}  // namespace

SandwichReport sandwich_check(const GeneralQuadratic& g, int eps_log, int deg_bound) {
  require_hypothesis(g, eps_log);
  const int q = g.field()->q();
  const long long fprec = deg_bound + g.y().degree() - eps_log + 4;
  const Laurent fx = g.f(fprec);
  SandwichReport rep;
  rep.eps_log = eps_log;
  rep.deg_bound = deg_bound;
  rep.bound = index_bound(g.y(), g.z());

  const Spaces s = spaces(g, eps_log, deg_bound);
  rep.lower_ok = std::all_of(s.lower.begin(), s.lower.end(), [&](const Poly& p) {
    return std::binary_search(s.middle.begin(), s.middle.end(), p);
  });
  const int upper_log = g.z().degree() + eps_log;
  rep.upper_ok = std::all_of(s.middle.begin(), s.middle.end(),
                             [&](const Poly& lam) { return in_lambda(fx, g.y() * lam, upper_log); });
  rep.middle_dim = log_q_size(s.middle.size(), q);
  rep.lower_dim = log_q_size(s.lower.size(), q);
  rep.index_dim = rep.middle_dim - rep.lower_dim;

  rep.stable = true;
  for (int extra = 1; extra <= 2; ++extra) {
    const Spaces t = spaces(g, eps_log, deg_bound + extra);
    const int idx = log_q_size(t.middle.size(), q) - log_q_size(t.lower.size(), q);
    if (idx != rep.index_dim) rep.stable = false;
  }
  return rep;
}

CosetDecomposition coset_reps(const GeneralQuadratic& g, int eps_log, int deg_bound) {
  require_hypothesis(g, eps_log);
  const int d = g.d();
  const Spaces s = spaces(g, eps_log, deg_bound);
  auto in_lower = [&](const Poly& p) { return std::binary_search(s.lower.begin(), s.lower.end(), p); };

  CosetDecomposition out;
  out.eps_log = eps_log;
  out.deg_bound = deg_bound;
  std::vector<Poly> reps{Poly(g.field(), {})};
  for (const Poly& lam : s.middle) {
    const bool covered = std::any_of(reps.begin(), reps.end(), [&](const Poly& r) { return in_lower(lam - r); });
    if (!covered) reps.push_back(lam);
  }
  const bool lower_inside = std::all_of(s.lower.begin(), s.lower.end(), [&](const Poly& p) {
    return std::binary_search(s.middle.begin(), s.middle.end(), p);
  });
  out.exact_cover = lower_inside && reps.size() * s.lower.size() == s.middle.size();

  const int upper_log = g.z().degree() + eps_log;
  const EpsilonIndex outer = EpsilonIndex::from_m(-upper_log, d);
  const BasisDescription desc = basis_lambda(g.unit(), outer);
  const long long fprec = deg_bound + g.y().degree() - eps_log + 4;
  const Laurent fx = g.f(fprec);

  out.reps_outside_sublattice = true;
  out.coefficients_low = true;
  for (const Poly& lam : reps) {
    CosetRep cr{lam, {}, 0, -1};
    if (!lam.is_zero()) {
      const Poly ylam = g.y() * lam;
      if (in_lower(lam) || !in_lambda(fx, ylam, upper_log)) out.reps_outside_sublattice = false;
      std::vector<Generator> gens = desc.generators(ylam.degree());
      std::sort(gens.begin(), gens.end(), [&](const Generator& a, const Generator& b) { return a.degree(d) < b.degree(d); });
      std::vector<Poly> basis;
      for (const auto& gen : gens) basis.push_back(desc.generator_poly(gen));
      const auto coords = coordinates(basis, ylam);
      if (!coords) throw InvariantViolation("y lam outside Lambda_{|z| eps}(f)");
      std::vector<std::pair<int, Poly>> exp;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if ((*coords)[i].is_zero()) continue;
        const Poly term = Poly::monomial(g.field(), (*coords)[i], gens[i].shift);
        auto it = std::find_if(exp.begin(), exp.end(), [&](const auto& e) { return e.first == gens[i].n; });
        if (it == exp.end()) {
          exp.emplace_back(gens[i].n, term);
        } else {
          it->second += term;
        }
      }
      std::sort(exp.begin(), exp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& e : exp) {
        if (e.second.degree() > d - 1) out.coefficients_low = false;
      }
      if (!exp.empty()) {
        cr.window_low = exp.front().first;
        cr.window_high = exp.back().first;
        out.window_width = std::max(out.window_width, cr.window_high - cr.window_low);
      }
      cr.expansion = std::move(exp);
    }
    out.reps.push_back(std::move(cr));
  }
  return out;
}

std::vector<Cluster> cluster_points(const std::vector<ScanPoint>& points, long long comparison_floor) {
  std::vector<Cluster> out;
  for (const auto& pt : points) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Cluster& c) { return values_agree(c.value, pt.j, comparison_floor); });
    if (it == out.end()) {
      out.push_back({pt.j, {{pt.N, pt.l}}});
    } else {
      it->support.emplace_back(pt.N, pt.l);
    }
  }
  return out;
}

bool same_clusters(const std::vector<Cluster>& a, const std::vector<Cluster>& b, long long comparison_floor) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Cluster& x) {
    return std::any_of(b.begin(), b.end(),
                       [&](const Cluster& y) { return values_agree(x.value, y.value, comparison_floor); });
  });
}

ClusterScan cluster_values(const GeneralQuadratic& g, const std::vector<int>& l_list, int N_min, int N_max,
                           const PrecisionPlan& plan0, long long comparison_floor) {
  const int d = g.d();
  for (int l : l_list) {
    if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  }
  PrecisionPlan plan = plan0;
  plan.target = std::max(plan.target, comparison_floor);
  plan.threads = 1;

  ClusterScan scan;
  scan.comparison_floor = comparison_floor;
  for (int N = N_min; N <= N_max; ++N) {
    for (int l : l_list) {
      if (N * d + l > 0) scan.points.push_back({N, l, std::nullopt});
    }
  }
  const SeriesSource src = g.source();
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < scan.points.size(); i += stride) {
      ScanPoint& pt = scan.points[i];
      pt.j = j_eps(src, -(pt.N * d + pt.l), plan).j;
    }
  };
  const int nthreads = std::max(1, std::min<int>(plan0.threads, int(scan.points.size())));
  if (nthreads == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        try {
          run(std::size_t(t), std::size_t(nthreads));
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
  scan.clusters = cluster_points(scan.points, comparison_floor);
  return scan;
}

}  // namespace qtj
