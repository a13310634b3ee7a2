#include "qtj/lattice.hpp"

#include <algorithm>
#include <cstdint>

#include "qtj/errors.hpp"

namespace qtj {

EpsilonIndex EpsilonIndex::from_m(int m, int d) {
  if (d < 1) throw ConfigError("d must be positive");
  if (m < 0) throw ConfigError("eps must be q^-m with m >= 0");
  return EpsilonIndex{m / d, m % d, d};
}

BasisDescription::BasisDescription(const QuadraticUnit& u, EpsilonIndex idx) : a_(u.a()), b_(u.b()), idx_(idx) {
  if (idx.d != u.d()) throw ConfigError("epsilon index built for a different d");
  if (idx.N < 0 || idx.l < 0 || idx.l >= idx.d) throw ConfigError("epsilon index out of range");
}

std::vector<Generator> BasisDescription::generators(int max_deg) const {
  const int d = idx_.d;
  std::vector<Generator> out;
  for (int j = idx_.d_l(); j >= 0; --j) {
    if (idx_.N * d + j <= max_deg) out.push_back({j, idx_.N});
  }
  for (int n = idx_.N + 1; n * d <= max_deg; ++n) {
    for (int j = d - 1; j >= 0; --j) {
      if (n * d + j <= max_deg) out.push_back({j, n});
    }
  }
  return out;
}

Poly BasisDescription::generator_poly(const Generator& g) const {
  return monic_binet_polys(a_, b_, g.n)[g.n].shifted(g.shift);
}

std::vector<Poly> BasisDescription::materialize(int max_deg) const {
  std::vector<Generator> gens = generators(max_deg);
  if (gens.empty()) return {};
  int n_top = 0;
  for (const auto& g : gens) n_top = std::max(n_top, g.n);
  const std::vector<Poly> Q_bar = monic_binet_polys(a_, b_, n_top);
  std::vector<Poly> out;
  out.reserve(gens.size());
  for (const auto& g : gens) out.push_back(Q_bar[g.n].shifted(g.shift));
  std::sort(out.begin(), out.end(), [](const Poly& x, const Poly& y) { return x.degree() < y.degree(); });
  return out;
}

BasisDescription basis_lambda(const QuadraticUnit& u, EpsilonIndex idx) { return BasisDescription(u, idx); }

std::optional<std::vector<Fq>> coordinates(const std::vector<Poly>& basis, const Poly& p) {
  std::vector<Fq> coords(basis.size(), Field::zero());
  Poly r = p;
  for (int j = int(basis.size()) - 1; j >= 0 && !r.is_zero(); --j) {
    if (r.degree() > basis[j].degree()) return std::nullopt;
    if (r.degree() == basis[j].degree()) {
      coords[j] = r.leading();
      r -= basis[j].scaled(coords[j]);
    }
  }
  if (!r.is_zero()) return std::nullopt;
  return coords;
}

bool in_span(const std::vector<Poly>& basis, const Poly& p) { return coordinates(basis, p).has_value(); }

namespace {

// Calls visit(sum) for every combination base + sum_{i<k} c_i basis[i], with
// the coefficient of basis[k-1] varying slowest.
template <class Visit>
void combinations(const Field& F, const std::vector<Poly>& basis, int k, const Poly& base, Visit&& visit) {
  if (k == 0) {
    visit(base);
    return;
  }
  for (Fq c : F.elements()) {
    combinations(F, basis, k - 1, c.is_zero() ? base : base + basis[k - 1].scaled(c), visit);
  }
}

}  // namespace

std::vector<Poly> span_elements(const FieldPtr& field, const std::vector<Poly>& basis) {
  std::vector<Poly> out;
  combinations(*field, basis, int(basis.size()), Poly(field), [&](const Poly& p) { out.push_back(p); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Poly> monic_elements(const std::vector<Poly>& basis, int max_deg) {
  std::vector<Poly> out;
  for (int t = 0; t < int(basis.size()) && basis[t].degree() <= max_deg; ++t) {
    combinations(basis[t].F(), basis, t, basis[t], [&](const Poly& p) { out.push_back(p); });
  }
  return out;
}

std::vector<Poly> monic_elements(const BasisDescription& desc, int max_deg) {
  return monic_elements(desc.materialize(max_deg), max_deg);
}

std::vector<Poly> polys_up_to_degree(const FieldPtr& field, int k) {
  std::vector<Poly> out{Poly(field)};
  if (k < 0) return out;
  const int q = field->q();
  std::vector<Fq> digits(k + 1, Field::zero());
  while (true) {
    int i = 0;
    while (i <= k && digits[i].v == q - 1) digits[i++] = Field::zero();
    if (i > k) break;
    digits[i].v++;
    out.emplace_back(field, digits);
  }
  return out;
}

std::vector<Poly> monic_polys_up_to_degree(const FieldPtr& field, int k) {
  std::vector<Poly> out;
  for (int e = 0; e <= k; ++e) {
    for (const Poly& low : polys_up_to_degree(field, e - 1)) out.push_back(low + Poly::t_power(field, e));
  }
  return out;
}

namespace {

// w[i][k-1] = coefficient of T^-k in T^i f for k = 1..m.
std::vector<std::vector<Fq>> fractional_windows(const Laurent& f, int m, int deg_bound) {
  if (f.floor() > -(long long)m - deg_bound) {
    throw PrecisionError("deciding ||lam f|| < q^-" + std::to_string(m) + " for deg lam <= " +
                         std::to_string(deg_bound) + " needs f known to T^-" + std::to_string(m + deg_bound) +
                         ", have T^" + std::to_string(f.floor()));
  }
  std::vector<std::vector<Fq>> w(deg_bound + 1, std::vector<Fq>(m));
  for (int i = 0; i <= deg_bound; ++i) {
    for (int k = 1; k <= m; ++k) w[i][k - 1] = f.coeff(-(long long)k - i);
  }
  return w;
}

}  // namespace

std::vector<Poly> brute_force_lambda(const Laurent& f, int eps_log, int deg_bound) {
  const FieldPtr& field = f.field();
  if (deg_bound < 0) return {Poly(field)};
  const int m = -eps_log;
  if (m <= 0) return polys_up_to_degree(field, deg_bound);
  const Field& F = *field;
  const auto w = fractional_windows(f, m, deg_bound);
  const std::vector<Fq> elems = F.elements();

  // partial[i] holds the window of sum_{j >= i} c_j T^j f.
  std::vector<std::vector<std::uint8_t>> partial(deg_bound + 2, std::vector<std::uint8_t>(m, 0));
  std::vector<Fq> coeffs(deg_bound + 1, Field::zero());
  std::vector<Poly> out;

  auto visit = [&](auto&& self, int i) -> void {
    if (i < 0) {
      const auto& s = partial[0];
      if (std::all_of(s.begin(), s.end(), [](std::uint8_t v) { return v == 0; })) out.emplace_back(field, coeffs);
      return;
    }
    for (Fq c : elems) {
      coeffs[i] = c;
      const auto& above = partial[i + 1];
      auto& here = partial[i];
      const std::uint8_t* mrow = F.mul_row(c);
      for (int k = 0; k < m; ++k) here[k] = F.add_row(Fq{above[k]})[mrow[w[i][k].v]];
      self(self, i - 1);
    }
  };
  visit(visit, deg_bound);
  return out;
}

std::vector<Poly> lambda_basis(const Laurent& f, int eps_log, int deg_bound) {
  const FieldPtr& field = f.field();
  const Field& F = *field;
  std::vector<Poly> basis;
  if (deg_bound < 0) return basis;
  const int m = -eps_log;
  if (m <= 0) {
    for (int i = 0; i <= deg_bound; ++i) basis.push_back(Poly::t_power(field, i));
    return basis;
  }
  const auto w = fractional_windows(f, m, deg_bound);

  struct Pivot {
    int pos;
    std::vector<Fq> w;
    Poly p;
  };
  std::vector<Pivot> pivots;
  for (int i = 0; i <= deg_bound; ++i) {
    std::vector<Fq> v = w[i];
    Poly p = Poly::t_power(field, i);
    for (const auto& piv : pivots) {
      const Fq c = v[piv.pos];
      if (c.is_zero()) continue;
      for (int k = 0; k < m; ++k) v[k] = F.sub(v[k], F.mul(c, piv.w[k]));
      p -= piv.p.scaled(c);
    }
    auto nz = std::find_if(v.begin(), v.end(), [](Fq x) { return !x.is_zero(); });
    if (nz == v.end()) {
      basis.push_back(std::move(p));
      continue;
    }
    const Fq s = F.inv(*nz);
    for (auto& x : v) x = F.mul(x, s);
    pivots.push_back({int(nz - v.begin()), std::move(v), p.scaled(s)});
  }
  return basis;
}

bool condition_I(const ConditionTuple& t, int d) {
  if (t.c.empty() || !t.c.back().is_monic()) return false;
  const bool alone = std::all_of(t.c.begin(), t.c.end() - 1, [](const Poly& p) { return p.is_zero(); });
  return !(alone && t.c.back().is_t_power() && t.c.back().degree() <= d - 1);
}

bool condition_II(const ConditionTuple& t, int d) {
  return std::all_of(t.c.begin(), t.c.end(), [&](const Poly& p) { return p.degree() <= d - 1; });
}

bool condition_III(const ConditionTuple& t, int d_l) { return !t.c.empty() && t.c.front().degree() <= d_l; }

void for_each_nonbas_tuple(const FieldPtr& field, int d, int d_l, int m_max, TupleOptions opt,
                           const std::function<void(const ConditionTuple&)>& visit) {
  if (opt.start_index != 0 && opt.start_index != 1) throw ConfigError("start_index must be 0 or 1");
  if (opt.start_index == 1 && opt.c0_nonzero) return;
  const int cap0 = opt.with_condition_III ? d_l : d - 1;
  const std::vector<Poly> all_low = polys_up_to_degree(field, d - 1);
  const std::vector<Poly> all_zero = polys_up_to_degree(field, cap0);
  const std::vector<Poly> monic_low = monic_polys_up_to_degree(field, d - 1);
  const std::vector<Poly> monic_zero = monic_polys_up_to_degree(field, cap0);

  ConditionTuple t;
  for (int m = std::max(opt.start_index, 0); m <= m_max; ++m) {
    t.c.assign(m + 1, Poly(field));
    // Fills slots i, i-1, ..., start_index; `lower_nonzero` tracks whether any
    // slot below m is nonzero.
    auto fill = [&](auto&& self, int i, bool lower_nonzero) -> void {
      if (i < opt.start_index) {
        if (!lower_nonzero && t.c[m].is_t_power()) return;
        visit(t);
        return;
      }
      const auto& choices = (i == 0) ? all_zero : all_low;
      for (const Poly& p : choices) {
        if (i == 0 && opt.c0_nonzero && p.is_zero()) continue;
        t.c[i] = p;
        self(self, i - 1, lower_nonzero || !p.is_zero());
      }
      t.c[i] = Poly(field);
    };
    for (const Poly& top : (m == 0) ? monic_zero : monic_low) {
      t.c[m] = top;
      fill(fill, m - 1, false);
    }
  }
}

std::vector<ConditionTuple> nonbas_tuples(const QuadraticUnit& u, EpsilonIndex idx, int m_max,
                                          bool with_condition_III, int start_index, bool c0_nonzero) {
  std::vector<ConditionTuple> out;
  for_each_nonbas_tuple(u.field(), u.d(), idx.d_l(), m_max, {with_condition_III, start_index, c0_nonzero},
                        [&](const ConditionTuple& t) { out.push_back(t); });
  return out;
}

Poly tuple_element(const BasisDescription& desc, const ConditionTuple& t) {
  Poly out(desc.field());
  for (int i = 0; i <= t.m(); ++i) {
    if (t.c[i].is_zero()) continue;
    out += t.c[i] * desc.generator_poly({0, desc.index().N + i});
  }
  return out;
}

Decomposition decompose(const BasisDescription& desc, const Poly& element) {
  Decomposition out;
  if (!element.is_monic()) return out;
  std::vector<Generator> gens = desc.generators(element.degree());
  const int d = desc.d();
  std::sort(gens.begin(), gens.end(), [d](const Generator& x, const Generator& y) { return x.degree(d) < y.degree(d); });
  std::vector<Poly> basis;
  for (const auto& g : gens) basis.push_back(desc.generator_poly(g));
  const auto coords = coordinates(basis, element);
  if (!coords) return out;

  int nonzero = 0;
  int top_n = desc.index().N;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!(*coords)[i].is_zero()) {
      ++nonzero;
      top_n = std::max(top_n, gens[i].n);
    }
  }
  if (nonzero == 1) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!(*coords)[i].is_zero()) out.generator = gens[i];
    }
    out.kind = Decomposition::Kind::Bas;
    return out;
  }
  ConditionTuple t;
  t.c.assign(top_n - desc.index().N + 1, Poly(desc.field()));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Fq c = (*coords)[i];
    if (c.is_zero()) continue;
    t.c[gens[i].n - desc.index().N] += Poly::monomial(desc.field(), c, gens[i].shift);
  }
  out.kind = Decomposition::Kind::NonBas;
  out.tuple = std::move(t);
  return out;
}

std::string to_string(const Generator& g) {
  std::string s = "Qbar_" + std::to_string(g.n);
  if (g.shift == 0) return s;
  return (g.shift == 1 ? std::string("T*") : "T^" + std::to_string(g.shift) + "*") + s;
}

}  // namespace qtj
