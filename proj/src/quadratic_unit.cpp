#include "qtj/quadratic_unit.hpp"

#include <string>
#include <utility>

#include "qtj/errors.hpp"

namespace qtj {

QuadraticUnit::QuadraticUnit(Poly a, Fq b, Poly D, Fq c, Laurent f, Laurent f_conj, Laurent f_bar,
                             Laurent f_bar_conj, Laurent sqrtD, long long prec)
    : a_(std::move(a)),
      b_(b),
      D_(std::move(D)),
      c_(c),
      f_(std::move(f)),
      f_conj_(std::move(f_conj)),
      f_bar_(std::move(f_bar)),
      f_bar_conj_(std::move(f_bar_conj)),
      sqrtD_(std::move(sqrtD)),
      prec_(prec) {}

QuadraticUnit solve(const Poly& a, Fq b, long long prec) {
  if (a.degree() <= 0) throw ConfigError("deg a must be positive");
  if (b.is_zero()) throw ConfigError("b must be a nonzero constant");
  const int d = a.degree();
  if (prec < 2 * d) {
    throw PrecisionError("precision " + std::to_string(prec) + " cannot separate the roots; need at least 2*deg a = " +
                         std::to_string(2 * d));
  }
  const FieldPtr& field = a.field();
  const Field& F = *field;
  const Laurent a_l = Laurent::from_poly(a, prec);
  const Laurent b_l = Laurent::monomial(field, b, 0, prec);

  // Contraction by |b/f^2| = q^{-2d} per step.
  Laurent f = a_l;
  const long long max_iter = prec / (2 * d) + 4;
  bool stable = false;
  for (long long it = 0; it < max_iter; ++it) {
    Laurent next = (a_l + f.inv().scaled(b)).with_prec(prec);
    if (next.floor() == f.floor() && next.agrees_on_common(f)) {
      stable = true;
      break;
    }
    f = std::move(next);
  }
  if (!stable) throw InvariantViolation("fixed-point iteration for f did not stabilize");

  Laurent f_conj = a_l - f;
  const Fq c = F.inv(a.leading());

  Laurent sqrtD = a_l;
  const Poly D = a * a + Poly::constant(field, F.mul(F.from_int(4), b));
  if (F.p() != 2) {
    const Laurent two_f_minus_a = f.scaled(F.from_int(2)) - a_l;
    sqrtD = sqrt(Laurent::from_poly(D, prec), two_f_minus_a.leading()).with_prec(prec);
    if (!sqrtD.agrees_on_common(two_f_minus_a)) {
      throw InvariantViolation("sqrt(D) disagrees with 2f - a");
    }
  }

  // Defining relations at the retained precision.
  const Laurent residual = f * f - a_l * f - b_l;
  if (!residual.is_zero()) throw InvariantViolation("f^2 - a f - b does not vanish at retained precision");
  if (!(f * f_conj + b_l).is_zero()) throw InvariantViolation("f f' != -b");
  if (f.abs() != AbsValue::power(d) || f_conj.abs() != AbsValue::power(-d)) {
    throw InvariantViolation("|f| = q^d, |f'| = q^-d violated");
  }

  Laurent f_bar = f.scaled(c);
  Laurent f_bar_conj = f_conj.scaled(c);
  return QuadraticUnit(a, b, D, c, std::move(f), std::move(f_conj), std::move(f_bar), std::move(f_bar_conj),
                       std::move(sqrtD), prec);
}

std::vector<Poly> binet_polys(const Poly& a, Fq b, int n_max) {
  std::vector<Poly> Q;
  Q.push_back(Poly::constant(a.field(), Field::one()));
  if (n_max >= 1) Q.push_back(a);
  for (int n = 1; n < n_max; ++n) Q.push_back(a * Q[n] + Q[n - 1].scaled(b));
  return Q;
}

std::vector<Poly> monic_binet_polys(const Poly& a, Fq b, int n_max) {
  const Field& F = a.F();
  const Fq c = F.inv(a.leading());
  std::vector<Poly> Q = binet_polys(a, b, n_max);
  Fq cn = Field::one();
  for (auto& p : Q) {
    p = p.scaled(cn);
    cn = F.mul(cn, c);
  }
  return Q;
}

BinetSequence binet_terms(const QuadraticUnit& u, int n_max) {
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  const int d = u.d();
  if (u.prec() < (long long)(n_max + 2) * d) {
    throw PrecisionError("Binet table to n=" + std::to_string(n_max) + " needs precision " +
                         std::to_string((n_max + 2) * d) + ", have " + std::to_string(u.prec()));
  }
  BinetSequence seq;
  seq.Q = binet_polys(u.a(), u.b(), n_max);
  seq.Q_bar = monic_binet_polys(u.a(), u.b(), n_max);

  const Laurent inv_sqrtD = u.sqrtD().inv();
  const Laurent inv_c_sqrtD = u.sqrtD().scaled(u.c()).inv();
  Laurent fp = u.f();
  Laurent fcp = u.f_conj();
  Laurent fbp = u.f_bar();
  Laurent fbcp = u.f_bar_conj();
  for (int n = 0; n <= n_max; ++n) {
    if (seq.Q[n].degree() != n * d) throw InvariantViolation("deg Q_n != n d");
    if (!seq.Q_bar[n].is_monic()) throw InvariantViolation("Q_bar_n is not monic");
    if (n >= 1 && seq.Q_bar[n] != seq.Q_bar[n].monic()) throw InvariantViolation("Q_bar_n normalization");
    const Laurent binet = (fp - fcp) * inv_sqrtD;
    const Laurent bar_binet = (fbp - fbcp) * inv_c_sqrtD;
    for (const auto& [value, label] : {std::pair{&binet, "Q_n"}, std::pair{&bar_binet, "Q_bar_n"}}) {
      if (value->floor() > 0) throw PrecisionError(std::string("Binet check for ") + label + " lost the constant term");
    }
    if (!binet.agrees_on_common(Laurent::from_poly(seq.Q[n], u.prec()))) {
      throw InvariantViolation("Binet formula fails at n=" + std::to_string(n));
    }
    if (!bar_binet.agrees_on_common(Laurent::from_poly(seq.Q_bar[n], u.prec()))) {
      throw InvariantViolation("monic Binet formula fails at n=" + std::to_string(n));
    }
    fp = fp * u.f();
    fcp = fcp * u.f_conj();
    fbp = fbp * u.f_bar();
    fbcp = fbcp * u.f_bar_conj();
  }
  return seq;
}

Poly perp(const QuadraticUnit& u, const Poly& lam) {
  if (lam.is_zero()) return lam;
  const Laurent prod = Laurent::from_poly(lam, u.prec() + u.d()) * u.f();
  return prod.integer_part();
}

AbsValue error_norm(const QuadraticUnit& u, int n, int l) {
  const int d = u.d();
  if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  const Poly lam = monic_binet_polys(u.a(), u.b(), n)[n].shifted(l);
  const AbsValue norm = (Laurent::from_poly(lam, u.prec() + d) * u.f()).fractional_norm();
  const long long expected = (long long)l - (long long)(n + 1) * d;
  if (norm.is_below()) {
    throw PrecisionError("error norm of T^" + std::to_string(l) + " Q_bar_" + std::to_string(n) +
                         " is below retained precision");
  }
  if (norm != AbsValue::power(expected)) {
    throw InvariantViolation("||T^l Q_bar_n f|| = " + norm.to_string() + ", expected q^" + std::to_string(expected));
  }
  return norm;
}

}  // namespace qtj
