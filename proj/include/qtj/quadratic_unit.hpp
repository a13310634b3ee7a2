#pragma once

#include <vector>

#include "qtj/laurent.hpp"
#include "qtj/poly.hpp"

namespace qtj {

/// Root f of X^2 - aX - b with deg a = d > 0, b in F_q^x, normalized by
/// |f| = q^d > 1, together with its conjugate f' = a - f (|f'| = q^-d), the
/// monic rescale f_bar = c f where c a is monic, and sqrt(D), D = a^2 + 4b.
/// Built by solve(); immutable.
class QuadraticUnit {
 public:
  const FieldPtr& field() const { return a_.field(); }
  const Field& F() const { return a_.F(); }
  const Poly& a() const { return a_; }
  Fq b() const { return b_; }
  int d() const { return a_.degree(); }
  const Poly& D() const { return D_; }
  /// The scalar with c * a monic.
  Fq c() const { return c_; }
  const Laurent& f() const { return f_; }
  const Laurent& f_conj() const { return f_conj_; }
  const Laurent& f_bar() const { return f_bar_; }
  const Laurent& f_bar_conj() const { return f_bar_conj_; }
  /// In odd characteristic the root with f = (a + sqrt D)/2; in
  /// characteristic 2 simply a.
  const Laurent& sqrtD() const { return sqrtD_; }
  long long prec() const { return prec_; }

  friend QuadraticUnit solve(const Poly& a, Fq b, long long prec);

 private:
  QuadraticUnit(Poly a, Fq b, Poly D, Fq c, Laurent f, Laurent f_conj, Laurent f_bar, Laurent f_bar_conj,
                Laurent sqrtD, long long prec);

  Poly a_;
  Fq b_;
  Poly D_;
  Fq c_;
  Laurent f_, f_conj_, f_bar_, f_bar_conj_, sqrtD_;
  long long prec_;
};

/// Solves X^2 - aX - b = 0 for the root with |f| > 1 by iterating f <- a + b/f
/// from f = a until it is stable at precision T^-prec. Verifies the defining
/// relations before returning. Throws ConfigError for deg a <= 0 or b = 0 and
/// PrecisionError when prec < 2d.
QuadraticUnit solve(const Poly& a, Fq b, long long prec);

/// Q_0 = 1, Q_1 = a, Q_{n+1} = a Q_n + b Q_{n-1}: exact, no precision involved.
std::vector<Poly> binet_polys(const Poly& a, Fq b, int n_max);
/// The monic rescalings Q_bar_n = c^n Q_n for n = 0..n_max.
std::vector<Poly> monic_binet_polys(const Poly& a, Fq b, int n_max);

struct BinetSequence {
  std::vector<Poly> Q;
  std::vector<Poly> Q_bar;
};

/// Q_0..Q_{n_max} and their monic rescalings, each cross-checked against
/// (f^{n+1} - f'^{n+1})/sqrt(D) and (f_bar^{n+1} - f_bar'^{n+1})/(c sqrt(D)).
/// Refuses (PrecisionError) when prec < (n_max + 2) d.
BinetSequence binet_terms(const QuadraticUnit& u, int n_max);

/// lam^perp: the element of A nearest to lam * f, i.e. the integer part of
/// lam * f. Throws PrecisionError if lam * f is not known down to T^0.
Poly perp(const QuadraticUnit& u, const Poly& lam);

/// ||T^l Q_bar_n f||, checked against q^{l-(n+1)d}; a mismatch throws
/// InvariantViolation.
AbsValue error_norm(const QuadraticUnit& u, int n, int l);

}  // namespace qtj
