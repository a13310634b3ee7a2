#pragma once

#include <optional>
#include <vector>

#include "qtj/lattice.hpp"
#include "qtj/laurent.hpp"
#include "qtj/quadratic_unit.hpp"
#include "qtj/zeta_approx.hpp"

namespace qtj {

/// 1 + T^-n + ... + T^{-n d_l}, d_l = d-1-l.
Laurent zeta_T_l(const FieldPtr& field, int n, int l, int d, long long prec);

/// Absolute precision of the tuple sums for exponent n: n d (m_cutoff+1) - 1.
long long tuple_sum_prec(int n, int d, int m_cutoff);

/// H_l(n) truncated to tuples with top index <= m_cutoff:
///   zeta_{T,l}(n) + sum over I, II, III with c_0 != 0 of (sum_i c_i f_bar^i)^-n.
/// tail_bound = q^{-n d (m_cutoff+1)}.
TruncatedSum H_l(const QuadraticUnit& u, int l, int n, int m_cutoff);
/// H(n) truncated likewise: zeta_T(n)/(f_bar^n - 1) plus the tuples with
/// c_0 = 0 satisfying I and II.
TruncatedSum H_full(const QuadraticUnit& u, int n, int m_cutoff);
/// zeta_T(n) * sum_{i >= 1} f_bar^{-n i}, summed term by term.
Laurent H_geometric_direct(const QuadraticUnit& u, int n, long long prec);

struct LimitValue {
  int l = 0;
  std::optional<Laurent> j_l;  // empty: infinite at retained precision
  Laurent J_l;
  Laurent J_tilde_l;
  int m_cutoff = 0;
  AbsValue tail_bound = AbsValue::zero();
  long long infinity_floor = 0;

  bool J_tilde_is_unit() const { return J_tilde_l.abs() == AbsValue::power(0); }
};

/// Smallest m_cutoff with (q-1) d (m_cutoff+1) > target.
int default_m_cutoff(int q, int d, long long target);

/// Unit precision the tuple sums up to m_cutoff need.
long long tuple_unit_prec(int q, int d, int m_cutoff);

/// J_tilde(f)_l, J(f)_l, j(f)_l from the truncated H sums. The unit is
/// re-solved at tuple_unit_prec if it is too coarse.
LimitValue limit_value(const QuadraticUnit& u, int l, int m_cutoff);

/// H_l(n) + H(n) is the zeta sum of the F_q-lattice spanned by T^j (j <= d_l)
/// and T^j f_bar^i (i >= 1, j <= d-1). These are its generators, all of
/// degree <= complete_to, known to rel_prec below the lowest one.
LaurentGenerators limit_generators(const QuadraticUnit& u, int l, long long rel_prec);
/// The generators of Lambda_eps(f) rescaled by f_bar^{-(N+1)} c sqrt(D):
/// T^j f_bar^i (1 - (f_bar'/f_bar)^{N+i+1}) with the same index ranges.
LaurentGenerators hat_generators(const QuadraticUnit& u, EpsilonIndex idx, long long rel_prec);

/// j(f)_l through the lattice zeta sums, precision chosen adaptively.
LimitValue limit_value_lattice(const QuadraticUnit& u, int l, const PrecisionPlan& plan = {});
/// J_tilde from the rescaled generators; equal to J_tilde_eps(f).
Laurent hat_J_tilde(const QuadraticUnit& u, EpsilonIndex idx, long long rel_prec);

/// Hat sums of the convergence argument, tuple-truncated like H_l and H.
struct HatSums {
  TruncatedSum H_Nl;
  TruncatedSum H_N;
};
HatSums hat_convergence(const QuadraticUnit& u, int l, int N, int n, int m_cutoff);

/// True when x and y agree on every exponent >= -floor (|x - y| < q^-floor).
/// Throws PrecisionError if either is unknown there; infinity only agrees
/// with infinity.
bool values_agree(const std::optional<Laurent>& x, const std::optional<Laurent>& y, long long floor);

struct ValueSet {
  std::vector<LimitValue> values;
  bool distinct = false;
  long long comparison_floor = 8;
  /// Precision doublings spent on apparent coincidences.
  int retries = 0;
};

/// The d limit values; coinciding values at the comparison floor trigger up
/// to two precision doublings before distinct is reported false.
ValueSet value_set(const QuadraticUnit& u, const PrecisionPlan& plan = {}, long long comparison_floor = 8);

/// |j_eps(f) - j(f)_l| for eps = q^{-Nd-l}. `gap` is below(floor) when the two
/// agree on everything retained.
struct ConvergencePoint {
  int N = 0;
  std::optional<Laurent> j;
  AbsValue gap = AbsValue::zero();
  bool infinite = false;
};
std::vector<ConvergencePoint> convergence_trace(const QuadraticUnit& u, const LimitValue& limit, int N_min,
                                                int N_max, const PrecisionPlan& plan = {});

/// |x - y| on the common retained exponents; nullopt if one side is infinite.
std::optional<AbsValue> gap(const std::optional<Laurent>& x, const std::optional<Laurent>& y);

}  // namespace qtj
