#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtj/lattice.hpp"
#include "qtj/laurent.hpp"
#include "qtj/poly.hpp"
#include "qtj/quadratic_unit.hpp"

namespace qtj {

/// Partial zeta sum over monic lattice elements of degree <= cutoff_degree.
/// tail_bound = q^{-n(M+1)}, M = cutoff_degree: every omitted term is at most
/// that large. The floor of `value` is the precision actually guaranteed.
struct TruncatedSum {
  Laurent value;
  AbsValue tail_bound;
  int cutoff_degree = 0;
};

/// tail_bound for exponent n and cutoff M.
AbsValue zeta_tail_bound(int n, int cutoff);

/// sum of lam^-n over the monic nonzero lam of degree <= cutoff in the span
/// of a degree basis. The value is kept down to T^{-(n(cutoff+1)-1)}, the
/// last exponent the omitted terms cannot reach. all_nonzero sums over every
/// nonzero lam instead, i.e. multiplies by sum_{u in F_q^x} u^-n.
TruncatedSum zeta_f_eps(const std::vector<Poly>& degree_basis, int n, int cutoff, bool all_nonzero = false);
TruncatedSum zeta_f_eps(const BasisDescription& desc, int n, int cutoff, bool all_nonzero = false);
/// Same sum read off an explicit element set such as brute_force_lambda's.
TruncatedSum zeta_from_elements(const std::vector<Poly>& elements, int n, int cutoff, bool all_nonzero = false);

/// Generators of an F_q-lattice in k_infinity: leading coefficient 1 and
/// strictly increasing degrees. Every generator of degree <= complete_to is
/// present.
struct LaurentGenerators {
  std::vector<Laurent> gens;
  long long complete_to = 0;
};

LaurentGenerators generators_from_polys(const std::vector<Poly>& degree_basis, long long complete_to,
                                        long long rel_prec);

/// zeta(q-1) and zeta(q^2-1) over all monic elements of the span, each known
/// to `rel_prec` places below its leading term q^{-n D_0}.
struct PowerSumPair {
  TruncatedSum z1;  // exponent q-1
  TruncatedSum z2;  // exponent q^2-1
  long long rel_prec = 0;
  /// Blocks (zeta_pair) or single elements (zeta_pair_enumerated) summed.
  long long terms = 0;
};

/// Block by block: the elements g_k + v, v in V_k = span(g_0..g_{k-1}), sum
/// to G_n(1/e_k(g_k)) with e_k the normalized F_q-linear polynomial vanishing
/// on V_k and G_n its Goss polynomial. e_{k+1}(z) = e_k(z) - e_k(z)^q /
/// e_k(g_k)^{q-1}, so each block costs k steps. Blocks shrink like
/// |1/e_k(g_k)|, which ends the sum after about log_q(rel_prec) of them.
PowerSumPair zeta_pair(const LaurentGenerators& g, long long rel_prec, int threads = 1);

/// Same sums by visiting every element. With k lower generators below a top
/// generator g the block g + V_k has size at most q^{-n deg g - k(q-1)}
/// (sum_v v^j = 0 for j < k(q-1)); enumeration stops where this drops below
/// the requested precision. Work is split over `threads`.
PowerSumPair zeta_pair_enumerated(const LaurentGenerators& g, long long rel_prec, int threads = 1);

/// The tower J_tilde -> J -> j. `j` is empty when 1/(T^q - T) - J vanishes at
/// retained precision; infinity_floor then records how far down it vanishes.
struct ApproximantValue {
  std::optional<Laurent> j;
  Laurent J;
  Laurent J_tilde;
  int eps_log = 0;
  int cutoff = 0;
  AbsValue tail_bound = AbsValue::zero();
  long long infinity_floor = 0;

  bool is_infinite() const { return !j.has_value(); }
  bool J_tilde_is_unit() const { return J_tilde.abs() == AbsValue::power(0); }
};

/// J_tilde = z2 / z1^{q+1}, J = (T^{q^2} - T)/(T^q - T)^{q+1} J_tilde,
/// j = 1/(1/(T^q - T) - J). Throws PrecisionError if z1 vanishes.
ApproximantValue assemble_approximant(const Laurent& z1, const Laurent& z2, int eps_log, int cutoff,
                                      AbsValue tail_bound);

/// Target and limits for the adaptive precision loop.
struct PrecisionPlan {
  /// j is wanted down to T^-target.
  long long target = 12;
  /// Starting relative precision of the zeta sums; 0 picks one from target.
  long long rel_start = 0;
  long long rel_max = 4000;
  int threads = 1;
};

long long initial_rel_prec(const PrecisionPlan& plan, int q);

/// Runs compute(rel_prec) with increasing rel_prec until j is known down to
/// T^-target. A vanishing denominator gets one retry at double precision and
/// is then reported as infinite. Throws PrecisionError past rel_max.
ApproximantValue solve_adaptive(const PrecisionPlan& plan, int q,
                                const std::function<ApproximantValue(long long)>& compute);

/// j_eps for a quadratic unit, enumerating the basis description.
ApproximantValue j_eps(const QuadraticUnit& u, EpsilonIndex idx, const PrecisionPlan& plan = {});
/// J_tilde_eps for a quadratic unit at a fixed relative precision.
PowerSumPair zeta_pair(const QuadraticUnit& u, EpsilonIndex idx, long long rel_prec, int threads = 1);

/// f as a function of the absolute precision wanted.
using SeriesSource = std::function<Laurent(long long prec)>;

/// P/Q as a series source. Throws ConfigError for Q = 0.
SeriesSource rational_series(const Poly& num, const Poly& den);

/// For f = P/Q in lowest terms every nonzero ||lam f|| is at least |Q|^-1,
/// so Lambda_eps(f) = Q A once eps <= q^-deg Q. Returns that m = deg Q of
/// eps = q^-m.
int rational_threshold(const Poly& num, const Poly& den);

/// Lattice Lambda_eps(f) for arbitrary f via lambda_basis, extended until
/// the enumeration cutoff is covered. Throws PrecisionError if the lattice
/// has no element below max_degree.
struct KernelLattice {
  std::vector<Poly> basis;
  long long complete_to = 0;
};
KernelLattice kernel_lattice(const SeriesSource& f, int eps_log, long long rel_prec, int q, int max_degree = 4096);

/// j_eps for arbitrary f, lattice by linear algebra.
ApproximantValue j_eps(const SeriesSource& f, int eps_log, const PrecisionPlan& plan = {});

/// Same tower from an explicit exhaustive element set with a fixed degree
/// cutoff (small cases and cross-checks).
ApproximantValue j_eps_from_elements(const std::vector<Poly>& elements, int eps_log, int cutoff);

/// "inf" or the Laurent text of j.
std::string j_text(const ApproximantValue& v);

}  // namespace qtj
