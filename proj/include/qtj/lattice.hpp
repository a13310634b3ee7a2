#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtj/laurent.hpp"
#include "qtj/poly.hpp"
#include "qtj/quadratic_unit.hpp"

namespace qtj {

/// eps = q^{-m} written as m = N d + l with 0 <= l <= d-1.
struct EpsilonIndex {
  int N = 0;
  int l = 0;
  int d = 1;

  /// Throws ConfigError for m < 0 or d < 1.
  static EpsilonIndex from_m(int m, int d);
  int m() const { return N * d + l; }
  int eps_log() const { return -m(); }
  int d_l() const { return d - 1 - l; }
};

/// T^shift * Q_bar_n.
struct Generator {
  int shift = 0;
  int n = 0;
  int degree(int d) const { return n * d + shift; }
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Lambda_eps(f) for a quadratic unit f: the span of
///   T^j Q_bar_N (j <= d_l),  T^j Q_bar_n (n > N, j <= d-1).
/// Blocks are produced on demand up to a degree cap.
class BasisDescription {
 public:
  BasisDescription(const QuadraticUnit& u, EpsilonIndex idx);

  const FieldPtr& field() const { return a_.field(); }
  const EpsilonIndex& index() const { return idx_; }
  int d() const { return idx_.d; }
  /// Degree of the lowest generator, N d.
  int lowest_degree() const { return idx_.N * idx_.d; }

  /// Generators of degree <= max_deg in block order: B(N)_{d_l} then B(N+1),
  /// B(N+2), ..., each block by descending shift.
  std::vector<Generator> generators(int max_deg) const;
  Poly generator_poly(const Generator& g) const;
  /// The generator polynomials of degree <= max_deg, by ascending degree.
  std::vector<Poly> materialize(int max_deg) const;

 private:
  Poly a_;
  Fq b_;
  EpsilonIndex idx_;
};

/// Lambda_eps(u) per the basis description.
BasisDescription basis_lambda(const QuadraticUnit& u, EpsilonIndex idx);

// A "degree basis" is a list of monic polynomials with strictly increasing
// degrees. Its span is then read off by top-down reduction.

/// Reduces p against the basis; returns the coordinates if p lies in the span.
std::optional<std::vector<Fq>> coordinates(const std::vector<Poly>& basis, const Poly& p);
bool in_span(const std::vector<Poly>& basis, const Poly& p);
/// All q^k elements of the span, zero included, sorted; {0} for an empty basis.
std::vector<Poly> span_elements(const FieldPtr& field, const std::vector<Poly>& basis);
/// Monic span elements of degree <= max_deg, grouped by ascending degree;
/// within a degree, in order of the lower coefficient vector.
std::vector<Poly> monic_elements(const std::vector<Poly>& basis, int max_deg);
std::vector<Poly> monic_elements(const BasisDescription& desc, int max_deg);

/// { lam in A : deg lam <= deg_bound, ||lam f|| < q^eps_log } found by visiting
/// every polynomial of degree <= deg_bound and testing the strict inequality
/// on the exponents -1..eps_log of lam f. Sorted, zero included. Throws
/// PrecisionError if f is not known far enough down to decide it.
std::vector<Poly> brute_force_lambda(const Laurent& f, int eps_log, int deg_bound);

/// The same subspace by Gaussian elimination on the fractional windows of
/// T^0 f, ..., T^deg_bound f: a degree basis with one element for every degree
/// that Lambda_eps(f) attains up to deg_bound.
std::vector<Poly> lambda_basis(const Laurent& f, int eps_log, int deg_bound);

/// c_0(T), ..., c_m(T) standing for sum_i c_i Q_bar_{N+i}.
struct ConditionTuple {
  std::vector<Poly> c;
  int m() const { return int(c.size()) - 1; }
  friend bool operator==(const ConditionTuple&, const ConditionTuple&) = default;
};

/// c_m monic, and not a lone T^j (j <= d-1) when every other c_i vanishes.
bool condition_I(const ConditionTuple& t, int d);
/// deg c_i <= d-1 for all i.
bool condition_II(const ConditionTuple& t, int d);
/// deg c_0 <= d_l.
bool condition_III(const ConditionTuple& t, int d_l);

struct TupleOptions {
  bool with_condition_III = true;
  /// 1 pins c_0 = 0 and starts the free coefficients at c_1.
  int start_index = 0;
  /// Additionally demand c_0 != 0.
  bool c0_nonzero = false;
};

/// Visits every tuple satisfying I, II (and III when asked) with top index
/// m <= m_max, ordered by m and then lexicographically in (c_m, ..., c_0).
void for_each_nonbas_tuple(const FieldPtr& field, int d, int d_l, int m_max, TupleOptions opt,
                           const std::function<void(const ConditionTuple&)>& visit);
std::vector<ConditionTuple> nonbas_tuples(const QuadraticUnit& u, EpsilonIndex idx, int m_max,
                                          bool with_condition_III, int start_index, bool c0_nonzero = false);

/// sum_i c_i Q_bar_{N+i}.
Poly tuple_element(const BasisDescription& desc, const ConditionTuple& t);

struct Decomposition {
  enum class Kind { Bas, NonBas, NotMember };
  Kind kind = Kind::NotMember;
  std::optional<Generator> generator;
  std::optional<ConditionTuple> tuple;
};

/// Classifies a monic polynomial against the basis description.
Decomposition decompose(const BasisDescription& desc, const Poly& element);

/// Every polynomial of degree <= k, zero first, in Poly order.
std::vector<Poly> polys_up_to_degree(const FieldPtr& field, int k);
/// Monic polynomials of degree 0..k, in Poly order.
std::vector<Poly> monic_polys_up_to_degree(const FieldPtr& field, int k);

std::string to_string(const Generator& g);

}  // namespace qtj
