#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qtj/lattice.hpp"
#include "qtj/laurent.hpp"
#include "qtj/poly.hpp"
#include "qtj/quadratic_unit.hpp"
#include "qtj/zeta_approx.hpp"

namespace qtj {

/// h = (x + y f)/z for a quadratic unit f and x, y, z in A with y, z != 0.
class GeneralQuadratic {
 public:
  GeneralQuadratic(QuadraticUnit unit, Poly x, Poly y, Poly z);

  const QuadraticUnit& unit() const { return unit_; }
  const Poly& x() const { return x_; }
  const Poly& y() const { return y_; }
  const Poly& z() const { return z_; }
  const FieldPtr& field() const { return unit_.field(); }
  int d() const { return unit_.d(); }

  /// h known down to T^-prec.
  Laurent h(long long prec) const;
  /// f known down to T^-prec.
  Laurent f(long long prec) const;
  SeriesSource source() const;

  /// z^2 X^2 - (2xz + a y z) X + (x^2 + a x y - b y^2): the minimal
  /// polynomial of h up to scaling, as coefficients of X^0, X^1, X^2.
  std::vector<Poly> min_poly() const;

 private:
  QuadraticUnit unit_;
  Poly x_, y_, z_;
};

/// dim over F_q of A / modulus A, computed as (K+1) - rank of the multiples
/// T^i modulus inside the polynomials of degree <= K.
int quotient_dimension(const Poly& modulus, int K);

/// 2 (deg y + deg z): the dimension of (y^-1 A)^2 / (z A)^2.
int index_bound(const Poly& y, const Poly& z);

/// Both inclusions
///   z Lambda_{eps/|y|}(f)  subset  Lambda_eps(h)  subset  y^-1 Lambda_{|z| eps}(f)
/// checked element by element on the brute-forced spaces of degree <=
/// deg_bound. index_dim = dim Lambda_eps(h) - dim z Lambda_{eps/|y|}(f) in
/// that window; it is recomputed at deg_bound + 1 and + 2 for `stable`.
struct SandwichReport {
  int eps_log = 0;
  int deg_bound = 0;
  bool lower_ok = false;
  bool upper_ok = false;
  int lower_dim = 0;
  int middle_dim = 0;
  int index_dim = 0;
  bool stable = false;
  int bound = 0;
};

/// Throws ConfigError unless |z| eps < 1.
SandwichReport sandwich_check(const GeneralQuadratic& g, int eps_log, int deg_bound);

/// One coset representative lam and the expansion of y lam in the basis of
/// Lambda_{|z| eps}(f): coefficient polynomials c_n of Q_bar_n, n in [m, m'].
struct CosetRep {
  Poly lam;
  std::vector<std::pair<int, Poly>> expansion;
  int window_low = 0;
  int window_high = -1;
};

/// Lambda_eps(h) = union of lam_i + z Lambda_{eps/|y|}(f) inside the degree
/// window, lam_1 = 0, chosen greedily in sorted order.
struct CosetDecomposition {
  int eps_log = 0;
  int deg_bound = 0;
  std::vector<CosetRep> reps;
  /// Every rep but 0 lies in y^-1 Lambda_{|z| eps}(f) minus the sublattice.
  bool reps_outside_sublattice = false;
  /// r |sublattice| = |Lambda_eps(h)| and the cosets are pairwise disjoint.
  bool exact_cover = false;
  /// All expansion coefficients have degree <= d-1.
  bool coefficients_low = false;
  /// Largest m' - m over the reps.
  int window_width = 0;

  int r() const { return int(reps.size()); }
};

CosetDecomposition coset_reps(const GeneralQuadratic& g, int eps_log, int deg_bound);

/// j_eps(h) for eps = q^{-(N d + l)}.
struct ScanPoint {
  int N = 0;
  int l = 0;
  std::optional<Laurent> j;
};

struct Cluster {
  std::optional<Laurent> value;  // empty: the cluster of infinite values
  std::vector<std::pair<int, int>> support;  // (N, l)
};

struct ClusterScan {
  std::vector<ScanPoint> points;
  std::vector<Cluster> clusters;
  long long comparison_floor = 8;
};

/// Computes j for every (N, l) with N in [N_min, N_max] and l in l_list,
/// except eps = 1, lattices by linear algebra, and groups values that agree down to
/// T^-comparison_floor. Cells run on up to plan.threads threads.
ClusterScan cluster_values(const GeneralQuadratic& g, const std::vector<int>& l_list, int N_min, int N_max,
                           const PrecisionPlan& plan = {}, long long comparison_floor = 8);

/// Groups precomputed points.
std::vector<Cluster> cluster_points(const std::vector<ScanPoint>& points, long long comparison_floor);

/// Same number of clusters and every value of one matches a value of the other.
bool same_clusters(const std::vector<Cluster>& a, const std::vector<Cluster>& b, long long comparison_floor);

}  // namespace qtj
