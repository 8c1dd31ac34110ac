#pragma once

// Signed atomic measures on real projective space RP^{n-1}. An n-tuple f on
// a measure space is encoded by the positive measure mu_f that puts mass
// weight(w) * |f(w)|_p^p at the line through f(w).

#include "lpdual/measure_core.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace lpdual {

/// Distance (l2, on canonical representatives) below which two projective
/// points are identified.
inline constexpr double kPointMergeTolerance = 1e-10;

/// A line in R^n, represented by the vector on it with |z|_p = 1 whose first
/// non-negligible coordinate is positive.
class ProjPoint {
 public:
  /// Throws ContractError on the zero vector.
  static ProjPoint from_vector(const Eigen::VectorXd& z, double p);

  const Eigen::VectorXd& rep() const noexcept { return rep_; }
  int n() const noexcept { return static_cast<int>(rep_.size()); }

 private:
  explicit ProjPoint(Eigen::VectorXd rep) : rep_(std::move(rep)) {}
  Eigen::VectorXd rep_;
};

struct ProjAtom {
  ProjPoint point;
  double mass;
};

/// Finite signed combination of Dirac masses on RP^{n-1}, kept in canonical
/// form: points pairwise distinct (up to kPointMergeTolerance), masses
/// nonzero, atoms sorted lexicographically by representative.
class ProjAtomicMeasure {
 public:
  ProjAtomicMeasure(int n, double p);
  ProjAtomicMeasure(int n, double p, std::vector<ProjAtom> atoms);

  /// Atoms given by arbitrary nonzero vectors; each (z, m) becomes the atom
  /// at [z] with mass m (z is only used for its direction).
  static ProjAtomicMeasure from_directions(int n, double p, const std::vector<std::pair<Eigen::VectorXd, double>>& raw);

  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  const std::vector<ProjAtom>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  int size() const noexcept { return static_cast<int>(atoms_.size()); }

  double total_variation() const;
  bool is_positive() const;

  ProjAtomicMeasure operator+(const ProjAtomicMeasure& other) const;
  ProjAtomicMeasure operator-(const ProjAtomicMeasure& other) const;
  ProjAtomicMeasure operator*(double scale) const;

 private:
  void require_compatible(const ProjAtomicMeasure& other) const;

  int n_;
  double p_;
  std::vector<ProjAtom> atoms_;
};

inline ProjAtomicMeasure operator*(double scale, const ProjAtomicMeasure& m) { return m * scale; }

/// Masses of two measures on the union of their supports.
struct AlignedAtom {
  ProjPoint point;
  double first;
  double second;
};
std::vector<AlignedAtom> align(const ProjAtomicMeasure& a, const ProjAtomicMeasure& b);

ProjAtomicMeasure mu_of_tuple(const LpTuple& f);

inline double total_variation(const ProjAtomicMeasure& m) { return m.total_variation(); }

struct JordanParts {
  ProjAtomicMeasure positive;
  ProjAtomicMeasure negative;
};

/// m = positive - negative with disjoint supports.
JordanParts jordan(const ProjAtomicMeasure& m);

/// Given m = m1 - m2 (m1, m2 positive) and another signed measure m', returns
/// positive m1', m2' with m' = m1' - m2' and
/// |m1 - m1'| + |m2 - m2'| = |m - m'|.
JordanParts jordan_transport(const ProjAtomicMeasure& m, const ProjAtomicMeasure& m1, const ProjAtomicMeasure& m2,
                             const ProjAtomicMeasure& m_prime);

/// mu_f = common + only_f, mu_g = common + only_g with common the atomwise
/// minimum; |only_f| + |only_g| = |mu_f - mu_g|.
struct Coupling {
  ProjAtomicMeasure common;
  ProjAtomicMeasure only_f;
  ProjAtomicMeasure only_g;
};
Coupling coupling_decompose(const LpTuple& f, const LpTuple& g);

/// True iff |mu_f - mu_g| <= tol, i.e. f_i -> g_i extends to a spatial isometry.
bool measures_equal(const LpTuple& f, const LpTuple& g, double tol = 1e-10);

/// Rows multiplied by h(w), weights by |h(w)|^(-p). Leaves mu_f unchanged.
LpTuple change_of_density(const LpTuple& f, const Eigen::VectorXd& h);

}  // namespace lpdual
