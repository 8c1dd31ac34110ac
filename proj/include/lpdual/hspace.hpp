#pragma once

// The function side of the duality: norms on R^d given as oracles, the
// p-homogeneous functions z -> ||sum_i z_i x_i||^p they induce on R^n,
// grids on projective space and the pairing with atomic measures.

#include "lpdual/projective.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace lpdual {

/// A (semi)norm on R^d evaluable pointwise.
///
/// Four families are supported:
///   - lq:            (sum_k w_k |x_k|^q)^(1/q), q in [1, inf]; for q = inf the
///                    maximum of |x_k| over coordinates with w_k > 0
///   - quadratic:     sqrt(x^T G x) with G symmetric positive semidefinite
///   - polytope:      max_r |<row_r, x>|
///   - tuple_induced: a -> ||sum_k a_k v_k||_X for an inner oracle X
///
/// Construction validates the family-specific conditions and spot-checks the
/// triangle inequality on 100 seeded random triples.
class NormOracle {
 public:
  enum class Kind { Lq, Quadratic, Polytope, TupleInduced };

  static NormOracle lq(double q, std::vector<double> weights);
  static NormOracle quadratic(Eigen::MatrixXd gram);
  static NormOracle polytope(Eigen::MatrixXd rows);
  static NormOracle tuple_induced(NormOracle inner, std::vector<Eigen::VectorXd> vectors);

  /// The scalar field R with |t|.
  static NormOracle scalar();
  static NormOracle euclidean(int d);
  static NormOracle l1(int d);
  /// l_inf^d as a polytope oracle with identity rows.
  static NormOracle linf(int d);

  Kind kind() const noexcept;
  int dim() const noexcept;
  double norm(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Constant L with | ||x|| - ||y|| | <= L |x - y|_2.
  double lipschitz() const noexcept;

  double q() const;
  const std::vector<double>& weights() const;
  const Eigen::MatrixXd& matrix() const;  ///< G for quadratic, rows for polytope
  const NormOracle& inner() const;
  const std::vector<Eigen::VectorXd>& vectors() const;

 private:
  struct Impl;
  explicit NormOracle(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Grid on RP^{n-1}: canonical representatives on the l_p unit sphere with a
/// covering radius (`mesh`, l2 distance on representatives). For n = 2 the
/// grid is the M projective angles k*pi/M and the mesh is a proven bound; for
/// n >= 3 it is a Halton point set with an estimated mesh (`certified` false).
class SphereGrid {
 public:
  static SphereGrid circle(int count, double p);
  static SphereGrid low_discrepancy(int n, int count, double p);
  /// circle() for n = 2, low_discrepancy() otherwise.
  static SphereGrid make(int n, int count, double p);

  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  int size() const noexcept { return static_cast<int>(points_.size()); }
  const std::vector<ProjPoint>& points() const noexcept { return points_; }
  const ProjPoint& operator[](int i) const { return points_[static_cast<size_t>(i)]; }
  double mesh() const noexcept { return mesh_; }
  bool certified() const noexcept { return certified_; }

 private:
  SphereGrid(int n, double p, std::vector<ProjPoint> points, double mesh, bool certified);
  int n_;
  double p_;
  std::vector<ProjPoint> points_;
  double mesh_;
  bool certified_;
};

/// `count` deterministic unit vectors (l2) in R^n from a Gaussianized Halton
/// sequence, sign-canonicalized; the same sequence seeds SphereGrid::low_discrepancy.
std::vector<Eigen::VectorXd> halton_directions(int n, int count);

/// A real function on R^n, homogeneous of degree p, optionally carrying a
/// Lipschitz bound on the l_p unit sphere (w.r.t. l2 distance) that may
/// depend on the grid used.
class HFunction {
 public:
  using Eval = std::function<double(const Eigen::VectorXd&)>;
  using LipschitzBound = std::function<std::optional<double>(const SphereGrid&)>;

  HFunction(int n, double p, Eval eval, LipschitzBound lipschitz = {});

  /// z -> |z|_p^p, identically 1 on the l_p sphere.
  static HFunction lp_power(int n, double p);

  double operator()(const Eigen::VectorXd& z) const { return eval_(z); }
  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  std::optional<double> lipschitz(const SphereGrid& grid) const;

  HFunction operator+(const HFunction& other) const;
  HFunction operator*(double scale) const;

 private:
  int n_;
  double p_;
  Eval eval_;
  LipschitzBound lipschitz_;
};

/// z -> ||sum_i z_i x_i||_X^p.
HFunction phi_from_tuple(const NormOracle& space, const std::vector<Eigen::VectorXd>& vectors, double p);

/// sum over atoms of mass * phi(point). Exact, no grid involved.
double pairing(const ProjAtomicMeasure& mu, const HFunction& phi);

struct SupNorm {
  double lower;
  double upper;  ///< +inf when no Lipschitz bound is available
  bool certified;
};

/// lower = max of |phi| on the grid; upper = lower + L * mesh.
SupNorm sup_norm(const HFunction& phi, const SphereGrid& grid);

Eigen::VectorXd sample(const HFunction& phi, const SphereGrid& grid);

}  // namespace lpdual
