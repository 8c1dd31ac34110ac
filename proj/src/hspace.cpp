#include "lpdual/hspace.hpp"

#include "lpdual/errors.hpp"
#include "lpdual/rng.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>

namespace lpdual {

namespace {

struct LqData {
  double q;
  std::vector<double> weights;
};
struct QuadraticData {
  Eigen::MatrixXd gram;
};
struct PolytopeData {
  Eigen::MatrixXd rows;
};
struct TupleData {
  NormOracle inner;
  std::vector<Eigen::VectorXd> vectors;
  Eigen::MatrixXd basis;  // columns are the vectors
};

}  // namespace

struct NormOracle::Impl {
  std::variant<LqData, QuadraticData, PolytopeData, TupleData> data;
  int dim = 0;
  double lipschitz = 0.0;

  double eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (const auto* lq = std::get_if<LqData>(&data)) {
      if (std::isinf(lq->q)) {
        double m = 0.0;
        for (int k = 0; k < dim; ++k) {
          if (lq->weights[static_cast<size_t>(k)] > 0.0) m = std::max(m, std::abs(x[k]));
        }
        return m;
      }
      if (lq->q == 1.0) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += lq->weights[static_cast<size_t>(k)] * std::abs(x[k]);
        return s;
      }
      if (lq->q == 2.0) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += lq->weights[static_cast<size_t>(k)] * x[k] * x[k];
        return std::sqrt(s);
      }
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += lq->weights[static_cast<size_t>(k)] * std::pow(std::abs(x[k]), lq->q);
      return std::pow(s, 1.0 / lq->q);
    }
    if (const auto* quad = std::get_if<QuadraticData>(&data)) {
      return std::sqrt(std::max(0.0, x.dot(quad->gram * x)));
    }
    if (const auto* poly = std::get_if<PolytopeData>(&data)) {
      return (poly->rows * x).cwiseAbs().maxCoeff();
    }
    const auto& tuple = std::get<TupleData>(data);
    return tuple.inner.norm(tuple.basis * x);
  }
};

NormOracle::NormOracle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
  // Spot-check the triangle inequality on seeded random triples.
  CounterRng rng(0x7269616e676c65ULL, static_cast<std::uint64_t>(impl_->dim));
  std::normal_distribution<double> gauss;
  Eigen::VectorXd a(impl_->dim), b(impl_->dim);
  for (int trial = 0; trial < 100; ++trial) {
    for (int k = 0; k < impl_->dim; ++k) {
      a[k] = gauss(rng);
      b[k] = gauss(rng);
    }
    const double na = norm(a), nb = norm(b), nab = norm(a + b);
    if (!(na >= 0.0) || nab > (na + nb) * (1.0 + 1e-9) + 1e-12) {
      throw ContractError("NormOracle: triangle inequality fails");
    }
  }
}

NormOracle NormOracle::lq(double q, std::vector<double> weights) {
  if (!(q >= 1.0)) throw ContractError("NormOracle::lq: q must be >= 1");
  if (weights.empty()) throw DimensionError("NormOracle::lq: empty weights");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ContractError("NormOracle::lq: weights must be finite and >= 0");
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = static_cast<int>(weights.size());
  const double wmax = *std::max_element(weights.begin(), weights.end());
  if (std::isinf(q)) {
    impl->lipschitz = 1.0;
  } else {
    const double expo = std::max(0.0, 1.0 / q - 0.5);
    impl->lipschitz = std::pow(wmax, 1.0 / q) * std::pow(static_cast<double>(impl->dim), expo);
  }
  impl->data = LqData{q, std::move(weights)};
  return NormOracle(std::move(impl));
}

NormOracle NormOracle::quadratic(Eigen::MatrixXd gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) throw DimensionError("NormOracle::quadratic: G must be square");
  if (!gram.isApprox(gram.transpose(), 1e-12)) throw ContractError("NormOracle::quadratic: G must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) throw ContractError("NormOracle::quadratic: G is not PSD");
  auto impl = std::make_shared<Impl>();
  impl->dim = static_cast<int>(gram.rows());
  impl->lipschitz = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  impl->data = QuadraticData{std::move(gram)};
  return NormOracle(std::move(impl));
}

NormOracle NormOracle::polytope(Eigen::MatrixXd rows) {
  if (rows.rows() == 0 || rows.cols() == 0) throw DimensionError("NormOracle::polytope: empty rows");
  if (!rows.allFinite()) throw ContractError("NormOracle::polytope: non-finite rows");
  auto impl = std::make_shared<Impl>();
  impl->dim = static_cast<int>(rows.cols());
  impl->lipschitz = rows.rowwise().norm().maxCoeff();
  impl->data = PolytopeData{std::move(rows)};
  return NormOracle(std::move(impl));
}

NormOracle NormOracle::tuple_induced(NormOracle inner, std::vector<Eigen::VectorXd> vectors) {
  if (vectors.empty()) throw DimensionError("NormOracle::tuple_induced: no vectors");
  Eigen::MatrixXd basis(inner.dim(), static_cast<Eigen::Index>(vectors.size()));
  for (size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != inner.dim()) throw DimensionError("NormOracle::tuple_induced: vector dimension mismatch");
    basis.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = static_cast<int>(vectors.size());
  const double spectral = Eigen::JacobiSVD<Eigen::MatrixXd>(basis).singularValues()(0);
  impl->lipschitz = inner.lipschitz() * spectral;
  impl->data = TupleData{std::move(inner), std::move(vectors), std::move(basis)};
  return NormOracle(std::move(impl));
}

NormOracle NormOracle::scalar() { return lq(1.0, {1.0}); }
NormOracle NormOracle::euclidean(int d) { return quadratic(Eigen::MatrixXd::Identity(d, d)); }
NormOracle NormOracle::l1(int d) { return lq(1.0, std::vector<double>(static_cast<size_t>(d), 1.0)); }
NormOracle NormOracle::linf(int d) { return polytope(Eigen::MatrixXd::Identity(d, d)); }

NormOracle::Kind NormOracle::kind() const noexcept { return static_cast<Kind>(impl_->data.index()); }
int NormOracle::dim() const noexcept { return impl_->dim; }
double NormOracle::lipschitz() const noexcept { return impl_->lipschitz; }

double NormOracle::norm(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != impl_->dim) throw DimensionError("NormOracle::norm: dimension mismatch");
  return impl_->eval(x);
}

double NormOracle::q() const { return std::get<LqData>(impl_->data).q; }
const std::vector<double>& NormOracle::weights() const { return std::get<LqData>(impl_->data).weights; }
const Eigen::MatrixXd& NormOracle::matrix() const {
  if (const auto* quad = std::get_if<QuadraticData>(&impl_->data)) return quad->gram;
  return std::get<PolytopeData>(impl_->data).rows;
}
const NormOracle& NormOracle::inner() const { return std::get<TupleData>(impl_->data).inner; }
const std::vector<Eigen::VectorXd>& NormOracle::vectors() const { return std::get<TupleData>(impl_->data).vectors; }

// ---------------------------------------------------------------------------

SphereGrid::SphereGrid(int n, double p, std::vector<ProjPoint> points, double mesh, bool certified)
    : n_(n), p_(p), points_(std::move(points)), mesh_(mesh), certified_(certified) {}

SphereGrid SphereGrid::circle(int count, double p) {
  if (count < 1) throw ContractError("SphereGrid::circle: need at least one point");
  if (!(p > 0.0)) throw ContractError("SphereGrid::circle: p must be positive");
  std::vector<ProjPoint> points;
  points.reserve(static_cast<size_t>(count));
  const double step = std::numbers::pi / count;
  for (int k = 0; k < count; ++k) {
    const double theta = k * step;
    Eigen::Vector2d z(std::cos(theta), std::sin(theta));
    if (k == 0) z = Eigen::Vector2d(1.0, 0.0);
    if (2 * k == count) z = Eigen::Vector2d(0.0, 1.0);
    if (4 * k == count) z = Eigen::Vector2d(1.0, 1.0);
    if (4 * k == 3 * count) z = Eigen::Vector2d(-1.0, 1.0);
    points.push_back(ProjPoint::from_vector(z, p));
  }
  // Radius of the l_p circle as a function of the angle, r(t) = |(cos t, sin t)|_p^-1.
  // A point at angle t lies within pi/(2M) of a grid angle, so its distance
  // to that grid point is at most pi/(2M) * (max r + max |r'|).
  const auto radius = [p](double t) {
    const double c = std::abs(std::cos(t)), s = std::abs(std::sin(t));
    return std::pow(std::pow(c, p) + std::pow(s, p), -1.0 / p);
  };
  const int probes = std::max(20000, 64 * count);
  const double h = (std::numbers::pi / 2.0) / probes;
  double rmax = 0.0, dmax = 0.0;
  for (int i = 0; i <= probes; ++i) {
    const double t = i * h;
    rmax = std::max(rmax, radius(t));
    if (i < probes) dmax = std::max(dmax, std::abs(radius(t + h) - radius(t)) / h);
  }
  // Sampled maxima of smooth functions; the margin covers the sampling gap.
  const double mesh = (std::numbers::pi / (2.0 * count)) * (rmax * (1.0 + 1e-6) + dmax * 1.05 + 1e-12);
  return SphereGrid(2, p, std::move(points), p == 2.0 ? 2.0 * std::sin(std::numbers::pi / (4.0 * count)) : mesh,
                    true);
}

namespace {

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f /= base;
  }
  return result;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

Eigen::VectorXd halton_gaussian(std::uint64_t index, int n, int prime_offset) {
  static const boost::math::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (int k = 0; k < n; ++k) {
    const double u = std::clamp(radical_inverse(index, kPrimes[k + prime_offset]), 1e-12, 1.0 - 1e-12);
    z[k] = boost::math::quantile(normal, u);
  }
  return z;
}

double projective_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace

std::vector<Eigen::VectorXd> halton_directions(int n, int count) {
  if (n < 1 || n > 8) throw ContractError("halton_directions: n must be in [1, 8]");
  std::vector<Eigen::VectorXd> out;
  for (std::uint64_t i = 1; static_cast<int>(out.size()) < count; ++i) {
    const Eigen::VectorXd z = halton_gaussian(i, n, 0);
    if (z.norm() < 1e-9) continue;
    out.push_back(ProjPoint::from_vector(z, 2.0).rep());
  }
  return out;
}

SphereGrid SphereGrid::low_discrepancy(int n, int count, double p) {
  if (n < 2 || n > 8) throw ContractError("SphereGrid::low_discrepancy: n must be in [2, 8]");
  if (count < 1) throw ContractError("SphereGrid::low_discrepancy: need at least one point");
  std::vector<ProjPoint> raw;
  for (std::uint64_t i = 1; static_cast<int>(raw.size()) < count; ++i) {
    const Eigen::VectorXd z = halton_gaussian(i, n, 0);
    if (z.norm() < 1e-9) continue;
    raw.push_back(ProjPoint::from_vector(z, p));
  }
  // Coordinate axes are always included; they carry the extremes of many norms.
  for (int k = 0; k < n; ++k) raw.push_back(ProjPoint::from_vector(Eigen::VectorXd::Unit(n, k), p));
  std::vector<ProjPoint> points;
  for (auto& pt : raw) {
    const bool dup = std::any_of(points.begin(), points.end(), [&](const ProjPoint& q) {
      return (q.rep() - pt.rep()).norm() <= kPointMergeTolerance;
    });
    if (!dup) points.push_back(std::move(pt));
  }
  // Estimated covering radius from independent probe directions.
  double mesh = 0.0;
  const int probes = 4096;
  for (int i = 1; i <= probes; ++i) {
    const Eigen::VectorXd probe = ProjPoint::from_vector(halton_gaussian(static_cast<std::uint64_t>(i), n, 8), p).rep();
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : points) nearest = std::min(nearest, projective_distance(probe, q.rep()));
    mesh = std::max(mesh, nearest);
  }
  return SphereGrid(n, p, std::move(points), mesh, false);
}

SphereGrid SphereGrid::make(int n, int count, double p) {
  return n == 2 ? circle(count, p) : low_discrepancy(n, count, p);
}

// ---------------------------------------------------------------------------

HFunction::HFunction(int n, double p, Eval eval, LipschitzBound lipschitz)
    : n_(n), p_(p), eval_(std::move(eval)), lipschitz_(std::move(lipschitz)) {
  if (n_ < 1) throw DimensionError("HFunction: n must be positive");
  if (!eval_) throw ContractError("HFunction: empty evaluator");
  // Spot-check homogeneity of degree p.
  CounterRng rng(0x686f6d6fULL, static_cast<std::uint64_t>(n_));
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd z(n_);
    for (int i = 0; i < n_; ++i) z[i] = gauss(rng);
    const double lambda = (trial == 0 ? -1.0 : 1.0) * (0.5 + 2.0 * rng.uniform());
    const double base = eval_(z);
    const double scaled = eval_(lambda * z);
    if (std::abs(scaled - std::pow(std::abs(lambda), p_) * base) > 1e-9 * (1.0 + std::abs(scaled))) {
      throw ContractError("HFunction: evaluator is not homogeneous of degree p");
    }
  }
}

HFunction HFunction::lp_power(int n, double p) {
  return HFunction(
      n, p,
      [p](const Eigen::VectorXd& z) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) s += std::pow(std::abs(z[i]), p);
        return s;
      },
      [](const SphereGrid&) -> std::optional<double> { return 0.0; });
}

std::optional<double> HFunction::lipschitz(const SphereGrid& grid) const {
  if (!lipschitz_) return std::nullopt;
  return lipschitz_(grid);
}

HFunction HFunction::operator+(const HFunction& other) const {
  if (other.n_ != n_ || other.p_ != p_) throw DimensionError("HFunction: incompatible sum");
  LipschitzBound lip;
  if (lipschitz_ && other.lipschitz_) {
    lip = [a = lipschitz_, b = other.lipschitz_](const SphereGrid& g) -> std::optional<double> {
      const auto la = a(g), lb = b(g);
      if (!la || !lb) return std::nullopt;
      return *la + *lb;
    };
  }
  return HFunction(
      n_, p_, [a = eval_, b = other.eval_](const Eigen::VectorXd& z) { return a(z) + b(z); }, std::move(lip));
}

HFunction HFunction::operator*(double scale) const {
  LipschitzBound lip;
  if (lipschitz_) {
    lip = [a = lipschitz_, scale](const SphereGrid& g) -> std::optional<double> {
      const auto la = a(g);
      if (!la) return std::nullopt;
      return std::abs(scale) * *la;
    };
  }
  return HFunction(n_, p_, [a = eval_, scale](const Eigen::VectorXd& z) { return scale * a(z); }, std::move(lip));
}

HFunction phi_from_tuple(const NormOracle& space, const std::vector<Eigen::VectorXd>& vectors, double p) {
  const int n = static_cast<int>(vectors.size());
  if (n < 1) throw DimensionError("phi_from_tuple: empty tuple");
  Eigen::MatrixXd basis(space.dim(), n);
  for (int i = 0; i < n; ++i) {
    if (vectors[static_cast<size_t>(i)].size() != space.dim()) {
      throw DimensionError("phi_from_tuple: vector dimension does not match the space");
    }
    basis.col(i) = vectors[static_cast<size_t>(i)];
  }
  // |N(z) - N(z')| <= N(z - z') <= |z - z'|_2 * (sum_i ||x_i||^2)^(1/2) for the
  // seminorm N(z) = ||sum z_i x_i||; then |N^p - N'^p| <= p sup(N)^(p-1) |N - N'|.
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) sum_sq += std::pow(space.norm(basis.col(i)), 2);
  const double seminorm_lip = std::sqrt(sum_sq);

  auto seminorm = [space, basis](const Eigen::VectorXd& z) { return space.norm(basis * z); };
  auto lip = [seminorm, seminorm_lip, p](const SphereGrid& grid) -> std::optional<double> {
    double grid_max = 0.0;
    for (const auto& pt : grid.points()) grid_max = std::max(grid_max, seminorm(pt.rep()));
    const double sup = grid_max + seminorm_lip * grid.mesh();
    return p * std::pow(sup, p - 1.0) * seminorm_lip;
  };
  return HFunction(
      n, p, [seminorm, p](const Eigen::VectorXd& z) { return std::pow(seminorm(z), p); }, std::move(lip));
}

double pairing(const ProjAtomicMeasure& mu, const HFunction& phi) {
  if (mu.n() != phi.n()) throw DimensionError("pairing: dimension mismatch");
  if (mu.p() != phi.p()) throw ContractError("pairing: p mismatch");
  double total = 0.0;
  for (const auto& atom : mu.atoms()) total += atom.mass * phi(atom.point.rep());
  return total;
}

SupNorm sup_norm(const HFunction& phi, const SphereGrid& grid) {
  if (grid.n() != phi.n()) throw DimensionError("sup_norm: grid dimension mismatch");
  if (grid.p() != phi.p()) throw ContractError("sup_norm: grid p differs from phi p");
  double lower = 0.0;
  for (const auto& pt : grid.points()) lower = std::max(lower, std::abs(phi(pt.rep())));
  const auto lip = phi.lipschitz(grid);
  const double upper = lip ? lower + *lip * grid.mesh() : std::numeric_limits<double>::infinity();
  return {lower, upper, grid.certified() && lip.has_value()};
}

Eigen::VectorXd sample(const HFunction& phi, const SphereGrid& grid) {
  if (grid.n() != phi.n()) throw DimensionError("sample: grid dimension mismatch");
  Eigen::VectorXd out(grid.size());
  for (int t = 0; t < grid.size(); ++t) out[t] = phi(grid[t].rep());
  return out;
}

}  // namespace lpdual
