#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpdual/errors.hpp"
#include "lpdual/hspace.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace lpdual;
using testsupport::CounterRng;

namespace {

double projective_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

Eigen::VectorXd lp_unit(const Eigen::VectorXd& z, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) s += std::pow(std::abs(z[i]), p);
  return z / std::pow(s, 1.0 / p);
}

}  // namespace

TEST_CASE("norm oracle families") {
  const Eigen::Vector3d x(3, -4, 1);
  CHECK(NormOracle::lq(2, {1, 1, 1}).norm(x) == doctest::Approx(std::sqrt(26.0)));
  CHECK(NormOracle::lq(1, {1, 2, 0}).norm(x) == doctest::Approx(11.0));
  CHECK(NormOracle::lq(INFINITY, {1, 1, 0.5}).norm(x) == doctest::Approx(4.0));
  CHECK(NormOracle::l1(3).norm(x) == doctest::Approx(8.0));
  CHECK(NormOracle::linf(3).norm(x) == doctest::Approx(4.0));
  CHECK(NormOracle::euclidean(3).norm(x) == doctest::Approx(std::sqrt(26.0)));
  CHECK(NormOracle::scalar().norm(Eigen::VectorXd::Constant(1, -2.5)) == doctest::Approx(2.5));

  Eigen::Matrix2d g;
  g << 2, 1, 1, 2;
  CHECK(NormOracle::quadratic(g).norm(Eigen::Vector2d(1, 1)) == doctest::Approx(std::sqrt(6.0)));

  Eigen::MatrixXd rows(2, 2);
  rows << 1, 1, 1, -1;
  CHECK(NormOracle::polytope(rows).norm(Eigen::Vector2d(2, -5)) == doctest::Approx(7.0));

  // a -> ||a_1 (1,0,1) + a_2 (0,1,1)||_1
  const NormOracle induced =
      NormOracle::tuple_induced(NormOracle::l1(3), {Eigen::Vector3d(1, 0, 1), Eigen::Vector3d(0, 1, 1)});
  CHECK(induced.dim() == 2);
  CHECK(induced.norm(Eigen::Vector2d(1, -1)) == doctest::Approx(2.0));
}

TEST_CASE("norm oracle contracts") {
  CHECK_THROWS_AS(NormOracle::lq(0.5, {1, 1}), ContractError);
  CHECK_THROWS_AS(NormOracle::lq(2, {1, -1}), ContractError);
  Eigen::Matrix2d bad;
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(NormOracle::quadratic(bad), ContractError);
  CHECK_THROWS_AS(NormOracle::l1(2).norm(Eigen::Vector3d(1, 2, 3)), DimensionError);
}

TEST_CASE("oracle Lipschitz constants hold") {
  CounterRng rng(31);
  for (int kind = 0; kind < 16; ++kind) {
    const NormOracle x = testsupport::random_oracle(rng, kind, 3);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd a = testsupport::random_matrix(rng, 3, 1).col(0);
      const Eigen::VectorXd b = testsupport::random_matrix(rng, 3, 1).col(0);
      CHECK(std::abs(x.norm(a) - x.norm(b)) <= x.lipschitz() * (a - b).norm() + 1e-12);
    }
  }
}

TEST_CASE("phi is p-homogeneous and rejects non-homogeneous evaluators") {
  CounterRng rng(32);
  const NormOracle x = testsupport::random_oracle(rng, 1, 2);
  const HFunction phi = phi_from_tuple(x, testsupport::random_vectors(rng, 3, 2), 2.5);
  const Eigen::Vector3d z(0.3, -1.2, 0.7);
  CHECK(phi(-3.0 * z) == doctest::Approx(std::pow(3.0, 2.5) * phi(z)));
  CHECK_THROWS_AS(HFunction(2, 2.0, [](const Eigen::VectorXd& v) { return v.sum(); }), ContractError);
  CHECK_THROWS_AS(phi_from_tuple(x, {Eigen::Vector3d(1, 2, 3)}, 2.0), DimensionError);
}

TEST_CASE("pairing with mu_f reproduces the L_p(X) norm") {
  CounterRng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testsupport::uniform_int(rng, 1, 3);
    const int d = testsupport::uniform_int(rng, 1, 3);
    const double p = testsupport::uniform(rng, 1.0, 4.0);
    const NormOracle x = testsupport::random_oracle(rng, trial, d);
    const LpTuple f = testsupport::random_tuple(rng, testsupport::uniform_int(rng, 1, 5), n, p);
    const auto vecs = testsupport::random_vectors(rng, n, d);
    const double expected = testsupport::lp_x_norm_power(f, x, vecs);
    const double got = pairing(mu_of_tuple(f), phi_from_tuple(x, vecs, p));
    CHECK(std::abs(got - expected) <= 1e-10 * std::max(1.0, expected));
  }
}

TEST_CASE("pairing contracts") {
  const ProjAtomicMeasure mu(2, 2.0);
  CHECK_THROWS_AS(pairing(mu, HFunction::lp_power(3, 2.0)), DimensionError);
  CHECK_THROWS_AS(pairing(mu, HFunction::lp_power(2, 3.0)), ContractError);
}

TEST_CASE("circle grids") {
  for (double p : {1.0, 2.0, 3.0}) {
    const SphereGrid grid = SphereGrid::circle(40, p);
    CHECK(grid.size() == 40);
    CHECK(grid.certified());
    // e1, e2 and the diagonals are exact grid points.
    for (const Eigen::Vector2d& z : {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1), Eigen::Vector2d(1, -1)}) {
      const Eigen::VectorXd target = ProjPoint::from_vector(z, p).rep();
      bool found = false;
      for (const auto& pt : grid.points()) found = found || (pt.rep() - target).norm() < 1e-15;
      CHECK(found);
    }
    // Covering radius: dense probes of the l_p circle stay within the mesh.
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const double t = std::numbers::pi * i / 5000.0;
      const Eigen::VectorXd probe = lp_unit(Eigen::Vector2d(std::cos(t), std::sin(t)), p);
      double nearest = INFINITY;
      for (const auto& pt : grid.points()) nearest = std::min(nearest, projective_gap(probe, pt.rep()));
      worst = std::max(worst, nearest);
    }
    CHECK(worst <= grid.mesh() * (1.0 + 1e-9));
  }
}

TEST_CASE("low discrepancy grids") {
  const SphereGrid grid = SphereGrid::low_discrepancy(3, 200, 2.0);
  CHECK_FALSE(grid.certified());
  CHECK(grid.size() >= 200);
  CHECK(grid.mesh() > 0.0);
  CHECK(grid.mesh() < 0.5);
  for (const auto& pt : grid.points()) CHECK(pt.rep().norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(SphereGrid::low_discrepancy(9, 10, 2.0), ContractError);
  CHECK(halton_directions(3, 5).size() == 5);
}

TEST_CASE("sup norm brackets the true maximum") {
  CounterRng rng(34);
  const SphereGrid grid = SphereGrid::circle(64, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const NormOracle x = testsupport::random_oracle(rng, trial, 2);
    const HFunction phi = phi_from_tuple(x, testsupport::random_vectors(rng, 2, 2), 2.0);
    const SupNorm s = sup_norm(phi, grid);
    double dense = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double t = std::numbers::pi * i / 20000.0;
      dense = std::max(dense, phi(Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
    CHECK(s.certified);
    CHECK(s.lower <= dense + 1e-12);
    CHECK(dense <= s.upper + 1e-12);
  }
  const SupNorm one = sup_norm(HFunction::lp_power(2, 3.0), SphereGrid::circle(10, 3.0));
  CHECK(one.lower == doctest::Approx(1.0));
  CHECK(one.upper == doctest::Approx(1.0));

  const HFunction bare(2, 2.0, [](const Eigen::VectorXd& z) { return z.squaredNorm(); });
  CHECK(std::isinf(sup_norm(bare, grid).upper));
  CHECK_FALSE(sup_norm(bare, grid).certified);
}

TEST_CASE("sample and function arithmetic") {
  const SphereGrid grid = SphereGrid::circle(8, 2.0);
  const HFunction a = HFunction::lp_power(2, 2.0);
  const Eigen::VectorXd s = sample(a + a * 2.0, grid);
  CHECK(s.size() == 8);
  for (Eigen::Index i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(3.0));
  CHECK_THROWS_AS(a + HFunction::lp_power(3, 2.0), DimensionError);
}
