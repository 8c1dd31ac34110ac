#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpdual/errors.hpp"
#include "lpdual/orbit.hpp"

#include <numbers>

using namespace lpdual;

namespace {

const SphereGrid& fine_grid() {
  static const SphereGrid grid = SphereGrid::circle(720, 2.0);
  return grid;
}

double angle_of(const Eigen::VectorXd& v) { return std::atan2(v[1], v[0]); }

}  // namespace

TEST_CASE("orbit entries are powers of cosines") {
  const SphereGrid grid = SphereGrid::circle(36, 2.0);
  for (double p : {2.0, 4.0}) {
    const OrbitMatrix m = orbit_matrix(p, 2, 9, grid);
    REQUIRE(m.values.rows() == 36);
    REQUIRE(m.values.cols() == 9);
    for (int t = 0; t < grid.size(); ++t) {
      for (int c = 0; c < 9; ++c) {
        const double gap = angle_of(m.directions[static_cast<size_t>(c)]) - angle_of(grid.points()[static_cast<size_t>(t)].rep());
        CHECK(m.values(t, c) == doctest::Approx(std::pow(std::abs(std::cos(gap)), p)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("orbit directions") {
  const auto d2 = orbit_directions(2, 4);
  REQUIRE(d2.size() == 4);
  CHECK(angle_of(d2[1]) == doctest::Approx(std::numbers::pi / 4));
  for (const auto& v : orbit_directions(3, 10)) CHECK(v.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(orbit_directions(1, 4), ContractError);
  CHECK_THROWS_AS(orbit_directions(2, 0), ContractError);
}

TEST_CASE("a single direction has rank one") {
  CHECK(numerical_rank(orbit_matrix(2.5, 2, 1, fine_grid())) == 1);
}

TEST_CASE("even exponents saturate at the polynomial dimension") {
  for (int p : {2, 4, 6}) {
    for (int count : {8, 16, 32, 64}) {
      CHECK(numerical_rank(orbit_matrix(p, 2, count, fine_grid())) == polynomial_dimension(p, 2));
    }
  }
  const SphereGrid grid3 = SphereGrid::low_discrepancy(3, 800, 2.0);
  CHECK(numerical_rank(orbit_matrix(2.0, 3, 60, grid3)) == 6);
  CHECK(numerical_rank(orbit_matrix(4.0, 3, 60, grid3)) == 15);
}

TEST_CASE("other exponents keep growing") {
  for (double p : {0.5, 1.0, 1.5, 2.5, 3.0, 3.5}) {
    const int r8 = numerical_rank(orbit_matrix(p, 2, 8, fine_grid()));
    const int r16 = numerical_rank(orbit_matrix(p, 2, 16, fine_grid()));
    const int r32 = numerical_rank(orbit_matrix(p, 2, 32, fine_grid()));
    CHECK(r8 < r16);
    CHECK(r16 < r32);
    CHECK(r32 > static_cast<int>(p) + 1);
  }
  CHECK(numerical_rank(orbit_matrix(2.5, 2, 64, fine_grid())) >= 30);
}

TEST_CASE("rank is invariant under rotating the directions") {
  const double alpha = 0.3141;
  for (double p : {2.0, 2.5, 4.0}) {
    std::vector<Eigen::VectorXd> rotated;
    for (const auto& d : orbit_directions(2, 16)) {
      const double t = angle_of(d) + alpha;
      rotated.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
    CHECK(numerical_rank(orbit_matrix(p, rotated, fine_grid())) == numerical_rank(orbit_matrix(p, 2, 16, fine_grid())));
  }
}

TEST_CASE("singular values") {
  const Eigen::VectorXd s = singular_values(orbit_matrix(2.0, 2, 12, fine_grid()));
  REQUIRE(s.size() == 12);
  for (Eigen::Index i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1]);
  CHECK(numerical_rank(s, 1e-8) == 3);
  CHECK_THROWS_AS(numerical_rank(s, 0.0), ContractError);
  CHECK_THROWS_AS(numerical_rank(s, 1.0), ContractError);
}

TEST_CASE("polynomial dimension") {
  CHECK(polynomial_dimension(2, 2) == 3);
  CHECK(polynomial_dimension(4, 2) == 5);
  CHECK(polynomial_dimension(2, 3) == 6);
  CHECK(polynomial_dimension(6, 3) == 28);
  CHECK_THROWS_AS(polynomial_dimension(3, 2), ContractError);
  CHECK_THROWS_AS(polynomial_dimension(0, 2), ContractError);
}

TEST_CASE("orbit contracts") {
  CHECK_THROWS_AS(orbit_matrix(0.0, 2, 4, fine_grid()), ContractError);
  CHECK_THROWS_AS(orbit_matrix(2.0, 3, 4, fine_grid()), DimensionError);
  CHECK_THROWS_AS(orbit_matrix(2.0, std::vector<Eigen::VectorXd>{}, fine_grid()), ContractError);
}
