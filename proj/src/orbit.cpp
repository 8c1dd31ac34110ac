#include "lpdual/orbit.hpp"

#include "lpdual/errors.hpp"

#include <cmath>
#include <numbers>

namespace lpdual {

std::vector<Eigen::VectorXd> orbit_directions(int n, int count) {
  if (n < 2) throw ContractError("orbit_directions: n must be at least 2");
  if (count < 1) throw ContractError("orbit_directions: need at least one direction");
  if (n != 2) return halton_directions(n, count);
  std::vector<Eigen::VectorXd> out;
  for (int k = 0; k < count; ++k) {
    const double theta = std::numbers::pi * k / count;
    out.push_back(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
  }
  return out;
}

OrbitMatrix orbit_matrix(double p, int n, int num_directions, const SphereGrid& grid) {
  if (grid.n() != n) throw DimensionError("orbit_matrix: grid dimension differs from n");
  return orbit_matrix(p, orbit_directions(n, num_directions), grid);
}

OrbitMatrix orbit_matrix(double p, std::vector<Eigen::VectorXd> directions, const SphereGrid& grid) {
  if (!(p > 0.0)) throw ContractError("orbit_matrix: p must be positive");
  if (directions.empty()) throw ContractError("orbit_matrix: no directions");
  Eigen::MatrixXd values(grid.size(), static_cast<Eigen::Index>(directions.size()));
  for (size_t c = 0; c < directions.size(); ++c) {
    if (directions[c].size() != grid.n()) throw DimensionError("orbit_matrix: direction dimension differs from grid");
    for (int t = 0; t < grid.size(); ++t) {
      values(t, static_cast<Eigen::Index>(c)) = std::pow(std::abs(directions[c].dot(grid[t].rep())), p);
    }
  }
  return {p, std::move(directions), grid, std::move(values)};
}

Eigen::VectorXd singular_values(const OrbitMatrix& m) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(m.values).singularValues();
}

int numerical_rank(const Eigen::VectorXd& sv, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ContractError("numerical_rank: rel_tol must lie in (0, 1)");
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_tol * sv[0]) ++rank;
  }
  return rank;
}

int numerical_rank(const OrbitMatrix& m, double rel_tol) { return numerical_rank(singular_values(m), rel_tol); }

long polynomial_dimension(int p_even, int n) {
  if (p_even < 2 || p_even % 2 != 0) throw ContractError("polynomial_dimension: p must be a positive even integer");
  if (n < 1) throw ContractError("polynomial_dimension: n must be positive");
  // binomial(p + n - 1, n - 1), built so every partial product is an integer.
  long result = 1;
  for (int k = 1; k < n; ++k) result = result * (p_even + k) / k;
  return result;
}

}  // namespace lpdual
