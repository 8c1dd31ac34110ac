#pragma once

// Span of the GL_n orbit of z -> |z_1|^p, sampled as the functions
// z -> |<c, z>|^p on a grid; its numerical rank separates even integers p
// (polynomial forms) from all other exponents.

#include "lpdual/hspace.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lpdual {

struct OrbitMatrix {
  double p;
  std::vector<Eigen::VectorXd> directions;
  SphereGrid grid;
  /// values(t, c) = |<c, z_t>|^p with z_t the grid representatives.
  Eigen::MatrixXd values;
};

/// Unit directions: angles k*pi/count for n = 2, Halton otherwise.
std::vector<Eigen::VectorXd> orbit_directions(int n, int count);

OrbitMatrix orbit_matrix(double p, int n, int num_directions, const SphereGrid& grid);
OrbitMatrix orbit_matrix(double p, std::vector<Eigen::VectorXd> directions, const SphereGrid& grid);

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const OrbitMatrix& m);

/// Count of singular values above rel_tol times the largest.
int numerical_rank(const OrbitMatrix& m, double rel_tol = 1e-8);
int numerical_rank(const Eigen::VectorXd& singular_values, double rel_tol = 1e-8);

/// binomial(p + n - 1, n - 1): dimension of real degree-p forms in n variables.
long polynomial_dimension(int p_even, int n);

}  // namespace lpdual
