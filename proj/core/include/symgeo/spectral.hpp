#pragma once

#include <Eigen/Core>

#include "symgeo/symstate.hpp"

namespace symgeo {

struct SpectralResult {
  double lambda1 = 0.0;
  UnitVector w = UnitVector::basis(1, 0);
  int iterations = 0;
  /// ||M w - lambda1 w||
  double residual = 0.0;
  bool converged = false;
};

/// Largest eigenvalue and a non-negative eigenvector of a non-negative
/// symmetric matrix.
///
/// Iterates on M + cI with c = max row sum, starting from the uniform vector.
/// The shift makes the Perron root the unique dominant eigenvalue even when
/// -lambda1 is also in the spectrum (bipartite patterns) and keeps every
/// iterate non-negative. For reducible M the answer is whatever this
/// iteration converges to from the uniform start. For M = 0 the result is
/// lambda1 = 0 with the uniform vector.
///
/// Throws NotNonnegative / NotSymmetric (symmetry checked to 1e-12). On
/// running out of iterations returns the last iterate with converged = false.
SpectralResult pf_power_iteration(const Eigen::MatrixXd& m, double tol = 1e-12, int max_iter = 100000);

/// Top singular value via power iteration on M^T M, reported as
/// sqrt(top eigenvalue). Independent of pf_power_iteration: no sign or
/// symmetry assumptions. Throws NotConverged.
double largest_singular_value(const Eigen::MatrixXd& m, int max_iter = 1000000);

/// (u + v) / ||u + v|| for non-negative unit vectors. The denominator is at
/// least sqrt(2) under that precondition. Throws DimMismatch, or
/// NotNonnegative if either input is not flagged non-negative.
UnitVector average_pair(const UnitVector& u, const UnitVector& v);

/// Real part of a matrix whose imaginary part must vanish exactly.
/// Throws InvalidArgument otherwise.
Eigen::MatrixXd real_matrix(const Eigen::MatrixXcd& m);

}  // namespace symgeo
