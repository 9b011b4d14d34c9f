#include "symgeo/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "symgeo/error.hpp"

namespace symgeo {

namespace {

UnitVector real_unit(const Eigen::VectorXd& v) {
  CVector c = v.cast<Scalar>();
  return UnitVector(std::move(c));
}

}  // namespace

SpectralResult pf_power_iteration(const Eigen::MatrixXd& m, double tol, int max_iter) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::DimMismatch, "matrix must be square and non-empty");
  if ((m.array() < 0.0).any()) throw Error(ErrorCode::NotNonnegative, "matrix has a negative entry");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");

  const Eigen::Index d = m.rows();
  const double shift = m.rowwise().sum().maxCoeff();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));

  SpectralResult out;
  if (shift == 0.0) {
    out.lambda1 = 0.0;
    out.w = real_unit(w);
    out.converged = true;
    return out;
  }

  double lambda = w.dot(m * w);
  double residual = (m * w - lambda * w).norm();
  int it = 0;
  while (residual > tol && it < max_iter) {
    Eigen::VectorXd y = m * w + shift * w;
    w = y / y.norm();
    lambda = w.dot(m * w);
    residual = (m * w - lambda * w).norm();
    ++it;
  }
  // Re-normalize so the UnitVector invariant holds to the last ulp.
  w /= w.norm();
  out.lambda1 = lambda;
  out.w = real_unit(w);
  out.iterations = it;
  out.residual = residual;
  out.converged = residual <= tol;
  return out;
}

double largest_singular_value(const Eigen::MatrixXd& m, int max_iter) {
  if (m.size() == 0) throw Error(ErrorCode::DimMismatch, "empty matrix");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  const Eigen::MatrixXd gram = m.transpose() * m;
  const Eigen::Index d = gram.rows();
  // A non-constant start so that sign patterns orthogonal to the all-ones
  // vector are still reached.
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = 1.0 + 0.5 / static_cast<double>(i + 1);
  x.normalize();

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd y = gram * x;
    const double mu = x.dot(y);
    if (mu <= 0.0 && y.norm() == 0.0) return 0.0;
    const double residual = (y - mu * x).norm();
    if (residual <= 1e-13 * mu) return std::sqrt(mu);
    x = y / y.norm();
  }
  throw Error(ErrorCode::NotConverged, "largest_singular_value did not converge");
}

UnitVector average_pair(const UnitVector& u, const UnitVector& v) {
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimMismatch, "average_pair: dims differ");
  if (!u.nonneg() || !v.nonneg()) throw Error(ErrorCode::NotNonnegative, "average_pair needs non-negative inputs");
  CVector sum = u.entries() + v.entries();
  const double norm = sum.norm();
  if (!(norm >= 1.0)) throw std::logic_error("average_pair: ||u+v|| < 1 for non-negative unit vectors");
  return UnitVector(sum / norm);
}

Eigen::MatrixXd real_matrix(const Eigen::MatrixXcd& m) {
  if ((m.imag().array() != 0.0).any()) throw Error(ErrorCode::InvalidArgument, "matrix has nonzero imaginary part");
  return m.real();
}

}  // namespace symgeo
