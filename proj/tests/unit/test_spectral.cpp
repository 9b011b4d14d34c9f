#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "symgeo/contract.hpp"
#include "symgeo/error.hpp"
#include "symgeo/rng.hpp"
#include "symgeo/spectral.hpp"
#include "symgeo/verify.hpp"

using namespace symgeo;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Eigen::MatrixXd random_sym(int d, std::uint64_t seed) {
  return real_matrix(matricize(dicke_to_dense(random_nonneg_symmetric(2, d, seed))));
}

}  // namespace

TEST_CASE("pf_power_iteration examples") {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto r = pf_power_iteration(swap);
  CHECK(r.converged);
  CHECK(std::abs(r.lambda1 - 1.0) < 1e-14);
  CHECK(std::abs(r.w[0].real() - kInvSqrt2) < 1e-14);
  CHECK(std::abs(r.w[1].real() - kInvSqrt2) < 1e-14);

  const auto ghz = pf_power_iteration(Eigen::MatrixXd::Identity(2, 2) * kInvSqrt2);
  CHECK(std::abs(ghz.lambda1 - kInvSqrt2) < 1e-14);
  CHECK(ghz.w.nonneg());
  // Tie rule: the uniform start is already an eigenvector.
  CHECK(std::abs(ghz.w[0].real() - kInvSqrt2) < 1e-14);
  CHECK(ghz.iterations == 0);

  const auto zero = pf_power_iteration(Eigen::MatrixXd::Zero(3, 3));
  CHECK(zero.lambda1 == 0.0);
  CHECK(zero.converged);
}

TEST_CASE("pf_power_iteration rejects invalid matrices") {
  Eigen::MatrixXd neg(2, 2);
  neg << 1, -1, -1, 1;
  try {
    pf_power_iteration(neg);
    FAIL("expected NotNonnegative");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNonnegative);
  }
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  try {
    pf_power_iteration(asym);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
}

TEST_CASE("pf_power_iteration reports non-convergence with the best iterate") {
  Eigen::MatrixXd m(2, 2);
  m << 3, 0, 0, 2;
  const auto r = pf_power_iteration(m, 1e-12, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.residual > 1e-12);
  CHECK(r.w.nonneg());
}

TEST_CASE("largest_singular_value examples") {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(std::abs(largest_singular_value(swap) - 1.0) < 1e-12);
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 3;
  diag(1, 1) = 2;
  CHECK(std::abs(largest_singular_value(diag) - 3.0) < 1e-10 * 3);
  CHECK(std::abs(largest_singular_value(swap * kInvSqrt2) - kInvSqrt2) < 1e-12);
  // Signed input: singular values of [[1,-2],[-2,1]] are 3 and 1.
  Eigen::MatrixXd signed_m(2, 2);
  signed_m << 1, -2, -2, 1;
  CHECK(std::abs(largest_singular_value(signed_m) - 3.0) < 1e-10 * 3);
}

TEST_CASE("top eigenvalue equals top singular value on 200 random non-negative symmetric matrices") {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const int d = 2 + static_cast<int>(i % 5);
    const auto m = random_sym(d, derive_seed(99, i));
    const auto pf = pf_power_iteration(m);
    REQUIRE(pf.converged);
    const double sigma = largest_singular_value(m);
    worst = std::max(worst, std::abs(pf.lambda1 - sigma) / sigma);
    CHECK(std::abs(pf.lambda1 - oracle::eigen_lambda_max(m)) < 1e-10);
    CHECK(std::abs(sigma - oracle::eigen_sigma_max(m)) < 1e-10 * sigma);
    CHECK(pf.w.nonneg());
    CHECK(pf.residual <= 1e-12);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("pf handles bipartite patterns where -lambda1 is an eigenvalue") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.block(0, 2, 2, 2) << 1, 2, 3, 4;
  m.block(2, 0, 2, 2) = m.block(0, 2, 2, 2).transpose();
  const auto r = pf_power_iteration(m);
  CHECK(r.converged);
  CHECK(std::abs(r.lambda1 - oracle::eigen_lambda_max(m)) < 1e-10);
}

TEST_CASE("average_pair examples") {
  const auto e0 = UnitVector::basis(2, 0), e1 = UnitVector::basis(2, 1);
  const auto same = average_pair(e0, e0);
  CHECK(same.entries() == e0.entries());
  const auto mid = average_pair(e0, e1);
  CHECK(std::abs(mid[0].real() - kInvSqrt2) < 1e-15);
  CHECK(std::abs(mid[1].real() - kInvSqrt2) < 1e-15);
  CHECK(mid.nonneg());
  CHECK_THROWS_AS(average_pair(e0, UnitVector::basis(3, 0)), Error);
  CHECK_THROWS_AS(average_pair(e0, UnitVector(CVector{{0.6, -0.8}})), Error);

  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CVector a(4), b(4);
    for (int j = 0; j < 4; ++j) {
      a[j] = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
      b[j] = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
    }
    a[0] += 1e-3;
    b[1] += 1e-3;
    const auto w = average_pair(UnitVector::normalize(a), UnitVector::normalize(b));
    CHECK(w.nonneg());
    CHECK(w.entries().real().minCoeff() >= 0.0);
  }
}

TEST_CASE("averaging an optimal non-negative pair gives a Perron eigenvector") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto m = random_sym(4, derive_seed(5, i));
    const auto opt = bilinear_optimum(m);
    const double lambda1 = pf_power_iteration(m).lambda1;
    CHECK(std::abs(opt.value - lambda1) < 1e-10);
    const auto rec = averaged_eigenvector_instance(m);
    CHECK(rec.value("residual_w") <= 1e-8);
    // Cauchy-Schwarz chain: ||M v*|| = lambda1.
    CHECK(std::abs((m * opt.v).norm() - lambda1) < 1e-8);
  }
}
