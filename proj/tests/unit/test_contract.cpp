#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "symgeo/contract.hpp"
#include "symgeo/error.hpp"
#include "symgeo/rng.hpp"

using namespace symgeo;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

UnitVector real_vec(std::initializer_list<double> xs) {
  std::vector<double> v(xs);
  return UnitVector::normalize(std::span<const double>(v));
}

UnitVector random_vec(Rng& rng, int d, bool complex) {
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    v[i] = complex ? Scalar(rng.uniform(-1, 1), rng.uniform(-1, 1)) : Scalar(rng.uniform01());
  }
  return UnitVector::normalize(std::move(v));
}

std::vector<Eigen::VectorXcd> raw(const ProductState& p) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& u : p.parties()) out.push_back(u.entries());
  return out;
}

}  // namespace

TEST_CASE("overlap examples") {
  const auto e0 = UnitVector::basis(2, 0);
  const auto e1 = UnitVector::basis(2, 1);
  const auto plus = UnitVector::uniform(2);
  CHECK(std::abs(overlap(ProductState({e0, e0}), dicke_to_dense(make_ghz(2, 2))) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(overlap(ProductState({e0, e1}), dicke_to_dense(make_dicke(2, 1))) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(overlap(ProductState({plus, plus}), dicke_to_dense(make_dicke(2, 1))) - kInvSqrt2) < 1e-15);
  CHECK_THROWS_AS(overlap(ProductState({e0, e0, e0}), dicke_to_dense(make_ghz(2, 2))), Error);
}

TEST_CASE("overlap agrees with brute-force summation and conjugates the bra") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3, d = 2 + trial % 2;
    std::vector<UnitVector> parties;
    for (int p = 0; p < n; ++p) parties.push_back(random_vec(rng, d, true));
    const ProductState phi(parties);
    CVector amps(static_cast<Eigen::Index>(std::pow(d, n)));
    for (auto& a : amps) a = Scalar(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const DenseState psi(n, d, amps / amps.norm(), true);
    const Scalar got = overlap(phi, psi);
    CHECK(std::abs(got - oracle::brute_overlap(raw(phi), psi.amps())) < 1e-12);
    CHECK(std::abs(got) <= 1.0 + 1e-12);
    // <Phi|Phi> = 1 fixes the conjugation convention.
    CHECK(std::abs(overlap(phi, DenseState(n, d, phi.expand(), true)) - 1.0) < 1e-12);
  }
}

TEST_CASE("overlap is invariant under simultaneous party permutations") {
  Rng rng(5);
  const auto psi = random_nonneg_dense(3, 2, 77);
  std::vector<UnitVector> parties{random_vec(rng, 2, true), random_vec(rng, 2, true), random_vec(rng, 2, true)};
  // Permute parties (0 1 2) -> (1 2 0) on both sides.
  CVector permuted(8);
  for (std::size_t flat = 0; flat < 8; ++flat) {
    const auto idx = psi.multi_index(flat);
    const std::vector<int> moved{idx[1], idx[2], idx[0]};
    permuted[static_cast<Eigen::Index>(psi.flat_index(moved))] = psi.amps()[static_cast<Eigen::Index>(flat)];
  }
  const ProductState a(parties);
  const ProductState b({parties[1], parties[2], parties[0]});
  CHECK(std::abs(overlap(a, psi) - overlap(b, DenseState(3, 2, permuted, true))) < 1e-15);
}

TEST_CASE("symmetric_overlap examples") {
  CHECK(std::abs(symmetric_overlap(UnitVector::basis(2, 0), make_ghz(3, 2)) - kInvSqrt2) < 1e-15);
  const auto phi_w = real_vec({std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0)});
  CHECK(std::abs(symmetric_overlap(phi_w, make_w(3)) - 2.0 / 3.0) < 1e-15);
  const auto s42 = make_dicke(4, 2);
  const auto plus = UnitVector::uniform(2);
  CHECK(std::abs(symmetric_overlap(plus, s42) - std::sqrt(3.0 / 8.0)) < 1e-15);
  CHECK(std::abs(overlap(ProductState::repeated(plus, 4), dicke_to_dense(s42)) - std::sqrt(3.0 / 8.0)) < 1e-15);
}

TEST_CASE("W_3 symmetric max 4/9 is confirmed by the 1-D oracle") {
  const auto m = oracle::qubit_symmetric_max({0, 1, 0, 0});
  CHECK(std::abs(m.value * m.value - 4.0 / 9.0) < 1e-12);
  CHECK(std::abs(std::cos(m.arg) - std::sqrt(2.0 / 3.0)) < 1e-6);
}

TEST_CASE("Dicke and dense overlaps agree") {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4), d = 2 + static_cast<int>(seed % 3);
    const auto s = random_nonneg_symmetric(n, d, seed);
    const auto phi = random_vec(rng, d, seed % 2 == 0);
    CHECK(std::abs(symmetric_overlap(phi, s) - overlap(ProductState::repeated(phi, n), dicke_to_dense(s))) < 1e-12);
  }
}

TEST_CASE("partial_contract") {
  const auto ghz = dicke_to_dense(make_ghz(3, 2));
  const auto out = partial_contract(ghz, UnitVector::basis(2, 0), 2);
  CHECK(out.n() == 2);
  CHECK_FALSE(out.normalized());
  CHECK(std::abs(out.amps()[0] - kInvSqrt2) < 1e-15);
  CHECK(out.amps().tail(3).norm() == 0.0);

  const auto one = partial_contract(dicke_to_dense(make_dicke(2, 1)), UnitVector::basis(2, 1), 0);
  CHECK(one.n() == 1);
  CHECK(std::abs(one.amps()[0] - kInvSqrt2) < 1e-15);
  CHECK(one.amps()[1] == Scalar(0.0));

  CHECK_THROWS_AS(partial_contract(ghz, UnitVector::basis(2, 0), 3), Error);
  CHECK_THROWS_AS(partial_contract(ghz, UnitVector::basis(3, 0), 0), Error);

  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = dicke_to_dense(random_nonneg_symmetric(4, 3, seed));
    const auto a = random_vec(rng, 3, false);
    for (int party = 0; party < 4; ++party) {
      const auto c = partial_contract(psi, a, party);
      CHECK(c.nonneg());
      CHECK(c.squared_norm() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("partial contraction then full overlap equals full overlap") {
  Rng rng(12);
  const auto psi = random_nonneg_dense(4, 2, 5);
  std::vector<UnitVector> parties;
  for (int p = 0; p < 4; ++p) parties.push_back(random_vec(rng, 2, true));
  const Scalar full = overlap(ProductState(parties), psi);
  for (int party = 0; party < 4; ++party) {
    std::vector<UnitVector> rest = parties;
    rest.erase(rest.begin() + party);
    CHECK(std::abs(overlap(ProductState(rest), partial_contract(psi, parties[static_cast<std::size_t>(party)], party)) - full) < 1e-13);
    const CVector env = contract_all_but(psi, ProductState(parties), party);
    CHECK(std::abs(parties[static_cast<std::size_t>(party)].entries().dot(env) - full) < 1e-13);
  }
}

TEST_CASE("matricize") {
  const auto m = matricize(dicke_to_dense(make_dicke(2, 1)));
  CHECK(m(0, 0) == Scalar(0.0));
  CHECK(std::abs(m(0, 1) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(m(1, 0) - kInvSqrt2) < 1e-15);
  const auto g = matricize(dicke_to_dense(make_ghz(2, 2)));
  CHECK(std::abs(g(0, 0) - kInvSqrt2) < 1e-15);
  CHECK(g(0, 1) == Scalar(0.0));
  CHECK_THROWS_AS(matricize(dicke_to_dense(make_ghz(3, 2))), Error);

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const auto psi = random_nonneg_dense(2, d, static_cast<std::uint64_t>(trial));
    const auto mat = matricize(psi);
    CHECK(std::abs((mat.adjoint() * mat).trace() - psi.squared_norm()) < 1e-12);
    const auto u = random_vec(rng, d, false), v = random_vec(rng, d, false);
    const Scalar bilinear = u.entries().dot(mat * v.entries());
    CHECK(std::abs(bilinear - overlap(ProductState({u, v}), psi)) < 1e-12);
  }
  const auto sym = matricize(dicke_to_dense(random_nonneg_symmetric(2, 4, 3)));
  CHECK((sym - sym.transpose()).norm() < 1e-15);
}

TEST_CASE("gradient_contract examples") {
  const auto g = gradient_contract(make_ghz(2, 2), UnitVector::basis(2, 0));
  CHECK(std::abs(g[0] - kInvSqrt2) < 1e-15);
  CHECK(g[1] == Scalar(0.0));
  const auto h = gradient_contract(make_dicke(2, 1), UnitVector::basis(2, 0));
  CHECK(h[0] == Scalar(0.0));
  CHECK(std::abs(h[1] - kInvSqrt2) < 1e-15);
}

TEST_CASE("gradient_contract matches finite differences and Euler's identity") {
  Rng rng(31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4), d = 2 + static_cast<int>(seed % 2);
    const auto s = random_nonneg_symmetric(n, d, seed + 500);
    const auto phi = random_vec(rng, d, false);
    const CVector g = gradient_contract(s, phi);
    CHECK(std::abs(phi.entries().dot(g) - symmetric_overlap(phi, s)) < 1e-12);
    // Differentiate the polynomial <x^n|s> for real x (not restricted to the
    // sphere) by central differences in each coordinate.
    for (int j = 0; j < d; ++j) {
      auto f = [&](double t) {
        CVector x = phi.entries();
        x[j] += t;
        const double scale = x.norm();
        return symmetric_overlap(UnitVector(x / scale), s).real() * std::pow(scale, n);
      };
      const double fd = oracle::central_difference(f, 0.0) / n;
      CHECK(std::abs(fd - g[j].real()) < 1e-6);
    }
  }
}
