#include "symgeo/contract.hpp"

#include <cmath>
#include <string>

#include "symgeo/error.hpp"

namespace symgeo {

namespace {

std::size_t ipow(int d, int n) {
  std::size_t out = 1;
  for (int i = 0; i < n; ++i) out *= static_cast<std::size_t>(d);
  return out;
}

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": dim " + std::to_string(got) +
                                            " does not match local dim " + std::to_string(expected));
  }
}

// Contracts conj(a) into the slot of `amps` that has `outer` more-significant
// and `inner` less-significant index combinations.
CVector contract_slot(const CVector& amps, const CVector& a, std::size_t outer, std::size_t inner) {
  const auto d = static_cast<std::size_t>(a.size());
  CVector out = CVector::Zero(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < d; ++i) {
      const Scalar w = std::conj(a[static_cast<Eigen::Index>(i)]);
      if (w == Scalar(0.0)) continue;
      const std::size_t base = (o * d + i) * inner;
      for (std::size_t r = 0; r < inner; ++r) {
        out[static_cast<Eigen::Index>(o * inner + r)] += w * amps[static_cast<Eigen::Index>(base + r)];
      }
    }
  }
  return out;
}

Scalar ipow(Scalar z, int k) {
  Scalar out(1.0);
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

}  // namespace

Scalar overlap(const ProductState& phi, const DenseState& psi) {
  if (phi.n() != psi.n()) {
    throw Error(ErrorCode::DimMismatch, "product state has " + std::to_string(phi.n()) +
                                            " parties, state has " + std::to_string(psi.n()));
  }
  require_dim(psi.d(), phi.d(), "overlap");
  CVector cur = psi.amps();
  for (int p = 0; p < psi.n(); ++p) {
    cur = contract_slot(cur, phi[p].entries(), 1, ipow(psi.d(), psi.n() - 1 - p));
  }
  return cur[0];
}

Scalar symmetric_overlap(const UnitVector& phi, const SymmetricState& s) {
  require_dim(s.d(), phi.dim(), "symmetric_overlap");
  const auto& table = s.table();
  Scalar total(0.0);
  for (std::size_t c = 0; c < table.size(); ++c) {
    const Scalar coeff = s.coeffs()[static_cast<Eigen::Index>(c)];
    if (coeff == Scalar(0.0)) continue;
    Scalar term = coeff * std::sqrt(table.multinomial(c));
    for (int i = 0; i < s.d(); ++i) term *= ipow(std::conj(phi[i]), table[c].counts[static_cast<std::size_t>(i)]);
    total += term;
  }
  return total;
}

DenseState partial_contract(const DenseState& psi, const UnitVector& a, int party) {
  if (psi.n() < 2) throw Error(ErrorCode::InvalidArgument, "partial_contract needs n >= 2");
  if (party < 0 || party >= psi.n()) {
    throw Error(ErrorCode::PartyOutOfRange,
                "party " + std::to_string(party) + " outside [0, " + std::to_string(psi.n()) + ")");
  }
  require_dim(psi.d(), a.dim(), "partial_contract");
  CVector out = contract_slot(psi.amps(), a.entries(), ipow(psi.d(), party), ipow(psi.d(), psi.n() - 1 - party));
  return DenseState(psi.n() - 1, psi.d(), std::move(out), false);
}

CVector contract_all_but(const DenseState& psi, const ProductState& phi, int party) {
  if (phi.n() != psi.n()) throw Error(ErrorCode::DimMismatch, "party count mismatch");
  require_dim(psi.d(), phi.d(), "contract_all_but");
  if (party < 0 || party >= psi.n()) throw Error(ErrorCode::PartyOutOfRange, "party out of range");
  // Contract the leading parties, then the trailing ones, leaving `party`.
  CVector cur = psi.amps();
  for (int p = 0; p < party; ++p) {
    cur = contract_slot(cur, phi[p].entries(), 1, ipow(psi.d(), psi.n() - 1 - p));
  }
  for (int p = psi.n() - 1; p > party; --p) {
    cur = contract_slot(cur, phi[p].entries(), ipow(psi.d(), p - party), 1);
  }
  return cur;
}

Eigen::MatrixXcd matricize(const DenseState& psi) {
  if (psi.n() != 2) throw Error(ErrorCode::WrongArity, "matricize needs n = 2, got " + std::to_string(psi.n()));
  const int d = psi.d();
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = psi.amps()[i * d + j];
  }
  return m;
}

CVector gradient_contract(const SymmetricState& s, const UnitVector& phi) {
  require_dim(s.d(), phi.dim(), "gradient_contract");
  const auto& table = s.table();
  const int d = s.d();
  CVector g = CVector::Zero(d);
  std::vector<Scalar> x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = std::conj(phi[i]);

  for (std::size_t c = 0; c < table.size(); ++c) {
    const Scalar coeff = s.coeffs()[static_cast<Eigen::Index>(c)];
    if (coeff == Scalar(0.0)) continue;
    const Scalar weight = coeff * std::sqrt(table.multinomial(c));
    const auto& k = table[c].counts;
    for (int j = 0; j < d; ++j) {
      if (k[static_cast<std::size_t>(j)] == 0) continue;
      Scalar term = weight * static_cast<double>(k[static_cast<std::size_t>(j)]);
      for (int i = 0; i < d; ++i) {
        term *= ipow(x[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(i)] - (i == j ? 1 : 0));
      }
      g[j] += term;
    }
  }
  return g / static_cast<double>(s.n());
}

}  // namespace symgeo
