#pragma once

#include <Eigen/Core>

#include "symgeo/symstate.hpp"

namespace symgeo {

// Conjugation convention: the product state is the bra. Every routine here
// conjugates the single-party vectors and never the state amplitudes, so
// overlap(phi, psi) = <phi|psi>.

/// <Phi|psi> for a product state Phi. Throws DimMismatch.
Scalar overlap(const ProductState& phi, const DenseState& psi);

/// <phi|^n |s>, evaluated in the Dicke basis in O(#compositions * d):
///   sum_c coeff(c) * sqrt(multinomial(n; c)) * prod_i conj(phi_i)^{c_i}
Scalar symmetric_overlap(const UnitVector& phi, const SymmetricState& s);

/// Applies <a| at `party` (0-based), returning the non-normalized
/// (n-1)-party state. Throws DimMismatch or PartyOutOfRange; needs n >= 2.
DenseState partial_contract(const DenseState& psi, const UnitVector& a, int party);

/// Contracts every party except `party` against phi, leaving the length-d
/// single-party environment g with <phi_party, g> = <Phi|psi>.
CVector contract_all_but(const DenseState& psi, const ProductState& phi, int party);

/// The n = 2 state as a d x d matrix, M(i, j) = amps[i*d + j]. Throws
/// WrongArity for n != 2.
Eigen::MatrixXcd matricize(const DenseState& psi);

/// Environment of one party for the symmetric product phi^(n-1):
///   g_j = (1/n) d/d conj(phi_j) <phi^n|s>
/// so that <phi, g> = symmetric_overlap(phi, s).
CVector gradient_contract(const SymmetricState& s, const UnitVector& phi);

}  // namespace symgeo
