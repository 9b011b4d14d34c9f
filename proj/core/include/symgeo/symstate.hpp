#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace symgeo {

using Scalar = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Tolerance used for every "is normalized" invariant in the library.
inline constexpr double kNormTolerance = 1e-12;

/// A normalized single-party vector. Real mode means every imaginary part is
/// exactly zero; nonneg additionally requires every real part >= 0.
class UnitVector {
public:
  /// Validates that `entries` has unit norm within kNormTolerance.
  explicit UnitVector(CVector entries);

  /// Scales `raw` to unit norm. Throws InvalidArgument on a zero vector.
  static UnitVector normalize(CVector raw);
  static UnitVector normalize(std::span<const double> raw);
  static UnitVector basis(int d, int i);
  /// (1/sqrt(d), ..., 1/sqrt(d))
  static UnitVector uniform(int d);

  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const CVector& entries() const noexcept { return v_; }
  Scalar operator[](int i) const { return v_[i]; }
  bool is_real() const noexcept { return real_; }
  bool nonneg() const noexcept { return nonneg_; }

private:
  CVector v_;
  bool real_ = true;
  bool nonneg_ = true;
};

/// Ordered tuple of n >= 2 single-party vectors of a common dimension.
class ProductState {
public:
  explicit ProductState(std::vector<UnitVector> parties);
  /// n copies of the same vector.
  static ProductState repeated(const UnitVector& v, int n);

  int n() const noexcept { return static_cast<int>(parties_.size()); }
  int d() const noexcept { return parties_.front().dim(); }
  const UnitVector& operator[](int p) const { return parties_.at(p); }
  const std::vector<UnitVector>& parties() const noexcept { return parties_; }
  bool nonneg() const noexcept;

  /// Expands to the full d^n amplitude vector (normalized).
  CVector expand() const;

private:
  std::vector<UnitVector> parties_;
};

/// Full amplitude array of an n-party state over local dimension d. Indexing
/// is row-major with party 0 the most significant digit. The state may be
/// non-normalized (partial contractions produce such states).
class DenseState {
public:
  DenseState(int n, int d, CVector amps, bool normalized);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const CVector& amps() const noexcept { return amps_; }
  bool normalized() const noexcept { return normalized_; }
  double squared_norm() const { return amps_.squaredNorm(); }
  bool nonneg() const noexcept;

  std::size_t flat_index(std::span<const int> multi) const;
  std::vector<int> multi_index(std::size_t flat) const;

private:
  int n_;
  int d_;
  CVector amps_;
  bool normalized_;
};

/// Occupation numbers (k_1, ..., k_d) of a type class; sum equals n.
struct Composition {
  std::vector<int> counts;

  int total() const noexcept;
  auto operator<=>(const Composition&) const = default;
};

/// All compositions of n into d parts, in descending lexicographic order:
/// (n,0,..,0) first and (0,..,0,n) last. For d = 2 entry k is (n-k, k), the
/// Dicke label.
class CompositionTable {
public:
  CompositionTable(int n, int d);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return comps_.size(); }
  const Composition& operator[](std::size_t i) const { return comps_[i]; }
  const std::vector<Composition>& all() const noexcept { return comps_; }
  /// multinomial(n; counts) as a double, exact for the sizes used here.
  double multinomial(std::size_t i) const { return multinomials_[i]; }
  /// Throws InvalidArgument when the composition does not belong to (n, d).
  std::size_t index_of(const Composition& c) const;
  /// Type class of a computational-basis multi-index.
  std::size_t index_of_multi(std::span<const int> multi) const;

private:
  int n_;
  int d_;
  std::vector<Composition> comps_;
  std::vector<double> multinomials_;
};

/// Coefficients of a permutation-invariant state in the normalized Dicke
/// basis. All C(n+d-1, d-1) coefficients are stored densely (zeros
/// included), ordered as in CompositionTable.
class SymmetricState {
public:
  SymmetricState(int n, int d, CVector coeffs, bool normalized);

  int n() const noexcept { return table_->n(); }
  int d() const noexcept { return table_->d(); }
  const CompositionTable& table() const noexcept { return *table_; }
  const CVector& coeffs() const noexcept { return coeffs_; }
  Scalar coeff(const Composition& c) const { return coeffs_[static_cast<Eigen::Index>(table_->index_of(c))]; }
  bool normalized() const noexcept { return normalized_; }
  bool nonneg() const noexcept { return nonneg_; }
  double squared_norm() const { return coeffs_.squaredNorm(); }

private:
  std::shared_ptr<const CompositionTable> table_;
  CVector coeffs_;
  bool normalized_;
  bool nonneg_;
};

double binomial(int n, int k);
/// C(n+d-1, d-1)
std::size_t symmetric_dimension(int n, int d);

/// (sum_i |i>^n) / sqrt(d)
SymmetricState make_ghz(int n, int d);
/// Qubit Dicke state with k excitations; make_dicke(n, 1) is W_n.
SymmetricState make_dicke(int n, int k);
inline SymmetricState make_w(int n) { return make_dicke(n, 1); }

DenseState dicke_to_dense(const SymmetricState& s);

/// Inverse of dicke_to_dense. Throws NotSymmetric when two amplitudes of the
/// same type class differ by more than `tol`.
SymmetricState dense_to_dicke(const DenseState& psi, double tol = 1e-12);

/// Orthogonal projection onto the symmetric subspace, in Dicke coordinates.
/// Unlike dense_to_dicke this accepts any input; the result is marked
/// non-normalized. For every phi, <phi^n|psi> = <phi^n|project_symmetric(psi)>.
SymmetricState project_symmetric(const DenseState& psi);

/// Dicke coefficients i.i.d. uniform on [0,1] from Rng(seed), normalized.
SymmetricState random_nonneg_symmetric(int n, int d, std::uint64_t seed);

/// Computational-basis amplitudes i.i.d. uniform on [0,1], normalized. Not
/// permutation invariant in general.
DenseState random_nonneg_dense(int n, int d, std::uint64_t seed);

/// (|0101..> + |1010..>)/sqrt(2) on n qubits: translation invariant, not
/// permutation invariant.
DenseState make_translation_ghz(int n);

}  // namespace symgeo
