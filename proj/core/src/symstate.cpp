#include "symgeo/symstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symgeo/error.hpp"
#include "symgeo/rng.hpp"

namespace symgeo {

namespace {

std::size_t checked_power(int d, int n) {
  std::size_t out = 1;
  for (int i = 0; i < n; ++i) {
    if (out > (std::size_t{1} << 40) / static_cast<std::size_t>(d)) {
      throw Error(ErrorCode::InvalidArgument, "d^n too large for dense storage");
    }
    out *= static_cast<std::size_t>(d);
  }
  return out;
}

void require_party_count(int n, int d) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1, got " + std::to_string(n));
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1, got " + std::to_string(d));
}

bool all_real(const CVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& z) { return z.imag() == 0.0; });
}

bool all_nonneg(const CVector& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const Scalar& z) { return z.imag() == 0.0 && z.real() >= 0.0; });
}

void enumerate_compositions(int remaining, int slot, int d, std::vector<int>& cur,
                            std::vector<Composition>& out) {
  if (slot == d - 1) {
    cur[slot] = remaining;
    out.push_back(Composition{cur});
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[slot] = k;
    enumerate_compositions(remaining - k, slot + 1, d, cur, out);
  }
}

}  // namespace

// ---------------------------------------------------------------- UnitVector

UnitVector::UnitVector(CVector entries) : v_(std::move(entries)) {
  if (v_.size() == 0) throw Error(ErrorCode::InvalidArgument, "UnitVector must have dim >= 1");
  const double norm = v_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::InvalidArgument,
                "UnitVector norm is " + std::to_string(norm) + ", expected 1");
  }
  real_ = all_real(v_);
  nonneg_ = all_nonneg(v_);
}

UnitVector UnitVector::normalize(CVector raw) {
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  raw /= norm;
  return UnitVector(std::move(raw));
}

UnitVector UnitVector::normalize(std::span<const double> raw) {
  CVector v(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) v[static_cast<Eigen::Index>(i)] = raw[i];
  return normalize(std::move(v));
}

UnitVector UnitVector::basis(int d, int i) {
  if (i < 0 || i >= d) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  CVector v = CVector::Zero(d);
  v[i] = 1.0;
  return UnitVector(std::move(v));
}

UnitVector UnitVector::uniform(int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  return UnitVector(CVector::Constant(d, Scalar(1.0 / std::sqrt(static_cast<double>(d)))));
}

// -------------------------------------------------------------- ProductState

ProductState::ProductState(std::vector<UnitVector> parties) : parties_(std::move(parties)) {
  if (parties_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "ProductState needs n >= 2 parties");
  }
  const int d = parties_.front().dim();
  for (const auto& p : parties_) {
    if (p.dim() != d) throw Error(ErrorCode::DimMismatch, "ProductState parties differ in dim");
  }
}

ProductState ProductState::repeated(const UnitVector& v, int n) {
  return ProductState(std::vector<UnitVector>(static_cast<std::size_t>(std::max(n, 0)), v));
}

bool ProductState::nonneg() const noexcept {
  return std::all_of(parties_.begin(), parties_.end(), [](const UnitVector& u) { return u.nonneg(); });
}

CVector ProductState::expand() const {
  CVector out = CVector::Ones(1);
  for (const auto& p : parties_) {
    CVector next(out.size() * p.dim());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      for (int j = 0; j < p.dim(); ++j) next[i * p.dim() + j] = out[i] * p[j];
    }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------- DenseState

DenseState::DenseState(int n, int d, CVector amps, bool normalized)
    : n_(n), d_(d), amps_(std::move(amps)), normalized_(normalized) {
  require_party_count(n, d);
  const std::size_t expected = checked_power(d, n);
  if (static_cast<std::size_t>(amps_.size()) != expected) {
    throw Error(ErrorCode::DimMismatch, "DenseState amplitude count " + std::to_string(amps_.size()) +
                                            " != d^n = " + std::to_string(expected));
  }
  if (normalized_ && std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::InvalidArgument, "DenseState marked normalized but squared norm is " +
                                                std::to_string(amps_.squaredNorm()));
  }
}

bool DenseState::nonneg() const noexcept { return all_nonneg(amps_); }

std::size_t DenseState::flat_index(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != n_) throw Error(ErrorCode::DimMismatch, "multi-index length != n");
  std::size_t flat = 0;
  for (int i : multi) {
    if (i < 0 || i >= d_) throw Error(ErrorCode::DimMismatch, "multi-index digit out of range");
    flat = flat * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<int> DenseState::multi_index(std::size_t flat) const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  for (int p = n_ - 1; p >= 0; --p) {
    out[static_cast<std::size_t>(p)] = static_cast<int>(flat % static_cast<std::size_t>(d_));
    flat /= static_cast<std::size_t>(d_);
  }
  return out;
}

// --------------------------------------------------------------- Compositions

int Composition::total() const noexcept {
  int s = 0;
  for (int c : counts) s += c;
  return s;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

std::size_t symmetric_dimension(int n, int d) {
  return static_cast<std::size_t>(binomial(n + d - 1, d - 1));
}

CompositionTable::CompositionTable(int n, int d) : n_(n), d_(d) {
  require_party_count(n, d);
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  enumerate_compositions(n, 0, d, cur, comps_);
  multinomials_.reserve(comps_.size());
  for (const auto& c : comps_) {
    double m = 1.0;
    int placed = 0;
    for (int k : c.counts) {
      placed += k;
      m *= binomial(placed, k);
    }
    multinomials_.push_back(m);
  }
}

std::size_t CompositionTable::index_of(const Composition& c) const {
  if (static_cast<int>(c.counts.size()) != d_ || c.total() != n_ ||
      std::any_of(c.counts.begin(), c.counts.end(), [](int k) { return k < 0; })) {
    throw Error(ErrorCode::InvalidArgument, "composition does not match (n, d)");
  }
  // Descending lexicographic order: binary search with a reversed comparator.
  auto it = std::lower_bound(comps_.begin(), comps_.end(), c,
                             [](const Composition& a, const Composition& b) { return a > b; });
  return static_cast<std::size_t>(it - comps_.begin());
}

std::size_t CompositionTable::index_of_multi(std::span<const int> multi) const {
  Composition c{std::vector<int>(static_cast<std::size_t>(d_), 0)};
  for (int i : multi) c.counts.at(static_cast<std::size_t>(i)) += 1;
  return index_of(c);
}

// ------------------------------------------------------------ SymmetricState

SymmetricState::SymmetricState(int n, int d, CVector coeffs, bool normalized)
    : table_(std::make_shared<const CompositionTable>(n, d)),
      coeffs_(std::move(coeffs)),
      normalized_(normalized) {
  if (static_cast<std::size_t>(coeffs_.size()) != table_->size()) {
    throw Error(ErrorCode::DimMismatch, "SymmetricState needs " + std::to_string(table_->size()) +
                                            " coefficients, got " + std::to_string(coeffs_.size()));
  }
  if (normalized_ && std::abs(coeffs_.squaredNorm() - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::InvalidArgument, "SymmetricState marked normalized but squared norm is " +
                                                std::to_string(coeffs_.squaredNorm()));
  }
  nonneg_ = all_nonneg(coeffs_);
}

SymmetricState make_ghz(int n, int d) {
  if (n < 2 || d < 2) throw Error(ErrorCode::InvalidArgument, "make_ghz needs n >= 2 and d >= 2");
  CompositionTable table(n, d);
  CVector coeffs = CVector::Zero(static_cast<Eigen::Index>(table.size()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) {
    Composition c{std::vector<int>(static_cast<std::size_t>(d), 0)};
    c.counts[static_cast<std::size_t>(i)] = n;
    coeffs[static_cast<Eigen::Index>(table.index_of(c))] = amp;
  }
  return SymmetricState(n, d, std::move(coeffs), true);
}

SymmetricState make_dicke(int n, int k) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "make_dicke needs n >= 2");
  if (k < 0 || k > n) {
    throw Error(ErrorCode::InvalidArgument,
                "make_dicke: k = " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
  }
  CVector coeffs = CVector::Zero(n + 1);
  coeffs[k] = 1.0;
  return SymmetricState(n, 2, std::move(coeffs), true);
}

DenseState dicke_to_dense(const SymmetricState& s) {
  const auto& table = s.table();
  const std::size_t total = checked_power(s.d(), s.n());
  CVector amps(static_cast<Eigen::Index>(total));
  std::vector<int> multi(static_cast<std::size_t>(s.n()), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const std::size_t c = table.index_of_multi(multi);
    amps[static_cast<Eigen::Index>(flat)] =
        s.coeffs()[static_cast<Eigen::Index>(c)] / std::sqrt(table.multinomial(c));
    for (int p = s.n() - 1; p >= 0; --p) {
      if (++multi[static_cast<std::size_t>(p)] < s.d()) break;
      multi[static_cast<std::size_t>(p)] = 0;
    }
  }
  // Rounding in 1/sqrt(multinomial) can push the norm a few ulps off; the
  // isometry is exact in real arithmetic so the flag carries over.
  return DenseState(s.n(), s.d(), std::move(amps), s.normalized());
}

namespace {

struct ClassSums {
  std::vector<Scalar> sum;
  std::vector<Scalar> first;
  std::vector<double> spread;
  std::vector<bool> seen;
};

ClassSums accumulate_classes(const DenseState& psi, const CompositionTable& table) {
  ClassSums acc{std::vector<Scalar>(table.size()), std::vector<Scalar>(table.size()),
                std::vector<double>(table.size(), 0.0), std::vector<bool>(table.size(), false)};
  std::vector<int> multi(static_cast<std::size_t>(psi.n()), 0);
  for (Eigen::Index flat = 0; flat < psi.amps().size(); ++flat) {
    const std::size_t c = table.index_of_multi(multi);
    const Scalar a = psi.amps()[flat];
    acc.sum[c] += a;
    if (!acc.seen[c]) {
      acc.first[c] = a;
      acc.seen[c] = true;
    } else {
      acc.spread[c] = std::max(acc.spread[c], std::abs(a - acc.first[c]));
    }
    for (int p = psi.n() - 1; p >= 0; --p) {
      if (++multi[static_cast<std::size_t>(p)] < psi.d()) break;
      multi[static_cast<std::size_t>(p)] = 0;
    }
  }
  return acc;
}

}  // namespace

SymmetricState dense_to_dicke(const DenseState& psi, double tol) {
  CompositionTable table(psi.n(), psi.d());
  const ClassSums acc = accumulate_classes(psi, table);
  CVector coeffs(static_cast<Eigen::Index>(table.size()));
  for (std::size_t c = 0; c < table.size(); ++c) {
    if (acc.spread[c] > tol) {
      std::string label;
      for (int k : table[c].counts) label += (label.empty() ? "" : ",") + std::to_string(k);
      throw Error(ErrorCode::NotSymmetric, "amplitudes in type class (" + label + ") differ by " +
                                               std::to_string(acc.spread[c]));
    }
    const double m = table.multinomial(c);
    coeffs[static_cast<Eigen::Index>(c)] = acc.sum[c] / m * std::sqrt(m);
  }
  return SymmetricState(psi.n(), psi.d(), std::move(coeffs), psi.normalized());
}

SymmetricState project_symmetric(const DenseState& psi) {
  CompositionTable table(psi.n(), psi.d());
  const ClassSums acc = accumulate_classes(psi, table);
  CVector coeffs(static_cast<Eigen::Index>(table.size()));
  for (std::size_t c = 0; c < table.size(); ++c) {
    coeffs[static_cast<Eigen::Index>(c)] = acc.sum[c] / std::sqrt(table.multinomial(c));
  }
  return SymmetricState(psi.n(), psi.d(), std::move(coeffs), false);
}

SymmetricState random_nonneg_symmetric(int n, int d, std::uint64_t seed) {
  const auto size = static_cast<Eigen::Index>(symmetric_dimension(n, d));
  Rng rng(seed);
  CVector coeffs(size);
  for (Eigen::Index i = 0; i < size; ++i) coeffs[i] = rng.uniform01();
  const double norm = coeffs.norm();
  if (!(norm > 0.0)) coeffs[0] = 1.0;  // all-zero draw; probability ~0
  coeffs /= coeffs.norm();
  return SymmetricState(n, d, std::move(coeffs), true);
}

DenseState random_nonneg_dense(int n, int d, std::uint64_t seed) {
  const auto size = static_cast<Eigen::Index>(checked_power(d, n));
  Rng rng(seed);
  CVector amps(size);
  for (Eigen::Index i = 0; i < size; ++i) amps[i] = rng.uniform01();
  if (!(amps.norm() > 0.0)) amps[0] = 1.0;
  amps /= amps.norm();
  return DenseState(n, d, std::move(amps), true);
}

DenseState make_translation_ghz(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "make_translation_ghz needs n >= 2");
  const std::size_t total = checked_power(2, n);
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(total));
  std::size_t a = 0;
  for (int p = 0; p < n; ++p) a = (a << 1) | static_cast<std::size_t>(p % 2);
  const std::size_t b = (total - 1) ^ a;
  amps[static_cast<Eigen::Index>(a)] = 1.0 / std::sqrt(2.0);
  amps[static_cast<Eigen::Index>(b)] = 1.0 / std::sqrt(2.0);
  return DenseState(n, 2, std::move(amps), true);
}

}  // namespace symgeo
