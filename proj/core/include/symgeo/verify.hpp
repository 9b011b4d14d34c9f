#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "symgeo/optimize.hpp"
#include "symgeo/symstate.hpp"

namespace symgeo {

struct InstanceRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string label;
  /// Named values in insertion order.
  std::vector<std::pair<std::string, double>> values;
  double discrepancy = 0.0;
  /// Unasserted records are informational and never affect `passed`.
  bool asserted = true;
  std::string note;

  double value(const std::string& key) const;
};

struct VerificationReport {
  std::string check;
  std::uint64_t instances = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<InstanceRecord> records;
  std::vector<std::string> notes;

  /// Sets worst/passed from the asserted records: fail iff worst > tolerance.
  void finalize();
};

/// Default coarse grid for the unrestricted product oracle: resolution 8,
/// complex phases, refine the best 4 grid points with ALS.
GridSpec default_product_grid();
/// Default symmetric grid: resolution 33 on the non-negative orthant, polished.
GridSpec default_symmetric_grid();

struct RestrictionValues {
  double lambda_full = 0.0;     ///< complex-phase product grid + ALS
  double lambda_sym_grid = 0.0; ///< symmetric grid + polish
  double lambda_shopm = 0.0;    ///< shopm started at the polished point
  double lambda_sym = 0.0;      ///< max of the two symmetric values
  bool symmetric = true;        ///< psi passed dense_to_dicke's check
};

/// Both sides of the symmetric-restriction equality for one state. A
/// non-symmetric psi is searched over symmetric products through its
/// symmetric projection, which gives the same overlaps.
RestrictionValues restriction_values(const DenseState& psi, const GridSpec& product_grid, const GridSpec& symmetric_grid);

/// Random non-negative symmetric states; asserts |lambda_sym - lambda_full|
/// <= 1e-6 per instance. `coarse` is the product oracle grid and its
/// `workers` parallelize across instances. BudgetExceeded when the complex
/// grid would be too large (by default anything beyond n = 4, d = 2).
VerificationReport check_symmetric_restriction(int n, int d, int num_instances, std::uint64_t seed,
                                  const GridSpec& coarse = default_product_grid());

/// Top eigenvalue (pf_power_iteration) vs largest singular value vs the
/// grid-refined bilinear sup over non-negative unit pairs, for random
/// non-negative symmetric matrices with d cycling through [d_min, d_max].
/// Tolerance 1e-7.
VerificationReport check_bilinear_sup(int d_min, int d_max, int num_instances, std::uint64_t seed, int workers = 1);

/// Optimal non-negative pair (u*, v*) of the bilinear form by grid plus
/// alternating refinement, then residuals of M w = lambda1 w at
/// w = average_pair(u*, v*), M v* = lambda1 u* and M u* = lambda1 v*.
/// Odd instances use bipartite matrices [[0, B], [B^T, 0]] so that u* != v*
/// actually occurs. Tolerance 1e-8.
VerificationReport check_averaged_eigenvector(int d_min, int d_max, int num_instances, std::uint64_t seed, int workers = 1);

/// Result of the bilinear oracle used by check_averaged_eigenvector.
struct BilinearOptimum {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double value = 0.0;
  int iterations = 0;
};

/// Maximizes u^T M v over non-negative unit vectors: coarse product grid,
/// then alternating updates until both residuals are <= 1e-13 * value.
BilinearOptimum bilinear_optimum(const Eigen::MatrixXd& m);

/// Runs the averaged-eigenvector residual check on one matrix and returns its record.
InstanceRecord averaged_eigenvector_instance(const Eigen::MatrixXd& m);

/// (|0101> + |1010>)/sqrt(2): unrestricted lambda^2 vs symmetric-restricted
/// lambda^2; passes iff the gap is at least 0.3.
VerificationReport negative_control_translation(const GridSpec& coarse = default_product_grid());

/// Random non-negative dense states: complex-phase grid max vs non-negative
/// grid max, coarse (tolerance 1e-4) and refined (tolerance 1e-6). Also
/// appends an unasserted record for (|00> - |11>)/sqrt(2).
VerificationReport check_phase_freedom(int n, int d, int num_instances, std::uint64_t seed, int workers = 1);

}  // namespace symgeo
