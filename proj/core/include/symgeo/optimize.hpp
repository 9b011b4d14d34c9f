#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symgeo/symstate.hpp"

namespace symgeo {

/// Grid over single-party unit vectors in hyperspherical coordinates:
///   x_0 = cos t_1, x_1 = sin t_1 cos t_2, ..., x_{d-1} = sin t_1 ... sin t_{d-1}
/// with each t_j taking `resolution` evenly spaced values on [0, pi/2] (the
/// first orthant, i.e. exactly the non-negative unit vectors). With
/// complex_phases, components 1..d-1 also get a phase from `resolution`
/// evenly spaced values on [0, 2 pi); component 0 stays real since a global
/// phase per party does not change |<Phi|psi>|.
struct GridSpec {
  int resolution = 9;
  bool complex_phases = false;
  bool refine = true;
  /// Number of best grid points (value desc, grid index asc) to refine.
  int refine_top = 1;
  /// Upper bound on grid evaluations; larger searches raise BudgetExceeded.
  double budget = 6.0e7;
  int workers = 1;
  double refine_tol = 1e-10;
  int refine_max_iter = 10000;
};

/// Candidate single-party vectors of a grid, in grid-index order (angles
/// before phases, earlier coordinates more significant).
std::vector<UnitVector> grid_vectors(int d, const GridSpec& g);

/// Grid-parameter vector (angles then phases) mapped to a unit vector.
UnitVector vector_from_angles(int d, const std::vector<double>& params, bool complex_phases);

struct OptimizerReport {
  std::string method;
  /// Best |<Phi|psi>| found.
  double lambda = 0.0;
  std::variant<UnitVector, ProductState> maximizer = UnitVector::basis(1, 0);
  int iterations = 0;
  bool converged = false;
  /// Per-iteration objective values, when the method records them.
  std::vector<double> trace;
};

/// Exhaustive maximization of |<Phi|psi>| over product states on the grid,
/// followed by als_refine from the best refine_top grid points when
/// g.refine. Ties go to the lowest grid index, identically for any worker
/// count. Throws BudgetExceeded when (#grid vectors)^n > g.budget.
OptimizerReport grid_search_product(const DenseState& psi, const GridSpec& g);

/// Maximization of |<phi|^n|s>| over one vector on the grid, then a
/// per-coordinate golden-section polish of the grid parameters when
/// g.refine. Throws BudgetExceeded when #grid vectors > g.budget.
OptimizerReport grid_search_symmetric(const SymmetricState& s, const GridSpec& g);

/// Cyclic single-party updates: party p becomes the normalized contraction
/// of psi with every other party, the exact optimum for p with the rest
/// fixed. The objective is non-decreasing (checked, std::logic_error on a
/// violation beyond 1e-12). Stops once a sweep improves by less than tol;
/// `iterations` counts sweeps that did improve.
OptimizerReport als_refine(const DenseState& psi, const ProductState& init, double tol = 1e-10,
                           int max_iter = 10000);

/// Shifted symmetric power method: phi <- normalize(g + alpha phi) with
/// g = gradient_contract(s, phi). alpha is the max absolute row sum of the
/// matricized state for n = 2 (which makes the iteration identical to
/// pf_power_iteration) and (n-1)||s|| otherwise, which makes the objective
/// monotone. Stops when ||g - lambda phi|| <= tol. A vanishing gradient
/// (||g|| < 1e-14) restarts from the uniform vector plus seed-derived jitter.
OptimizerReport shopm(const SymmetricState& s, const UnitVector& init, double tol = 1e-12, int max_iter = 100000,
                      std::uint64_t seed = 0);

/// Uniform vector plus per-component jitter in [0, 0.5), normalized.
UnitVector jittered_uniform(int d, std::uint64_t seed);

/// shopm from the uniform vector and from starts-1 random non-negative
/// vectors drawn from seed; the best lambda wins, lowest start index on ties.
OptimizerReport multistart_shopm(const SymmetricState& s, int starts, std::uint64_t seed, double tol = 1e-12,
                                 int max_iter = 100000, int workers = 1);

struct SymmetrizationStep {
  int i = 0;
  /// Pair averaged to go from step i to i+1; empty on the final record.
  std::optional<std::pair<int, int>> pair;
  double theta = 0.0;
  double overlap = 0.0;
};

struct SymmetrizationTrace {
  std::vector<SymmetrizationStep> steps;
  double theta0 = 0.0;
  /// Cluster-halving period floor(n/2).
  int f = 0;
  std::vector<std::string> warnings;
};

struct SymmetrizeResult {
  UnitVector limit;
  ProductState final_state;
  SymmetrizationTrace trace;
  bool converged = false;
};

/// Angle between two unit vectors, 2 atan2(||u - v||, ||u + v||).
double angle_between(const UnitVector& u, const UnitVector& v);

/// Pairwise averaging of a product state. Each step picks the pair with the
/// least inner product (lowest (alpha, beta) on ties), replaces both by
/// their normalized sum, and records theta_i (largest pairwise angle) and
/// |<Phi_i|psi>|. Stops once theta_i < tol_theta. The limit is the
/// normalized mean of the final parties. Non-negativity of init or psi is
/// not enforced; violations are recorded as warnings.
SymmetrizeResult symmetrize(const ProductState& init, const DenseState& psi, double tol_theta = 1e-12,
                            int max_iter = 10000);

/// -log2(lambda^2). lambda in (1, 1 + 1e-12] is clamped to 1. Throws
/// NonPositiveLambda for lambda <= 0 and InvalidArgument above the clamp.
double geometric_measure(double lambda);

enum class EgMethod { SymmetricGrid, Shopm, MultistartShopm };

std::string to_string(EgMethod m);
/// Accepts "symmetric_grid", "shopm", "multistart_shopm".
EgMethod parse_eg_method(const std::string& name);

struct EgParams {
  GridSpec grid;
  double tol = 1e-12;
  int max_iter = 100000;
  int starts = 8;
  std::uint64_t seed = 0;
  /// Run even if the state has negative or complex coefficients.
  bool force = false;
  int workers = 1;
};

struct EgReport {
  OptimizerReport optimizer;
  double lambda = 0.0;
  double lambda_sq = 0.0;
  double eg = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// Maximizes over symmetric product states only, then applies
/// geometric_measure. Throws NotNonnegative for states outside the
/// non-negative class unless params.force.
EgReport compute_eg(const SymmetricState& s, EgMethod method, const EgParams& params);

}  // namespace symgeo
