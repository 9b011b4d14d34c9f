#include "symgeo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>

#include "symgeo/contract.hpp"
#include "symgeo/error.hpp"
#include "symgeo/parallel.hpp"
#include "symgeo/rng.hpp"
#include "symgeo/spectral.hpp"

namespace symgeo {

double InstanceRecord::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "record has no value \"" + key + "\"");
}

void VerificationReport::finalize() {
  worst = 0.0;
  passed = true;
  for (const auto& r : records) {
    if (!r.asserted) continue;
    if (std::isnan(r.discrepancy)) {
      passed = false;
      continue;
    }
    worst = std::max(worst, r.discrepancy);
  }
  passed = passed && worst <= tolerance;
}

GridSpec default_product_grid() {
  GridSpec g;
  g.resolution = 8;
  g.complex_phases = true;
  g.refine = true;
  g.refine_top = 4;
  g.refine_tol = 1e-13;
  return g;
}

GridSpec default_symmetric_grid() {
  GridSpec g;
  g.resolution = 33;
  g.complex_phases = false;
  g.refine = true;
  g.refine_tol = 1e-15;
  return g;
}

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

RestrictionValues restriction_values(const DenseState& psi, const GridSpec& product_grid, const GridSpec& symmetric_grid) {
  RestrictionValues out;
  std::optional<SymmetricState> sym;
  try {
    sym = dense_to_dicke(psi, 1e-12);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotSymmetric) throw;
    out.symmetric = false;
    sym = project_symmetric(psi);
  }

  GridSpec pg = product_grid;
  pg.workers = 1;
  out.lambda_full = grid_search_product(psi, pg).lambda;

  GridSpec sg = symmetric_grid;
  sg.workers = 1;
  const OptimizerReport grid = grid_search_symmetric(*sym, sg);
  out.lambda_sym_grid = grid.lambda;
  const auto& start = std::get<UnitVector>(grid.maximizer);
  out.lambda_shopm = shopm(*sym, start, 1e-13, 200000).lambda;
  out.lambda_sym = std::max(out.lambda_sym_grid, out.lambda_shopm);
  return out;
}

VerificationReport check_symmetric_restriction(int n, int d, int num_instances, std::uint64_t seed, const GridSpec& coarse) {
  VerificationReport report;
  report.check = "symmetric_restriction";
  report.tolerance = 1e-6;
  report.instances = static_cast<std::uint64_t>(num_instances);
  report.parameters = {{"n", std::to_string(n)},
                       {"d", std::to_string(d)},
                       {"instances", std::to_string(num_instances)},
                       {"seed", std::to_string(seed)},
                       {"product_grid_resolution", std::to_string(coarse.resolution)},
                       {"product_grid_complex", coarse.complex_phases ? "true" : "false"},
                       {"product_grid_refine_top", std::to_string(coarse.refine_top)}};
  // Budget guard before any instance work.
  const double evaluations =
      std::pow(std::pow(static_cast<double>(coarse.resolution), (d - 1) * (coarse.complex_phases ? 2 : 1)), n);
  if (evaluations > coarse.budget) {
    throw Error(ErrorCode::BudgetExceeded, "product oracle needs " + fmt(evaluations) + " grid evaluations");
  }

  report.records.resize(static_cast<std::size_t>(num_instances));
  const GridSpec sym_grid = default_symmetric_grid();
  parallel_for(report.records.size(), coarse.workers, [&](std::size_t i) {
    const std::uint64_t inst_seed = derive_seed(seed, i);
    const SymmetricState s = random_nonneg_symmetric(n, d, inst_seed);
    const RestrictionValues v = restriction_values(dicke_to_dense(s), coarse, sym_grid);
    InstanceRecord& r = report.records[i];
    r.index = i;
    r.seed = inst_seed;
    r.values = {{"lambda_full", v.lambda_full},
                {"lambda_sym_grid", v.lambda_sym_grid},
                {"lambda_shopm", v.lambda_shopm},
                {"lambda_sym", v.lambda_sym}};
    r.discrepancy = std::abs(v.lambda_sym - v.lambda_full);
    if (v.lambda_full > v.lambda_sym + report.tolerance) {
      r.note = "product optimum exceeds symmetric optimum";
    }
  });
  report.finalize();
  return report;
}

namespace {

Eigen::MatrixXd random_nonneg_symmetric_matrix(int d, std::uint64_t seed) {
  return real_matrix(matricize(dicke_to_dense(random_nonneg_symmetric(2, d, seed))));
}

Eigen::MatrixXd random_bipartite_matrix(int d, std::uint64_t seed) {
  const int p = std::max(1, d / 2);
  const int q = d - p;
  Rng rng(seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < q; ++j) {
      const double x = rng.uniform01();
      m(i, p + j) = x;
      m(p + j, i) = x;
    }
  }
  return m;
}

DenseState matrix_state(const Eigen::MatrixXd& m) {
  const auto d = static_cast<int>(m.rows());
  CVector amps(d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) amps[i * d + j] = m(i, j);
  }
  return DenseState(2, d, std::move(amps), false);
}

// Grid resolution keeping a non-negative bilinear grid under ~2e6 points.
int bilinear_resolution(int d) {
  const double per_party = std::sqrt(2.0e6);
  const int res = static_cast<int>(std::floor(std::pow(per_party, 1.0 / static_cast<double>(d - 1))));
  return std::clamp(res, 2, 9);
}

Eigen::VectorXd real_entries(const UnitVector& u) { return u.entries().real(); }

}  // namespace

VerificationReport check_bilinear_sup(int d_min, int d_max, int num_instances, std::uint64_t seed, int workers) {
  if (d_min < 2 || d_max < d_min) throw Error(ErrorCode::InvalidArgument, "check_bilinear_sup needs 2 <= d_min <= d_max");
  VerificationReport report;
  report.check = "bilinear_sup";
  report.tolerance = 1e-7;
  report.instances = static_cast<std::uint64_t>(num_instances);
  report.parameters = {{"d_min", std::to_string(d_min)},
                       {"d_max", std::to_string(d_max)},
                       {"instances", std::to_string(num_instances)},
                       {"seed", std::to_string(seed)}};
  report.records.resize(static_cast<std::size_t>(num_instances));
  const int span = d_max - d_min + 1;
  parallel_for(report.records.size(), workers, [&](std::size_t i) {
    const int d = d_min + static_cast<int>(i % static_cast<std::size_t>(span));
    const std::uint64_t inst_seed = derive_seed(seed, i);
    const Eigen::MatrixXd m = random_nonneg_symmetric_matrix(d, inst_seed);

    const SpectralResult pf = pf_power_iteration(m);
    const double sigma = largest_singular_value(m);
    GridSpec g;
    g.resolution = bilinear_resolution(d);
    g.refine = true;
    g.refine_top = 1;
    g.refine_tol = 1e-15;
    g.refine_max_iter = 100000;
    const double bilinear = grid_search_product(matrix_state(m), g).lambda;

    InstanceRecord& r = report.records[i];
    r.index = i;
    r.seed = inst_seed;
    r.label = "d=" + std::to_string(d);
    r.values = {{"d", static_cast<double>(d)}, {"lambda1", pf.lambda1}, {"sigma_max", sigma}, {"bilinear_sup", bilinear}};
    r.discrepancy = std::max({std::abs(pf.lambda1 - sigma), std::abs(pf.lambda1 - bilinear), std::abs(sigma - bilinear)});
    if (!pf.converged) {
      r.note = "pf_power_iteration did not converge";
      r.discrepancy = std::max(r.discrepancy, pf.residual);
    }
  });
  report.finalize();
  return report;
}

BilinearOptimum bilinear_optimum(const Eigen::MatrixXd& m) {
  const auto d = static_cast<int>(m.rows());
  GridSpec g;
  g.resolution = bilinear_resolution(d);
  g.refine = false;
  const OptimizerReport coarse = grid_search_product(matrix_state(m), g);
  const auto& pair = std::get<ProductState>(coarse.maximizer);
  // The grid maximizes u^dagger M v; with u, v real this is u^T M v.
  Eigen::VectorXd u = real_entries(pair[0]);
  Eigen::VectorXd v = real_entries(pair[1]);

  BilinearOptimum out;
  for (int it = 0; it < 1000000; ++it) {
    const double value = u.dot(m * v);
    const double r1 = (m * v - value * u).norm();
    const double r2 = (m.transpose() * u - value * v).norm();
    out.iterations = it;
    if (value > 0.0 && r1 <= 1e-13 * value && r2 <= 1e-13 * value) break;
    const Eigen::VectorXd mv = m * v;
    if (mv.norm() > 0.0) u = mv / mv.norm();
    const Eigen::VectorXd mtu = m.transpose() * u;
    if (mtu.norm() > 0.0) v = mtu / mtu.norm();
  }
  out.u = u;
  out.v = v;
  out.value = u.dot(m * v);
  return out;
}

InstanceRecord averaged_eigenvector_instance(const Eigen::MatrixXd& m) {
  const SpectralResult pf = pf_power_iteration(m);
  const BilinearOptimum opt = bilinear_optimum(m);
  const UnitVector u = UnitVector::normalize(std::span<const double>(opt.u.data(), static_cast<std::size_t>(opt.u.size())));
  const UnitVector v = UnitVector::normalize(std::span<const double>(opt.v.data(), static_cast<std::size_t>(opt.v.size())));
  const Eigen::VectorXd w = real_entries(average_pair(u, v));
  const double lambda1 = pf.lambda1;

  InstanceRecord r;
  const double res_w = (m * w - lambda1 * w).norm();
  const double res_vu = (m * opt.v - lambda1 * opt.u).norm();
  const double res_uv = (m * opt.u - lambda1 * opt.v).norm();
  r.values = {{"lambda1", lambda1},
              {"bilinear_value", opt.value},
              {"residual_w", res_w},
              {"residual_Mv_minus_lambda_u", res_vu},
              {"residual_Mu_minus_lambda_v", res_uv},
              {"u_v_distance", (opt.u - opt.v).norm()}};
  r.discrepancy = std::max({res_w, res_vu, res_uv});
  if (std::abs(opt.value - lambda1) > 1e-10) r.note = "bilinear optimum differs from lambda1 by more than 1e-10";
  return r;
}

VerificationReport check_averaged_eigenvector(int d_min, int d_max, int num_instances, std::uint64_t seed, int workers) {
  if (d_min < 2 || d_max < d_min) throw Error(ErrorCode::InvalidArgument, "check_averaged_eigenvector needs 2 <= d_min <= d_max");
  VerificationReport report;
  report.check = "averaged_eigenvector";
  report.tolerance = 1e-8;
  report.instances = static_cast<std::uint64_t>(num_instances);
  report.parameters = {{"d_min", std::to_string(d_min)},
                       {"d_max", std::to_string(d_max)},
                       {"instances", std::to_string(num_instances)},
                       {"seed", std::to_string(seed)}};
  report.records.resize(static_cast<std::size_t>(num_instances));
  const int span = d_max - d_min + 1;
  parallel_for(report.records.size(), workers, [&](std::size_t i) {
    const int d = d_min + static_cast<int>((i / 2) % static_cast<std::size_t>(span));
    const std::uint64_t inst_seed = derive_seed(seed, i);
    const bool bipartite = i % 2 == 1;
    const Eigen::MatrixXd m = bipartite ? random_bipartite_matrix(d, inst_seed) : random_nonneg_symmetric_matrix(d, inst_seed);
    InstanceRecord r = averaged_eigenvector_instance(m);
    r.index = i;
    r.seed = inst_seed;
    r.label = std::string(bipartite ? "bipartite" : "dense") + " d=" + std::to_string(d);
    report.records[i] = std::move(r);
  });
  report.finalize();
  return report;
}

VerificationReport negative_control_translation(const GridSpec& coarse) {
  VerificationReport report;
  report.check = "negative_control";
  report.instances = 1;
  report.tolerance = 0.0;
  report.parameters = {{"n", "4"},
                       {"state", "(|0101>+|1010>)/sqrt(2)"},
                       {"product_grid_resolution", std::to_string(coarse.resolution)},
                       {"required_gap", "0.3"}};
  const DenseState psi = make_translation_ghz(4);
  const RestrictionValues v = restriction_values(psi, coarse, default_symmetric_grid());
  const double full_sq = v.lambda_full * v.lambda_full;
  const double sym_sq = v.lambda_sym * v.lambda_sym;

  InstanceRecord r;
  r.label = "translation_ghz_4";
  r.values = {{"lambda_full_sq", full_sq}, {"lambda_sym_sq", sym_sq}, {"gap", full_sq - sym_sq}};
  // Positive once the gap falls short of 0.3.
  r.discrepancy = 0.3 - (full_sq - sym_sq);
  r.note = v.symmetric ? "state unexpectedly passed the permutation-symmetry check"
                       : "state fails the permutation-symmetry check (NotSymmetric)";
  report.records.push_back(r);
  report.notes.push_back("symmetric restriction underestimates the product optimum when permutation symmetry is absent");
  report.finalize();
  return report;
}

VerificationReport check_phase_freedom(int n, int d, int num_instances, std::uint64_t seed, int workers) {
  VerificationReport report;
  report.check = "phase_freedom";
  report.tolerance = 1e-6;
  report.instances = static_cast<std::uint64_t>(num_instances);
  report.parameters = {{"n", std::to_string(n)},
                       {"d", std::to_string(d)},
                       {"instances", std::to_string(num_instances)},
                       {"seed", std::to_string(seed)},
                       {"coarse_tolerance", "0.0001"}};

  GridSpec complex_grid = default_product_grid();
  complex_grid.workers = 1;
  GridSpec nonneg_grid = complex_grid;
  nonneg_grid.complex_phases = false;

  auto evaluate = [&](const DenseState& psi, InstanceRecord& r) {
    GridSpec cc = complex_grid, nc = nonneg_grid;
    cc.refine = nc.refine = false;
    const double coarse_complex = grid_search_product(psi, cc).lambda;
    const double coarse_nonneg = grid_search_product(psi, nc).lambda;
    const double refined_complex = grid_search_product(psi, complex_grid).lambda;
    const double refined_nonneg = grid_search_product(psi, nonneg_grid).lambda;
    r.values = {{"coarse_complex", coarse_complex},
                {"coarse_nonneg", coarse_nonneg},
                {"refined_complex", refined_complex},
                {"refined_nonneg", refined_nonneg}};
    const double coarse_gap = std::abs(coarse_complex - coarse_nonneg);
    r.discrepancy = std::abs(refined_complex - refined_nonneg);
    // Coarse agreement has its own looser bound; fold a violation into the
    // asserted discrepancy so the report fails.
    if (coarse_gap > 1e-4) r.discrepancy = std::max(r.discrepancy, coarse_gap);
  };

  report.records.resize(static_cast<std::size_t>(num_instances));
  parallel_for(report.records.size(), workers, [&](std::size_t i) {
    const std::uint64_t inst_seed = derive_seed(seed, i);
    InstanceRecord& r = report.records[i];
    r.index = i;
    r.seed = inst_seed;
    evaluate(random_nonneg_dense(n, d, inst_seed), r);
  });

  CVector signed_amps = CVector::Zero(4);
  signed_amps[0] = 1.0 / std::sqrt(2.0);
  signed_amps[3] = -1.0 / std::sqrt(2.0);
  InstanceRecord extra;
  extra.index = static_cast<std::uint64_t>(num_instances);
  extra.label = "(|00>-|11>)/sqrt(2)";
  evaluate(DenseState(2, 2, std::move(signed_amps), true), extra);
  extra.asserted = false;
  extra.note = "negative amplitude: hypothesis unmet, not asserted";
  report.records.push_back(std::move(extra));

  report.finalize();
  return report;
}

}  // namespace symgeo
