#include "symgeo/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "symgeo/contract.hpp"
#include "symgeo/error.hpp"
#include "symgeo/parallel.hpp"
#include "symgeo/rng.hpp"
#include "symgeo/spectral.hpp"

namespace symgeo {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int params_per_party(int d, bool complex_phases) { return (d - 1) * (complex_phases ? 2 : 1); }

double grid_count(int d, const GridSpec& g) {
  return std::pow(static_cast<double>(g.resolution), params_per_party(d, g.complex_phases));
}

void validate(const GridSpec& g) {
  if (g.resolution < 2) throw Error(ErrorCode::InvalidArgument, "grid resolution must be >= 2");
  if (g.refine_top < 1) throw Error(ErrorCode::InvalidArgument, "refine_top must be >= 1");
}

std::vector<double> grid_params(int d, const GridSpec& g, std::size_t index) {
  const int count = params_per_party(d, g.complex_phases);
  std::vector<double> out(static_cast<std::size_t>(count));
  const auto res = static_cast<std::size_t>(g.resolution);
  for (int k = count - 1; k >= 0; --k) {
    const auto step = static_cast<double>(index % res);
    index /= res;
    out[static_cast<std::size_t>(k)] = k < d - 1 ? step * kHalfPi / static_cast<double>(g.resolution - 1)
                                                 : step * kTwoPi / static_cast<double>(g.resolution);
  }
  return out;
}

// A grid hit: objective value and its multi-party grid index.
struct Hit {
  double value;
  std::vector<std::size_t> index;
};

// Strict "better than": larger value, then lexicographically smaller index.
bool better(const Hit& a, const Hit& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.index < b.index;
}

class TopK {
public:
  explicit TopK(std::size_t k) : k_(k) {}

  bool admits(double value) const { return hits_.size() < k_ || value >= hits_.back().value; }

  void offer(Hit h) {
    if (hits_.size() == k_ && !better(h, hits_.back())) return;
    auto pos = std::lower_bound(hits_.begin(), hits_.end(), h, better);
    hits_.insert(pos, std::move(h));
    if (hits_.size() > k_) hits_.pop_back();
  }

  const std::vector<Hit>& hits() const { return hits_; }

private:
  std::size_t k_;
  std::vector<Hit> hits_;
};

struct ProductGridContext {
  const Eigen::MatrixXcd* conj_grid;  // G x d, row k = conj(candidate k)
  int n;
  int d;
};

// Contracts candidate `k` into the leading party of `t`.
CVector contract_leading(const CVector& t, const Eigen::MatrixXcd& conj_grid, Eigen::Index k, int d) {
  const Eigen::Index inner = t.size() / d;
  CVector out = CVector::Zero(inner);
  for (int i = 0; i < d; ++i) {
    const Scalar w = conj_grid(k, i);
    if (w == Scalar(0.0)) continue;
    out += w * t.segment(i * inner, inner);
  }
  return out;
}

void search_subtree(const ProductGridContext& ctx, const CVector& t, std::vector<std::size_t>& prefix, TopK& top) {
  const auto& grid = *ctx.conj_grid;
  if (t.size() == ctx.d) {
    const CVector values = grid * t;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      const double v = std::abs(values[k]);
      if (!top.admits(v)) continue;
      prefix.push_back(static_cast<std::size_t>(k));
      top.offer(Hit{v, prefix});
      prefix.pop_back();
    }
    return;
  }
  for (Eigen::Index k = 0; k < grid.rows(); ++k) {
    prefix.push_back(static_cast<std::size_t>(k));
    search_subtree(ctx, contract_leading(t, grid, k, ctx.d), prefix, top);
    prefix.pop_back();
  }
}

std::vector<UnitVector> mutable_parties(const ProductState& p) { return p.parties(); }

}  // namespace

UnitVector vector_from_angles(int d, const std::vector<double>& params, bool complex_phases) {
  CVector v(d);
  double sin_prod = 1.0;
  for (int j = 0; j < d - 1; ++j) {
    const double t = params[static_cast<std::size_t>(j)];
    v[j] = sin_prod * std::cos(t);
    sin_prod *= std::sin(t);
  }
  v[d - 1] = sin_prod;
  if (complex_phases) {
    for (int j = 1; j < d; ++j) v[j] *= std::polar(1.0, params[static_cast<std::size_t>(d - 1 + j - 1)]);
  }
  // cos^2 + sin^2 rounding; renormalizing keeps the UnitVector check exact.
  v /= v.norm();
  return UnitVector(std::move(v));
}

std::vector<UnitVector> grid_vectors(int d, const GridSpec& g) {
  validate(g);
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  const double count = grid_count(d, g);
  if (count > g.budget) throw Error(ErrorCode::BudgetExceeded, "single-party grid exceeds budget");
  std::vector<UnitVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    out.push_back(vector_from_angles(d, grid_params(d, g, i), g.complex_phases));
  }
  return out;
}

OptimizerReport grid_search_product(const DenseState& psi, const GridSpec& g) {
  validate(g);
  if (psi.n() < 2) throw Error(ErrorCode::InvalidArgument, "grid_search_product needs n >= 2");
  const double evaluations = std::pow(grid_count(psi.d(), g), psi.n());
  if (evaluations > g.budget) {
    throw Error(ErrorCode::BudgetExceeded, "product grid needs " + std::to_string(evaluations) +
                                               " evaluations, budget is " + std::to_string(g.budget));
  }
  const auto candidates = grid_vectors(psi.d(), g);
  Eigen::MatrixXcd conj_grid(static_cast<Eigen::Index>(candidates.size()), psi.d());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    conj_grid.row(static_cast<Eigen::Index>(k)) = candidates[k].entries().conjugate().transpose();
  }
  const ProductGridContext ctx{&conj_grid, psi.n(), psi.d()};
  const auto top_k = static_cast<std::size_t>(g.refine ? g.refine_top : 1);

  std::vector<TopK> partial(candidates.size(), TopK(top_k));
  parallel_for(candidates.size(), g.workers, [&](std::size_t k) {
    std::vector<std::size_t> prefix{k};
    search_subtree(ctx, contract_leading(psi.amps(), conj_grid, static_cast<Eigen::Index>(k), psi.d()), prefix,
                   partial[k]);
  });
  TopK merged(top_k);
  for (const auto& p : partial) {
    for (const auto& h : p.hits()) merged.offer(h);
  }

  auto to_product = [&](const Hit& h) {
    std::vector<UnitVector> parties;
    for (std::size_t idx : h.index) parties.push_back(candidates[idx]);
    return ProductState(std::move(parties));
  };

  OptimizerReport best;
  best.method = "grid_search_product";
  const Hit& first = merged.hits().front();
  best.lambda = first.value;
  best.maximizer = to_product(first);
  best.converged = true;
  if (!g.refine) return best;

  bool have = false;
  for (const auto& h : merged.hits()) {
    OptimizerReport r = als_refine(psi, to_product(h), g.refine_tol, g.refine_max_iter);
    if (!have || r.lambda > best.lambda) {
      r.method = "grid_search_product+als";
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

namespace {

double sym_value(const SymmetricState& s, int d, const std::vector<double>& params, bool complex_phases) {
  return std::abs(symmetric_overlap(vector_from_angles(d, params, complex_phases), s));
}

// Maximizes f on [lo, hi], assuming unimodality near the optimum.
template <class F>
std::pair<double, double> golden_section(F&& f, double lo, double hi, double x0, double f0) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), dd = a + inv_phi * (b - a);
  double fc = f(c), fd = f(dd);
  for (int it = 0; it < 90 && (b - a) > 1e-15; ++it) {
    if (fc >= fd) {
      b = dd;
      dd = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = dd;
      fc = fd;
      dd = a + inv_phi * (b - a);
      fd = f(dd);
    }
  }
  double xbest = x0, fbest = f0;
  for (auto [x, fx] : {std::pair{c, fc}, std::pair{dd, fd}, std::pair{lo, f(lo)}, std::pair{hi, f(hi)}}) {
    if (fx > fbest) {
      xbest = x;
      fbest = fx;
    }
  }
  return {xbest, fbest};
}

}  // namespace

OptimizerReport grid_search_symmetric(const SymmetricState& s, const GridSpec& g) {
  validate(g);
  const int d = s.d();
  const double count = grid_count(d, g);
  if (count > g.budget) throw Error(ErrorCode::BudgetExceeded, "symmetric grid exceeds budget");
  const auto total = static_cast<std::size_t>(count);

  std::vector<double> values(total);
  parallel_for(total, g.workers, [&](std::size_t i) { values[i] = sym_value(s, d, grid_params(d, g, i), g.complex_phases); });
  std::size_t best_index = 0;
  for (std::size_t i = 1; i < total; ++i) {
    if (values[i] > values[best_index]) best_index = i;
  }

  OptimizerReport report;
  report.method = "grid_search_symmetric";
  std::vector<double> params = grid_params(d, g, best_index);
  double best = values[best_index];
  report.trace.push_back(best);
  report.converged = true;

  if (g.refine) {
    report.method = "grid_search_symmetric+polish";
    report.converged = false;
    const int angles = d - 1;
    const double angle_step = kHalfPi / static_cast<double>(g.resolution - 1);
    const double phase_step = kTwoPi / static_cast<double>(g.resolution);
    for (int cycle = 0; cycle < g.refine_max_iter; ++cycle) {
      const double before = best;
      for (std::size_t j = 0; j < params.size(); ++j) {
        const bool is_angle = static_cast<int>(j) < angles;
        const double h = is_angle ? angle_step : phase_step;
        double lo = params[j] - h, hi = params[j] + h;
        if (is_angle) {
          lo = std::max(lo, 0.0);
          hi = std::min(hi, kHalfPi);
        }
        auto f = [&](double x) {
          std::vector<double> trial = params;
          trial[j] = x;
          return sym_value(s, d, trial, g.complex_phases);
        };
        auto [x, fx] = golden_section(f, lo, hi, params[j], best);
        params[j] = x;
        best = fx;
      }
      report.trace.push_back(best);
      ++report.iterations;
      if (best - before < g.refine_tol) {
        report.converged = true;
        break;
      }
    }
  }
  report.lambda = best;
  report.maximizer = vector_from_angles(d, params, g.complex_phases);
  return report;
}

OptimizerReport als_refine(const DenseState& psi, const ProductState& init, double tol, int max_iter) {
  if (init.n() != psi.n() || init.d() != psi.d()) {
    throw Error(ErrorCode::DimMismatch, "als_refine: initial product state does not match the state");
  }
  std::vector<UnitVector> parties = mutable_parties(init);
  double value = std::abs(overlap(init, psi));

  OptimizerReport report;
  report.method = "als_refine";
  report.trace.push_back(value);
  for (int sweep = 0; sweep < max_iter; ++sweep) {
    const double before = value;
    for (int p = 0; p < psi.n(); ++p) {
      const CVector env = contract_all_but(psi, ProductState(parties), p);
      const double norm = env.norm();
      if (!(norm > 0.0)) continue;
      if (norm < value - 1e-12) throw std::logic_error("als_refine: objective decreased");
      parties[static_cast<std::size_t>(p)] = UnitVector(env / norm);
      value = std::max(value, norm);
    }
    report.trace.push_back(value);
    if (value - before < tol) {
      report.converged = true;
      break;
    }
    ++report.iterations;
  }
  ProductState result(std::move(parties));
  report.lambda = std::abs(overlap(result, psi));
  report.maximizer = std::move(result);
  return report;
}

UnitVector jittered_uniform(int d, std::uint64_t seed) {
  Rng rng(seed);
  CVector v(d);
  for (int i = 0; i < d; ++i) v[i] = 1.0 + 0.5 * rng.uniform01();
  return UnitVector::normalize(std::move(v));
}

OptimizerReport shopm(const SymmetricState& s, const UnitVector& init, double tol, int max_iter, std::uint64_t seed) {
  if (init.dim() != s.d()) throw Error(ErrorCode::DimMismatch, "shopm: init dim does not match the state");

  double shift = 0.0;
  if (s.n() == 2) {
    shift = matricize(dicke_to_dense(s)).cwiseAbs().rowwise().sum().maxCoeff();
  } else {
    shift = static_cast<double>(s.n() - 1) * std::sqrt(s.squared_norm());
  }

  OptimizerReport report;
  report.method = "shopm";
  CVector phi = init.entries();
  int restarts = 0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const CVector g = gradient_contract(s, UnitVector(phi));
    if (g.norm() < 1e-14) {
      if (restarts >= 16) break;
      phi = jittered_uniform(s.d(), derive_seed(seed, static_cast<std::uint64_t>(restarts++))).entries();
      continue;
    }
    const Scalar lambda = phi.dot(g);  // conjugates phi
    if ((g - lambda * phi).norm() <= tol) {
      report.converged = true;
      break;
    }
    CVector next = g + shift * phi;
    phi = next / next.norm();
  }
  const UnitVector fixed(phi / phi.norm());
  report.lambda = std::abs(symmetric_overlap(fixed, s));
  report.iterations = it;
  report.maximizer = fixed;
  return report;
}

OptimizerReport multistart_shopm(const SymmetricState& s, int starts, std::uint64_t seed, double tol, int max_iter,
                                 int workers) {
  if (starts < 1) throw Error(ErrorCode::InvalidArgument, "multistart_shopm needs starts >= 1");
  std::vector<std::optional<OptimizerReport>> runs(static_cast<std::size_t>(starts));
  parallel_for(runs.size(), workers, [&](std::size_t k) {
    UnitVector init = UnitVector::uniform(s.d());
    if (k > 0) {
      Rng rng(derive_seed(seed, 1000 + k));
      CVector v(s.d());
      for (int i = 0; i < s.d(); ++i) v[i] = rng.uniform01();
      if (v.norm() == 0.0) v[0] = 1.0;
      init = UnitVector::normalize(std::move(v));
    }
    runs[k] = shopm(s, init, tol, max_iter, derive_seed(seed, k));
  });
  std::size_t best = 0;
  int total_iterations = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    total_iterations += runs[k]->iterations;
    if (runs[k]->lambda > runs[best]->lambda) best = k;
  }
  OptimizerReport out = std::move(*runs[best]);
  out.method = "multistart_shopm";
  out.iterations = total_iterations;
  return out;
}

double angle_between(const UnitVector& u, const UnitVector& v) {
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimMismatch, "angle_between: dims differ");
  return 2.0 * std::atan2((u.entries() - v.entries()).norm(), (u.entries() + v.entries()).norm());
}

namespace {

double max_angle(const std::vector<UnitVector>& parties) {
  double theta = 0.0;
  for (std::size_t a = 0; a < parties.size(); ++a) {
    for (std::size_t b = a + 1; b < parties.size(); ++b) theta = std::max(theta, angle_between(parties[a], parties[b]));
  }
  return theta;
}

// Least Re<u, v> is the same as largest ||u - v||^2 = 2 - 2 Re<u, v> for
// unit vectors; the distance form still separates pairs once the inner
// products all round to 1.
std::pair<int, int> least_inner_product_pair(const std::vector<UnitVector>& parties) {
  std::pair<int, int> best{0, 1};
  double largest = -1.0;
  for (std::size_t a = 0; a < parties.size(); ++a) {
    for (std::size_t b = a + 1; b < parties.size(); ++b) {
      const double dist = (parties[a].entries() - parties[b].entries()).squaredNorm();
      if (dist > largest) {
        largest = dist;
        best = {static_cast<int>(a), static_cast<int>(b)};
      }
    }
  }
  return best;
}

}  // namespace

SymmetrizeResult symmetrize(const ProductState& init, const DenseState& psi, double tol_theta, int max_iter) {
  if (init.n() != psi.n() || init.d() != psi.d()) {
    throw Error(ErrorCode::DimMismatch, "symmetrize: initial product state does not match the state");
  }
  SymmetrizationTrace trace;
  trace.f = psi.n() / 2;
  if (!init.nonneg()) trace.warnings.push_back("initial product state is not non-negative");
  if (!psi.nonneg()) trace.warnings.push_back("state has negative or complex amplitudes");

  std::vector<UnitVector> parties = init.parties();
  bool converged = false;
  double previous_theta = std::numeric_limits<double>::infinity();
  for (int i = 0;; ++i) {
    SymmetrizationStep step;
    step.i = i;
    step.theta = max_angle(parties);
    step.overlap = std::abs(overlap(ProductState(parties), psi));
    if (step.theta > previous_theta + 1e-12) throw std::logic_error("symmetrize: theta increased");
    previous_theta = step.theta;
    if (i == 0) trace.theta0 = step.theta;
    if (step.theta < tol_theta) {
      converged = true;
      trace.steps.push_back(step);
      break;
    }
    if (i >= max_iter) {
      trace.steps.push_back(step);
      break;
    }
    const auto [a, b] = least_inner_product_pair(parties);
    step.pair = std::pair{a, b};
    trace.steps.push_back(step);

    const auto& u = parties[static_cast<std::size_t>(a)];
    const auto& v = parties[static_cast<std::size_t>(b)];
    UnitVector merged = (u.nonneg() && v.nonneg()) ? average_pair(u, v) : UnitVector::normalize(CVector(u.entries() + v.entries()));
    parties[static_cast<std::size_t>(a)] = merged;
    parties[static_cast<std::size_t>(b)] = merged;
  }

  CVector mean = CVector::Zero(psi.d());
  for (const auto& p : parties) mean += p.entries();
  UnitVector limit = UnitVector::normalize(std::move(mean));
  return SymmetrizeResult{std::move(limit), ProductState(std::move(parties)), std::move(trace), converged};
}

double geometric_measure(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::NonPositiveLambda, "lambda must be > 0, got " + std::to_string(lambda));
  if (lambda > 1.0 + 1e-12) throw Error(ErrorCode::InvalidArgument, "lambda exceeds 1: " + std::to_string(lambda));
  lambda = std::min(lambda, 1.0);
  return -2.0 * std::log2(lambda);
}

std::string to_string(EgMethod m) {
  switch (m) {
    case EgMethod::SymmetricGrid: return "symmetric_grid";
    case EgMethod::Shopm: return "shopm";
    case EgMethod::MultistartShopm: return "multistart_shopm";
  }
  return "unknown";
}

EgMethod parse_eg_method(const std::string& name) {
  if (name == "symmetric_grid") return EgMethod::SymmetricGrid;
  if (name == "shopm") return EgMethod::Shopm;
  if (name == "multistart_shopm") return EgMethod::MultistartShopm;
  throw Error(ErrorCode::InvalidArgument, "unknown method \"" + name + "\"");
}

EgReport compute_eg(const SymmetricState& s, EgMethod method, const EgParams& params) {
  EgReport out;
  out.seed = params.seed;
  if (!s.nonneg()) {
    if (!params.force) {
      throw Error(ErrorCode::NotNonnegative,
                  "state has negative or complex coefficients; symmetric restriction is not guaranteed (use force)");
    }
    out.warnings.push_back("state is not non-negative; symmetric optimum may underestimate the product optimum");
  }
  const auto start = std::chrono::steady_clock::now();
  switch (method) {
    case EgMethod::SymmetricGrid: {
      GridSpec g = params.grid;
      g.workers = params.workers;
      out.optimizer = grid_search_symmetric(s, g);
      break;
    }
    case EgMethod::Shopm:
      // The uniform vector is a fixed point for GHZ-type states, so start
      // from a jittered copy of it.
      out.optimizer = shopm(s, jittered_uniform(s.d(), params.seed), params.tol, params.max_iter, params.seed);
      break;
    case EgMethod::MultistartShopm:
      out.optimizer = multistart_shopm(s, params.starts, params.seed, params.tol, params.max_iter, params.workers);
      break;
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Non-normalized inputs scale lambda; E_g is only meaningful for normalized ones.
  const double norm = std::sqrt(s.squared_norm());
  out.lambda = out.optimizer.lambda;
  out.lambda_sq = out.lambda * out.lambda;
  out.eg = geometric_measure(out.lambda / norm);
  return out;
}

}  // namespace symgeo
