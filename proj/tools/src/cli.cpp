#include "symgeo_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>

#include "symgeo/contract.hpp"
#include "symgeo/error.hpp"
#include "symgeo/optimize.hpp"
#include "symgeo/report_io.hpp"
#include "symgeo/state_io.hpp"
#include "symgeo/symstate.hpp"
#include "symgeo/verify.hpp"

namespace symgeo::cli {
namespace {

struct StateOptions {
  std::string family;
  std::string file;
  int n = 3;
  int d = 2;
  int k = 1;
  std::uint64_t seed = 0;
};

struct ComputeOptions {
  StateOptions state;
  std::string method = "multistart_shopm";
  int starts = 8;
  double tol = 1e-12;
  int max_iter = 100000;
  int resolution = 33;
  std::string format = "json";
  std::string output;
  int workers = 1;
  bool force = false;
  bool timing = false;
};

struct VerifyOptions {
  std::string check;
  int n = 3;
  int d = 2;
  int d_min = 2;
  int d_max = 6;
  std::optional<int> instances;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = ".";
};

struct TraceOptions {
  StateOptions state;
  std::string init;
  std::optional<int> two_cluster;
  double tol_theta = 1e-12;
  int max_iter = 10000;
  std::string format = "csv";
  std::string output;
  int workers = 1;
};

void add_state_options(CLI::App* cmd, StateOptions& s) {
  auto* family = cmd->add_option("--state", s.family, "Builtin state family")
                     ->check(CLI::IsMember({"ghz", "w", "dicke", "random-nonneg", "translation-ghz"}));
  auto* file = cmd->add_option("--state-file", s.file, "JSON state file");
  family->excludes(file);
  cmd->add_option("--n", s.n, "Number of parties")->check(CLI::Range(1, 64));
  cmd->add_option("--d", s.d, "Local dimension")->check(CLI::Range(2, 64));
  cmd->add_option("--k", s.k, "Excitation number for dicke")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", s.seed, "Seed for random-nonneg");
}

std::vector<std::pair<std::string, std::string>> state_echo(const StateOptions& s) {
  if (!s.file.empty()) return {{"state_file", s.file}};
  std::vector<std::pair<std::string, std::string>> echo{{"state", s.family}, {"n", std::to_string(s.n)}};
  if (s.family == "ghz" || s.family == "random-nonneg") echo.emplace_back("d", std::to_string(s.d));
  if (s.family == "dicke") echo.emplace_back("k", std::to_string(s.k));
  if (s.family == "random-nonneg") echo.emplace_back("state_seed", std::to_string(s.seed));
  return echo;
}

AnyState load_state(const StateOptions& s) {
  if (!s.file.empty()) return read_state_file(s.file);
  if (s.family.empty()) throw Error(ErrorCode::InvalidArgument, "one of --state or --state-file is required");
  if (s.n < 2) throw Error(ErrorCode::InvalidArgument, "--n: need at least 2 parties");
  if (s.family == "ghz") return make_ghz(s.n, s.d);
  if (s.family == "w") return make_w(s.n);
  if (s.family == "dicke") {
    if (s.k > s.n) throw Error(ErrorCode::InvalidArgument, "--k: must be at most n = " + std::to_string(s.n));
    return make_dicke(s.n, s.k);
  }
  if (s.family == "random-nonneg") return random_nonneg_symmetric(s.n, s.d, s.seed);
  if (s.n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "--n: translation-ghz needs an even number of parties");
  return make_translation_ghz(s.n);
}

DenseState as_dense(const AnyState& state) {
  if (const auto* sym = std::get_if<SymmetricState>(&state)) return dicke_to_dense(*sym);
  return std::get<DenseState>(state);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "--output: cannot open " + path);
  f << text;
}

std::string fmt(double x) { return format_shortest(x); }

int cmd_compute(const ComputeOptions& o, std::ostream& out, std::ostream& err) {
  const EgMethod method = parse_eg_method(o.method);
  const AnyState state = load_state(o.state);

  std::vector<std::string> warnings;
  std::optional<SymmetricState> sym;
  if (const auto* s = std::get_if<SymmetricState>(&state)) {
    sym = *s;
  } else {
    const auto& dense = std::get<DenseState>(state);
    try {
      sym = dense_to_dicke(dense);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotSymmetric) throw;
      if (!o.force) {
        throw Error(ErrorCode::NotSymmetric,
                    "state: not permutation-symmetric; pass --force for the symmetric-restricted value");
      }
      warnings.push_back("state is not permutation-symmetric; reporting the symmetric-restricted maximum");
      sym = project_symmetric(dense);
    }
  }

  EgParams params;
  params.grid.resolution = o.resolution;
  params.grid.workers = o.workers;
  params.tol = o.tol;
  params.max_iter = o.max_iter;
  params.starts = o.starts;
  params.seed = o.state.seed;
  params.force = o.force;
  params.workers = o.workers;

  const auto start = std::chrono::steady_clock::now();
  EgReport report = compute_eg(*sym, method, params);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());

  RunInfo info;
  info.config = state_echo(o.state);
  info.config.emplace_back("method", o.method);
  if (method == EgMethod::SymmetricGrid) {
    info.config.emplace_back("resolution", std::to_string(o.resolution));
  } else {
    info.config.emplace_back("tol", fmt(o.tol));
    info.config.emplace_back("max_iter", std::to_string(o.max_iter));
  }
  if (method == EgMethod::MultistartShopm) info.config.emplace_back("starts", std::to_string(o.starts));
  if (o.force) info.config.emplace_back("force", "true");
  info.seed = o.state.seed;
  if (o.timing) info.wall_seconds = elapsed;

  emit(o.format == "csv" ? eg_report_csv(report, info) : eg_report_json(report, info), o.output, out);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (!report.optimizer.converged) {
    err << "error: " << report.optimizer.method << " did not converge\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int default_instances(const std::string& check) {
  static const std::map<std::string, int> defaults{
      {"theorem1", 50}, {"lemma-b", 200}, {"lemma1", 200}, {"phase-freedom", 20}};
  const auto it = defaults.find(check);
  return it == defaults.end() ? 1 : it->second;
}

VerificationReport run_check(const std::string& check, const VerifyOptions& o) {
  const int count = o.instances.value_or(default_instances(check));
  if (check == "theorem1") {
    GridSpec g = default_product_grid();
    g.workers = o.workers;
    return check_symmetric_restriction(o.n, o.d, count, o.seed, g);
  }
  if (check == "lemma-b") return check_bilinear_sup(o.d_min, o.d_max, count, o.seed, o.workers);
  if (check == "lemma1") return check_averaged_eigenvector(o.d_min, o.d_max, count, o.seed, o.workers);
  if (check == "phase-freedom") return check_phase_freedom(o.n, o.d, count, o.seed, o.workers);
  GridSpec g = default_product_grid();
  g.workers = o.workers;
  return negative_control_translation(g);
}

std::vector<std::pair<std::string, std::string>> verify_echo(const std::string& check, const VerifyOptions& o) {
  std::vector<std::pair<std::string, std::string>> echo{{"check", check}};
  if (check == "theorem1" || check == "phase-freedom") {
    echo.emplace_back("n", std::to_string(o.n));
    echo.emplace_back("d", std::to_string(o.d));
  }
  if (check == "lemma-b" || check == "lemma1") {
    echo.emplace_back("d_min", std::to_string(o.d_min));
    echo.emplace_back("d_max", std::to_string(o.d_max));
  }
  if (check != "negative-control") {
    echo.emplace_back("instances", std::to_string(o.instances.value_or(default_instances(check))));
  }
  return echo;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  if (o.d_min > o.d_max) throw Error(ErrorCode::InvalidArgument, "--d-min: exceeds --d-max");
  std::vector<std::string> checks{o.check};
  if (o.check == "all") checks = {"theorem1", "lemma-b", "lemma1", "negative-control", "phase-freedom"};
  if (o.instances && *o.instances < 1) throw Error(ErrorCode::InvalidArgument, "--instances: must be positive");
  std::filesystem::create_directories(o.out_dir);

  bool all_passed = true;
  for (const auto& check : checks) {
    const VerificationReport report = run_check(check, o);
    RunInfo info;
    info.config = verify_echo(check, o);
    info.seed = o.seed;
    emit(verification_report_json(report, info), (std::filesystem::path(o.out_dir) / (check + ".json")).string(), out);
    out << verification_summary(report) << '\n';
    if (check == "negative-control" && !report.records.empty()) {
      const auto& r = report.records.front();
      out << "  lambda_full_sq " << fmt(r.value("lambda_full_sq")) << " vs lambda_sym_sq "
          << fmt(r.value("lambda_sym_sq")) << '\n';
    }
    all_passed = all_passed && report.passed;
  }
  return all_passed ? kExitOk : 1;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& field) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, field + ": not a number: '" + item + "'");
    }
  }
  return xs;
}

ProductState trace_init(const TraceOptions& o, const DenseState& psi) {
  const int n = psi.n(), d = psi.d();
  if (!o.init.empty()) {
    std::vector<UnitVector> parties;
    std::stringstream ss(o.init);
    std::string chunk;
    while (std::getline(ss, chunk, ';')) {
      const auto xs = parse_numbers(chunk, "--init");
      if (static_cast<int>(xs.size()) != d) {
        throw Error(ErrorCode::InvalidArgument, "--init: party " + std::to_string(parties.size()) + " has " +
                                                    std::to_string(xs.size()) + " entries, expected d = " +
                                                    std::to_string(d));
      }
      if (std::all_of(xs.begin(), xs.end(), [](double x) { return x == 0.0; })) {
        throw Error(ErrorCode::InvalidArgument, "--init: party " + std::to_string(parties.size()) + " is zero");
      }
      parties.push_back(UnitVector::normalize(std::span<const double>(xs)));
    }
    if (static_cast<int>(parties.size()) != n) {
      throw Error(ErrorCode::InvalidArgument,
                  "--init: " + std::to_string(parties.size()) + " parties given, expected n = " + std::to_string(n));
    }
    return ProductState(std::move(parties));
  }
  if (o.two_cluster) {
    const int xi = *o.two_cluster;
    if (xi < 1 || xi >= n) {
      throw Error(ErrorCode::InvalidArgument, "--two-cluster: need 1 <= xi < n = " + std::to_string(n));
    }
    std::vector<UnitVector> parties;
    for (int p = 0; p < n; ++p) parties.push_back(UnitVector::basis(d, p < xi ? 0 : 1));
    return ProductState(std::move(parties));
  }
  GridSpec g = default_product_grid();
  g.workers = o.workers;
  return std::get<ProductState>(grid_search_product(psi, g).maximizer);
}

int cmd_trace(const TraceOptions& o, std::ostream& out) {
  if (!o.init.empty() && o.two_cluster) throw Error(ErrorCode::InvalidArgument, "--init: excludes --two-cluster");
  const DenseState psi = as_dense(load_state(o.state));
  const SymmetrizeResult result = symmetrize(trace_init(o, psi), psi, o.tol_theta, o.max_iter);

  RunInfo info;
  info.config = state_echo(o.state);
  if (!o.init.empty()) info.config.emplace_back("init", o.init);
  if (o.two_cluster) info.config.emplace_back("two_cluster", std::to_string(*o.two_cluster));
  if (o.init.empty() && !o.two_cluster) info.config.emplace_back("init", "grid_optimum");
  info.config.emplace_back("tol_theta", fmt(o.tol_theta));
  info.seed = o.state.seed;
  emit(o.format == "json" ? trace_json(result, info) : trace_csv(result.trace), o.output, out);
  return result.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric measure of entanglement for symmetric non-negative states", "symgeo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  ComputeOptions co;
  auto* compute = app.add_subcommand("compute", "Compute E_g over symmetric product states");
  add_state_options(compute, co.state);
  compute->add_option("--method", co.method, "symmetric_grid | shopm | multistart_shopm")
      ->check(CLI::IsMember({"symmetric_grid", "shopm", "multistart_shopm"}));
  compute->add_option("--starts", co.starts, "Starts for multistart_shopm")->check(CLI::PositiveNumber);
  compute->add_option("--tol", co.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  compute->add_option("--max-iter", co.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  compute->add_option("--resolution", co.resolution, "Points per grid angle")->check(CLI::Range(2, 100000));
  compute->add_option("--format", co.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  compute->add_option("--output", co.output, "Write the report here instead of stdout");
  compute->add_option("--workers", co.workers, "Worker threads")->check(CLI::Range(1, 1024));
  compute->add_flag("--force", co.force, "Allow states outside the non-negative symmetric class");
  compute->add_flag("--timing", co.timing, "Embed wall time in the report");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run verification suites and write JSON reports");
  verify->add_option("check", vo.check, "theorem1 | lemma-b | lemma1 | negative-control | phase-freedom | all")
      ->required()
      ->check(CLI::IsMember({"theorem1", "lemma-b", "lemma1", "negative-control", "phase-freedom", "all"}));
  verify->add_option("--n", vo.n, "Parties (theorem1, phase-freedom)")->check(CLI::Range(2, 64));
  verify->add_option("--d", vo.d, "Local dimension (theorem1, phase-freedom)")->check(CLI::Range(2, 64));
  verify->add_option("--d-min", vo.d_min, "Smallest matrix size (lemma-b, lemma1)")->check(CLI::Range(1, 4096));
  verify->add_option("--d-max", vo.d_max, "Largest matrix size (lemma-b, lemma1)")->check(CLI::Range(1, 4096));
  verify->add_option("--instances", vo.instances, "Random instances per check");
  verify->add_option("--seed", vo.seed, "Base seed");
  verify->add_option("--workers", vo.workers, "Worker threads")->check(CLI::Range(1, 1024));
  verify->add_option("--out-dir", vo.out_dir, "Directory for <check>.json reports");

  TraceOptions to;
  auto* trace = app.add_subcommand("trace", "Record the pairwise-averaging symmetrization trace");
  add_state_options(trace, to.state);
  trace->add_option("--init", to.init, "Initial parties, e.g. \"1,0;0,1\"");
  trace->add_option("--two-cluster", to.two_cluster, "xi copies of e0 followed by n-xi copies of e1");
  trace->add_option("--tol-theta", to.tol_theta, "Stop once the largest angle is below this")
      ->check(CLI::PositiveNumber);
  trace->add_option("--max-iter", to.max_iter, "Averaging step cap")->check(CLI::PositiveNumber);
  trace->add_option("--format", to.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  trace->add_option("--output", to.output, "Write the trace here instead of stdout");
  trace->add_option("--workers", to.workers, "Worker threads for the default grid init")->check(CLI::Range(1, 1024));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(co, out, err);
    if (*verify) return cmd_verify(vo, out);
    return cmd_trace(to, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::NotConverged ? kExitNotConverged : kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace symgeo::cli
