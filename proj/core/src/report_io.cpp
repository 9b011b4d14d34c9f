#include "symgeo/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace symgeo {

const char* library_version() noexcept { return SYMGEO_VERSION; }

namespace {

using ojson = nlohmann::ordered_json;

ojson vector_json(const UnitVector& u) {
  ojson re = ojson::array(), im = ojson::array();
  for (int i = 0; i < u.dim(); ++i) {
    re.push_back(u[i].real());
    im.push_back(u[i].imag());
  }
  return ojson{{"re", re}, {"im", im}};
}

ojson maximizer_json(const std::variant<UnitVector, ProductState>& m) {
  if (const auto* u = std::get_if<UnitVector>(&m)) {
    return ojson{{"kind", "symmetric"}, {"vector", vector_json(*u)}};
  }
  ojson parties = ojson::array();
  for (const auto& p : std::get<ProductState>(m).parties()) parties.push_back(vector_json(p));
  return ojson{{"kind", "product"}, {"parties", parties}};
}

ojson header(const RunInfo& info) {
  ojson config = ojson::object();
  for (const auto& [k, v] : info.config) config[k] = v;
  ojson out{{"schema", kReportSchema}, {"tool", info.tool}, {"version", info.version}, {"config", config},
            {"seed", info.seed}};
  if (info.wall_seconds) out["wall_seconds"] = *info.wall_seconds;
  return out;
}

ojson number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string eg_report_json(const EgReport& report, const RunInfo& info) {
  ojson out = header(info);
  const auto& opt = report.optimizer;
  out["method"] = opt.method;
  out["lambda"] = number(report.lambda);
  out["lambda_sq"] = number(report.lambda_sq);
  out["E_g"] = number(report.eg);
  out["iterations"] = opt.iterations;
  out["converged"] = opt.converged;
  out["maximizer"] = maximizer_json(opt.maximizer);
  out["warnings"] = report.warnings;
  return out.dump(2) + "\n";
}

std::string eg_report_csv(const EgReport& report, const RunInfo& info) {
  std::ostringstream out;
  out << "tool,version,seed,method,lambda,lambda_sq,E_g,iterations,converged\n";
  out << info.tool << ',' << info.version << ',' << info.seed << ',' << report.optimizer.method << ','
      << format_double(report.lambda) << ',' << format_double(report.lambda_sq) << ',' << format_double(report.eg)
      << ',' << report.optimizer.iterations << ',' << (report.optimizer.converged ? "true" : "false") << '\n';
  return out.str();
}

std::string verification_report_json(const VerificationReport& report, const RunInfo& info) {
  ojson out = header(info);
  out["check"] = report.check;
  ojson params = ojson::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  out["parameters"] = params;
  out["instances"] = report.instances;
  out["tolerance"] = report.tolerance;
  out["worst_discrepancy"] = number(report.worst);
  out["passed"] = report.passed;
  ojson records = ojson::array();
  for (const auto& r : report.records) {
    ojson values = ojson::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    ojson rec{{"index", r.index}, {"seed", r.seed}};
    if (!r.label.empty()) rec["label"] = r.label;
    rec["values"] = values;
    rec["discrepancy"] = number(r.discrepancy);
    rec["asserted"] = r.asserted;
    if (!r.note.empty()) rec["note"] = r.note;
    records.push_back(rec);
  }
  out["records"] = records;
  out["notes"] = report.notes;
  return out.dump(2) + "\n";
}

std::string verification_summary(const VerificationReport& report) {
  std::ostringstream out;
  char worst[32], tol[32];
  std::snprintf(worst, sizeof worst, "%.3g", report.worst);
  std::snprintf(tol, sizeof tol, "%.3g", report.tolerance);
  out << (report.passed ? "[PASS] " : "[FAIL] ") << report.check << ": " << report.instances << " instance"
      << (report.instances == 1 ? "" : "s") << ", worst " << worst << (report.passed ? " <= tol " : " > tol ") << tol;
  return out.str();
}

std::string trace_csv(const SymmetrizationTrace& trace) {
  std::ostringstream out;
  out << "i,alpha,beta,theta_i,overlap_i\n";
  for (const auto& s : trace.steps) {
    out << s.i << ',';
    if (s.pair) {
      out << s.pair->first << ',' << s.pair->second;
    } else {
      out << ',';
    }
    out << ',' << format_double(s.theta) << ',' << format_double(s.overlap) << '\n';
  }
  return out.str();
}

std::string trace_json(const SymmetrizeResult& result, const RunInfo& info) {
  ojson out = header(info);
  const auto& t = result.trace;
  out["theta0"] = t.theta0;
  out["f"] = t.f;
  out["converged"] = result.converged;
  out["limit"] = vector_json(result.limit);
  ojson steps = ojson::array();
  for (const auto& s : t.steps) {
    ojson row{{"i", s.i}};
    if (s.pair) {
      row["alpha"] = s.pair->first;
      row["beta"] = s.pair->second;
    } else {
      row["alpha"] = nullptr;
      row["beta"] = nullptr;
    }
    row["theta_i"] = s.theta;
    row["overlap_i"] = s.overlap;
    steps.push_back(row);
  }
  out["steps"] = steps;
  out["warnings"] = t.warnings;
  return out.dump(2) + "\n";
}

}  // namespace symgeo
