#include "symgeo/state_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "symgeo/error.hpp"

namespace symgeo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::ParseError, field + ": " + msg);
}

int require_int(const json& j, const char* key, int min_value) {
  if (!j.contains(key)) fail(key, "missing");
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(key, "must be an integer");
  const auto value = v.get<long long>();
  if (value < min_value) fail(key, "must be >= " + std::to_string(min_value) + ", got " + std::to_string(value));
  if (value > 64) fail(key, "unreasonably large value " + std::to_string(value));
  return static_cast<int>(value);
}

double require_number(const json& j, const std::string& field, const char* key, bool optional) {
  if (!j.contains(key)) {
    if (optional) return 0.0;
    fail(field + "." + key, "missing");
  }
  const json& v = j.at(key);
  if (!v.is_number()) fail(field + "." + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field + "." + key, "must be finite");
  return x;
}

}  // namespace

AnyState parse_state_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("<root>", "must be a JSON object");

  const int n = require_int(root, "n", 1);
  const int d = require_int(root, "d", 2);

  if (!root.contains("basis") || !root.at("basis").is_string()) fail("basis", "must be \"dicke\" or \"dense\"");
  const std::string basis = root.at("basis").get<std::string>();
  if (basis != "dicke" && basis != "dense") fail("basis", "must be \"dicke\" or \"dense\", got \"" + basis + "\"");
  const bool dicke = basis == "dicke";

  if (!root.contains("normalized") || !root.at("normalized").is_boolean()) fail("normalized", "must be a boolean");
  const bool normalized = root.at("normalized").get<bool>();

  if (!root.contains("coeffs") || !root.at("coeffs").is_array()) fail("coeffs", "must be an array");

  if (!dicke && std::pow(static_cast<double>(d), n) > static_cast<double>(1 << 24)) {
    fail("n", "dense basis with d^n > 2^24 is not supported");
  }

  CompositionTable table(n, d);
  const std::size_t size = dicke ? table.size()
                                 : static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(d), n)));
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(size));
  std::set<std::size_t> seen;

  const json& coeffs = root.at("coeffs");
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    const std::string field = "coeffs[" + std::to_string(e) + "]";
    const json& entry = coeffs.at(e);
    if (!entry.is_object()) fail(field, "must be an object");
    if (!entry.contains("index") || !entry.at("index").is_array()) fail(field + ".index", "must be an array of integers");
    std::vector<int> index;
    for (const json& x : entry.at("index")) {
      if (!x.is_number_integer()) fail(field + ".index", "must contain only integers");
      index.push_back(x.get<int>());
    }
    std::size_t slot = 0;
    if (dicke) {
      if (static_cast<int>(index.size()) != d) {
        fail(field + ".index", "length " + std::to_string(index.size()) + " does not match d = " + std::to_string(d));
      }
      int sum = 0;
      for (int k : index) {
        if (k < 0) fail(field + ".index", "negative occupation number");
        sum += k;
      }
      if (sum != n) fail(field + ".index", "occupations sum to " + std::to_string(sum) + ", expected n = " + std::to_string(n));
      slot = table.index_of(Composition{index});
    } else {
      if (static_cast<int>(index.size()) != n) {
        fail(field + ".index", "length " + std::to_string(index.size()) + " does not match n = " + std::to_string(n));
      }
      for (int i : index) {
        if (i < 0 || i >= d) fail(field + ".index", "digit " + std::to_string(i) + " outside [0, d)");
        slot = slot * static_cast<std::size_t>(d) + static_cast<std::size_t>(i);
      }
    }
    if (!seen.insert(slot).second) fail(field + ".index", "duplicate entry");
    amps[static_cast<Eigen::Index>(slot)] =
        Scalar(require_number(entry, field, "re", false), require_number(entry, field, "im", true));
  }

  if (normalized && std::abs(amps.squaredNorm() - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "true but squared norm of coeffs is " << amps.squaredNorm();
    fail("normalized", msg.str());
  }
  if (dicke) return SymmetricState(n, d, std::move(amps), normalized);
  return DenseState(n, d, std::move(amps), normalized);
}

AnyState read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

namespace {

json entry(const std::vector<int>& index, Scalar z) {
  return json{{"index", index}, {"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

std::string to_state_json(const SymmetricState& s) {
  json coeffs = json::array();
  for (std::size_t c = 0; c < s.table().size(); ++c) {
    const Scalar z = s.coeffs()[static_cast<Eigen::Index>(c)];
    if (z != Scalar(0.0)) coeffs.push_back(entry(s.table()[c].counts, z));
  }
  json root{{"n", s.n()}, {"d", s.d()}, {"basis", "dicke"}, {"coeffs", coeffs}, {"normalized", s.normalized()}};
  return root.dump(2);
}

std::string to_state_json(const DenseState& psi) {
  json coeffs = json::array();
  for (Eigen::Index i = 0; i < psi.amps().size(); ++i) {
    const Scalar z = psi.amps()[i];
    if (z != Scalar(0.0)) coeffs.push_back(entry(psi.multi_index(static_cast<std::size_t>(i)), z));
  }
  json root{{"n", psi.n()}, {"d", psi.d()}, {"basis", "dense"}, {"coeffs", coeffs}, {"normalized", psi.normalized()}};
  return root.dump(2);
}

}  // namespace symgeo
