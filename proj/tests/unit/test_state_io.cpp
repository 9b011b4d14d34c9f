#include <doctest.h>

#include <cmath>
#include <string>

#include "symgeo/error.hpp"
#include "symgeo/state_io.hpp"

using namespace symgeo;

namespace {

std::string parse_error_message(const std::string& text) {
  try {
    parse_state_json(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("expected ParseError");
  return {};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("dicke file round trip") {
  const auto s = random_nonneg_symmetric(4, 3, 11);
  const auto back = std::get<SymmetricState>(parse_state_json(to_state_json(s)));
  CHECK(back.n() == 4);
  CHECK(back.d() == 3);
  CHECK(back.normalized());
  CHECK((back.coeffs() - s.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense file with complex entries") {
  const std::string text = R"({"n": 2, "d": 2, "basis": "dense",
    "coeffs": [{"index": [0, 0], "re": 0.6}, {"index": [1, 1], "re": 0.0, "im": 0.8}],
    "normalized": true})";
  const auto psi = std::get<DenseState>(parse_state_json(text));
  CHECK(psi.amps()[0] == Scalar(0.6));
  CHECK(psi.amps()[3] == Scalar(0.0, 0.8));
  CHECK(psi.amps()[1] == Scalar(0.0));
  const auto again = std::get<DenseState>(parse_state_json(to_state_json(psi)));
  CHECK(again.amps() == psi.amps());
}

TEST_CASE("reader rejects invariant violations with field-specific messages") {
  CHECK(contains(parse_error_message(R"({"n": 3, "d": 2, "basis": "dicke",
      "coeffs": [{"index": [1, 1, 1], "re": 1}], "normalized": true})"),
                 "coeffs[0].index: length 3 does not match d = 2"));
  CHECK(contains(parse_error_message(R"({"n": 3, "d": 2, "basis": "dicke",
      "coeffs": [{"index": [2, 2], "re": 1}], "normalized": true})"),
                 "coeffs[0].index: occupations sum to 4"));
  CHECK(contains(parse_error_message(R"({"n": 2, "d": 2, "basis": "dense",
      "coeffs": [{"index": [0, 2], "re": 1}], "normalized": true})"),
                 "coeffs[0].index"));
  CHECK(contains(parse_error_message(R"({"n": 2, "d": 2, "basis": "dense",
      "coeffs": [{"index": [0, 0], "re": 1}, {"index": [0, 0], "re": 0}], "normalized": true})"),
                 "coeffs[1].index: duplicate"));
  CHECK(contains(parse_error_message(R"({"n": 2, "d": 2, "basis": "dense",
      "coeffs": [{"index": [0, 0], "re": 2}], "normalized": true})"),
                 "normalized:"));
  CHECK(contains(parse_error_message(R"({"n": 2, "d": 2, "basis": "tensor", "coeffs": [], "normalized": true})"),
                 "basis:"));
  CHECK(contains(parse_error_message(R"({"d": 2, "basis": "dense", "coeffs": [], "normalized": false})"), "n: missing"));
  CHECK(contains(parse_error_message(R"({"n": 2, "d": 2, "basis": "dense",
      "coeffs": [{"index": [0, 0], "re": "x"}], "normalized": false})"),
                 "coeffs[0].re"));
  CHECK(contains(parse_error_message("{\"n\": 2,\n \"d\": }"), "line 2"));
}

TEST_CASE("non-normalized files are accepted as such") {
  const auto psi = std::get<DenseState>(parse_state_json(R"({"n": 1, "d": 2, "basis": "dense",
      "coeffs": [{"index": [0], "re": 0.5}], "normalized": false})"));
  CHECK_FALSE(psi.normalized());
  CHECK(psi.squared_norm() == doctest::Approx(0.25));
}
