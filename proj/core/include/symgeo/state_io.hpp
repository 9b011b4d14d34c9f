#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "symgeo/symstate.hpp"

namespace symgeo {

/// A state read from disk: Dicke-basis files yield a SymmetricState, dense
/// files a DenseState.
using AnyState = std::variant<SymmetricState, DenseState>;

/// State file schema:
///
///   { "n": int, "d": int, "basis": "dicke" | "dense",
///     "coeffs": [ { "index": [ints], "re": float, "im": float }, ... ],
///     "normalized": bool }
///
/// For "dicke", index is a composition (length d, summing to n); for
/// "dense", a multi-index (length n, digits in [0, d)). Entries not listed
/// are zero; "im" may be omitted. Violations raise ParseError naming the
/// offending field, e.g. "coeffs[2].index: length 3 does not match d = 2".
AnyState parse_state_json(std::string_view text);
AnyState read_state_file(const std::filesystem::path& path);

/// Lists every nonzero coefficient, in table order.
std::string to_state_json(const SymmetricState& s);
std::string to_state_json(const DenseState& psi);

}  // namespace symgeo
