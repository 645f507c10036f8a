#pragma once

#include "folia/geometry.hpp"

namespace folia {

/// Parses the .sfo module description language. Throws ParseError with line/column on bad input.
SingularSubalgebroid parse_subalgebroid(const std::string& source, GroebnerOptions opts = {});

SingularSubalgebroid load_subalgebroid(const std::string& path, GroebnerOptions opts = {});

/// Prints a module back to DSL text; parse(print(B)) reproduces B.
std::string print_subalgebroid(const SingularSubalgebroid& B);

/// Parses one section expression against an ambient frame (used by the CLI for ad-hoc sections).
FreeModuleElem parse_section(const std::string& expr, const AmbientAlgebroid& ambient);

/// Parses a polynomial in the given variable list (used for family coefficients, e.g. in (l, x, y)).
Poly parse_poly(const std::string& expr, const std::vector<std::string>& var_names);

}  // namespace folia
