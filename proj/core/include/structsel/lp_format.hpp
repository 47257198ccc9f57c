#pragma once

#include <string>
#include <vector>

#include "structsel/ilp.hpp"
#include "structsel/lp.hpp"

namespace structsel {

/// Writes a program in the CPLEX LP text format. Variable and row names
/// must be valid LP identifiers. Non-integer coefficients are printed as
/// decimals, each preceded by a comment giving the exact fraction. When
/// `binary` is set every variable is listed in a Binaries section.
std::string write_lp_format(const LinearProgram& lp, const std::vector<std::string>& var_names,
                            const std::vector<std::string>& row_names, const std::string& title, bool binary);

/// The model as an ILP over binary y and t.
std::string write_lp_format(const IlpModel& model);

}  // namespace structsel
