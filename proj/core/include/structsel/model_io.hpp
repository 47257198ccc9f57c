#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "structsel/model.hpp"

namespace structsel {

// Document format (JSON, indices 1-based):
//
//   fixed:    {"n": 3, "m": 2, "A": [[2,1],[3,2]], "B": [[1,1],[3,2]], "costs": [1, "3/2"]}
//   switched: {"n": 3, "modes": [{"A": [...], "B": [...], "costs": [...]}, ...]}
//
// An [i,j] pair in A means A_ij is a free parameter (edge x_j -> x_i); in B
// it means input u_j actuates state x_i. Costs are integers or "p/q" strings.
// A switched mode may carry an optional "m"; otherwise m_k = len(costs).

/// Throws ParseError with field/line context.
StructuredSystem parse_system(std::string_view document);

/// Zero input columns are stripped from every mode; one warning per mode
/// naming the stripped (1-based) columns is appended to `warnings`.
SwitchedStructuredSystem parse_switched_system(std::string_view document,
                                               std::vector<std::string>* warnings = nullptr);

/// True when the document has a top-level "modes" field.
bool is_switched_document(std::string_view document);

std::string serialize_system(const StructuredSystem& sys);
std::string serialize_switched_system(const SwitchedStructuredSystem& sw);

}  // namespace structsel
