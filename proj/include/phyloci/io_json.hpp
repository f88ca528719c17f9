#pragma once

#include <json.hpp>

#include "phyloci/verify.hpp"

namespace phyloci {

using Json = nlohmann::json;

/// {"kappa":4,"n":3,"basis":"standard"|"fourier","data":[[re,im],...]}
/// with index(X1..Xn) = sum x_i kappa^(n-i) (leaf 1 most significant).
Json tensor_to_json(const Tensor& t, const std::string& basis = "standard");
Tensor tensor_from_json(const Json& j);

/// {"pi":[[re,im],...],"edges":[{"edge":[u,v],"coeffs":[[re,im],...]},...]}
/// on the documented orbit bases, edges in canonical order.
Json parameters_to_json(const Parameters& p, const Tree& tree);
Parameters parameters_from_json(const Json& j);

/// [{id, provenance, matrix, rows, cols, coeff_map:[{row,col,coord_index,sign},...]},...]
/// Entries with several coeff_map terms for one (row,col) cell denote sums;
/// sign is a real coefficient (±1 for the primitive equation sets).
Json equations_to_json(const std::vector<MinorEquation>& eqs);

Json system_to_json(const EquationSystem& sys);

/// Split-basis dump: [{k,i,j,tensor:[[re,im],...]},...]
Json basis_dump_to_json(const SplitBasis& basis);

Json report_to_json(const VerifyReport& r);

/// Custom model: {"kappa":..,"generators":[[..],..],
///                "char_table":[[[re,im],..],..]?, "irrep_matrices":..?}
ModelSpec model_from_json(const Json& j);

/// Case-insensitive built-in name, or inline JSON / @file for custom groups.
ModelSpec model_from_arg(const std::string& arg);

}  // namespace phyloci
