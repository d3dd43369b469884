#pragma once

#include "hkcoeff/chains.hpp"

#include <json.hpp>

namespace hkcoeff {

using nlohmann::json;

json matrix_to_json(const MatrixZm& A);
MatrixZm matrix_from_json(const json& j);

json module_to_json(const PresentedModule& M);
PresentedModule module_from_json(const json& j);

json weyl_to_json(const GroupData& gd, const WeylElt& w);
WeylElt weyl_from_json(const GroupData& gd, const json& j);

/// {"ring":"zmod:<m>", "group":{"kind":...,"q":...}, "rank":..., "action":{...}}
json hmodule_to_json(const HModule& M);
HModule hmodule_from_json(const json& j);

json finite_rep_to_json(const FiniteRep& V);

/// structure-constant table of a parahoric algebra
json algebra_to_json(const FiniteAlgebra& alg);

/// face table of a diagram spread over a region
json coeff_system_to_json(const CoeffSystem& csys);

/// homology report {"region":..., "H0":..., "H1":..., "checks":[...]}
json homology_report(const CoeffSystem& csys, const ChainComplex& cc);

}  // namespace hkcoeff
