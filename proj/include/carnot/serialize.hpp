#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "carnot/crofton.hpp"
#include "carnot/graph_measure.hpp"
#include "carnot/measure.hpp"
#include "carnot/split.hpp"
#include "carnot/witness.hpp"

namespace carnot {

using Json = nlohmann::json;

// Algebras, norms, splits, grids, and modulus programs round-trip; reports
// serialize one way (they are outputs).
Json to_json(const AlgebraPtr& alg);
AlgebraPtr algebra_from_json(const Json& j);

Json to_json(const Norm& nrm);
Norm norm_from_json(const Json& j);

Json to_json(const HomogeneousSplit& split);
HomogeneousSplit split_from_json(const AlgebraPtr& alg, const Json& j);

Json to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);

Json to_json(const ModulusProblem& prob);
ModulusProblem problem_from_json(const Json& j);

Json to_json(const ModulusSolution& sol, bool include_density = false);
Json to_json(const CroftonReport& rep);
Json to_json(const RefinementReport& rep);
Json to_json(const CorollaryReport& rep);
Json to_json(const LpReport& rep);
Json to_json(const SurfaceReport& rep);
Json to_json(const BoxDimensionReport& rep);
Json to_json(const ScalingReport& rep);
Json to_json(const FubiniReport& rep);
Json to_json(const IntegrateReport& rep);

// one numeric table, comma separated, header first
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace carnot
