#ifndef DISCHULL_JSON_IO_HPP
#define DISCHULL_JSON_IO_HPP

#include <string>

#include "dischull/fatten.hpp"
#include "dischull/rhsolve.hpp"
#include "json.hpp"

namespace dischull {

using json = nlohmann::json;

// All emitted documents carry "schema": "disc-hull/1".
inline constexpr const char* kSchemaTag = "disc-hull/1";

json tree_to_json(const PlanarTree& t);
PlanarTree tree_from_json(const json& j);

json walk_to_json(const PellicleWalk& w);

json disc_to_json(const AnalyticDisc& d);
AnalyticDisc disc_from_json(const json& j);

json family_to_json(const DiscFamily& f);
DiscFamily family_from_json(const json& j);

json halo_to_json(const Halo& h);
Halo halo_from_json(const json& j);

json neuron_to_json(const Neuron& n);
Neuron neuron_from_json(const json& j);

json core_to_json(const HartogsCoreData& c);
HartogsCoreData core_from_json(const json& j);

// Stores the bivariate coefficient grid of h (per z-degree k, the fitted
// zeta-polynomial) together with g's power series.
json rh_to_json(const RHSolution& h);

json region_to_json(const FattenedRegion& r);

// Stamps the schema tag and writes with 2-space indentation.
void write_json_file(const std::string& path, json j);
json read_json_file(const std::string& path);

}  // namespace dischull

#endif
