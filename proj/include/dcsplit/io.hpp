#ifndef DCSPLIT_IO_HPP
#define DCSPLIT_IO_HPP

#include <string>

#include <json.hpp>

#include "dcsplit/constructions.hpp"
#include "dcsplit/network.hpp"
#include "dcsplit/submodular.hpp"

namespace dcsplit::io {

using nlohmann::json;

/// Rationals travel as "p/q" strings; plain integers are accepted on input.
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json complex_to_json(const Complex& c);
ComplexPtr complex_from_json(const json& j);

/// {"complex": <inline object or file path>, "pieces": {"<cell id>": ...}}
json function_to_json(const CPWL& f);
CPWL function_from_json(const json& j, const std::string& base_dir = "");

json weights_to_json(const Complex& c, const Weights& w);
Weights weights_from_json(const Complex& c, const json& j);

struct DecompositionFlags {
    bool vertex = false;
    bool reduced = false;
    bool minimal = false;
    bool has_minimal = false;
};
json decomposition_to_json(const DecompPoint& p, const DecompositionFlags& flags,
                           const std::string& method = "");

json set_function_to_json(const SetFunction& F);
SetFunction set_function_from_json(const json& j);

json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const json& j);

json fan2d_to_json(const WeightedFan2D& fan);
WeightedFan2D fan2d_from_json(const json& j);

/// Accepts either explicit star data ({"rays", "facets"}) or a full
/// complex with weights ({"complex", "weights"}).
GluingInput gluing_input_from_json(const json& j, const Caps& caps = Caps());

json network_to_json(const ReluNetwork& net, bool float_export = false);
ReluNetwork network_from_json(const json& j);

struct TermList {
    int dim = 0;
    std::vector<HyperplaneTerm> terms;
};
TermList terms_from_json(const json& j);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace dcsplit::io

#endif
