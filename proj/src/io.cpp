#include "dcsplit/io.hpp"

#include <filesystem>
#include <fstream>

#include "dcsplit/error.hpp"

namespace dcsplit::io {

json rat_to_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    fail(ErrorCode::InvalidInput, "expected a rational as \"p/q\" string or integer");
}

namespace {

IntVec int_vec_from_json(const json& j) {
    IntVec v;
    for (const auto& e : j) {
        if (e.is_number_integer()) v.push_back(Int(e.get<long long>()));
        else if (e.is_string()) v.push_back(Int(e.get<std::string>()));
        else fail(ErrorCode::InvalidInput, "expected an integer vector entry");
    }
    return v;
}

json int_vec_to_json(const IntVec& v) {
    json out = json::array();
    for (const auto& e : v) {
        if (e >= std::numeric_limits<long long>::min() &&
            e <= std::numeric_limits<long long>::max())
            out.push_back(e.convert_to<long long>());
        else
            out.push_back(e.str());
    }
    return out;
}

RatVec rat_vec_from_json(const json& j) {
    RatVec v;
    for (const auto& e : j) v.push_back(rat_from_json(e));
    return v;
}

json rat_vec_to_json(const RatVec& v) {
    json out = json::array();
    for (const auto& e : v) out.push_back(rat_to_json(e));
    return out;
}

}  // namespace

json complex_to_json(const Complex& c) {
    json out;
    out["dim"] = c.dim();
    out["cells"] = json::array();
    for (const auto& cell : c.cells()) {
        json jc;
        jc["id"] = cell.id;
        jc["ineqs"] = json::array();
        for (const auto& q : cell.ineqs) {
            json row = int_vec_to_json(q.normal);
            row.push_back(rat_to_json(q.rhs));
            jc["ineqs"].push_back(std::move(row));
        }
        out["cells"].push_back(std::move(jc));
    }
    out["facets"] = json::array();
    for (const auto& f : c.facets()) {
        json jf;
        jf["id"] = f.id;
        jf["normal"] = int_vec_to_json(f.plane.normal);
        jf["offset"] = rat_to_json(f.plane.offset);
        jf["pos"] = f.pos_cell;
        jf["neg"] = f.neg_cell;
        out["facets"].push_back(std::move(jf));
    }
    return out;
}

ComplexPtr complex_from_json(const json& j) {
    if (!j.contains("dim") || !j.contains("cells"))
        fail(ErrorCode::InvalidInput, "complex JSON needs \"dim\" and \"cells\"");
    const int dim = j.at("dim").get<int>();
    std::vector<Cell> cells;
    for (const auto& jc : j.at("cells")) {
        Cell cell;
        cell.id = jc.at("id").get<int>();
        for (const auto& row : jc.at("ineqs")) {
            if (row.size() != static_cast<std::size_t>(dim) + 1)
                fail(ErrorCode::InvalidInput, "inequality row must have dim+1 entries");
            IntVec nu;
            for (int t = 0; t < dim; ++t) {
                const auto& e = row[t];
                if (e.is_number_integer()) nu.push_back(Int(e.get<long long>()));
                else if (e.is_string()) {
                    Rat r = parse_rat(e.get<std::string>());
                    if (!is_integer(r))
                        fail(ErrorCode::InvalidInput, "inequality normals must be integral");
                    nu.push_back(numerator(r));
                } else {
                    fail(ErrorCode::InvalidInput, "bad inequality entry");
                }
            }
            cell.ineqs.push_back(Inequality{std::move(nu), rat_from_json(row[dim])});
        }
        cells.push_back(std::move(cell));
    }
    std::vector<Facet> facets;
    if (j.contains("facets")) {
        for (const auto& jf : j.at("facets")) {
            Facet f;
            f.id = jf.at("id").get<int>();
            f.plane.normal = int_vec_from_json(jf.at("normal"));
            f.plane.offset = rat_from_json(jf.at("offset"));
            f.pos_cell = jf.at("pos").get<int>();
            f.neg_cell = jf.at("neg").get<int>();
            facets.push_back(std::move(f));
        }
    }
    return std::make_shared<Complex>(dim, std::move(cells), std::move(facets));
}

json function_to_json(const CPWL& f) {
    json out;
    out["complex"] = complex_to_json(f.complex());
    json pieces = json::object();
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        json jp;
        jp["a"] = rat_vec_to_json(f.piece(i).a);
        jp["b"] = rat_to_json(f.piece(i).b);
        pieces[std::to_string(f.complex().cells()[i].id)] = std::move(jp);
    }
    out["pieces"] = std::move(pieces);
    return out;
}

CPWL function_from_json(const json& j, const std::string& base_dir) {
    if (!j.contains("complex") || !j.contains("pieces"))
        fail(ErrorCode::InvalidInput, "function JSON needs \"complex\" and \"pieces\"");
    ComplexPtr complex;
    if (j.at("complex").is_string()) {
        std::filesystem::path p = j.at("complex").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        complex = complex_from_json(load_json_file(p.string()));
    } else {
        complex = complex_from_json(j.at("complex"));
    }
    std::vector<AffineMap> pieces(complex->cells().size());
    std::vector<bool> seen(pieces.size(), false);
    for (const auto& [key, jp] : j.at("pieces").items()) {
        int idx = complex->cell_index(std::stoi(key));
        if (idx < 0) fail(ErrorCode::InvalidInput, "piece for unknown cell id " + key);
        pieces[idx].a = rat_vec_from_json(jp.at("a"));
        pieces[idx].b = rat_from_json(jp.at("b"));
        seen[idx] = true;
    }
    for (bool s : seen)
        if (!s) fail(ErrorCode::InvalidInput, "every maximal cell needs a piece");
    return CPWL(std::move(complex), std::move(pieces));
}

json weights_to_json(const Complex& c, const Weights& w) {
    json out = json::object();
    for (std::size_t k = 0; k < w.omega.size(); ++k)
        out[std::to_string(c.facets()[k].id)] = rat_to_json(w.omega[k]);
    return out;
}

Weights weights_from_json(const Complex& c, const json& j) {
    Weights w;
    w.omega.assign(c.facets().size(), Rat(0));
    for (const auto& [key, val] : j.items()) {
        int idx = c.facet_index(std::stoi(key));
        if (idx < 0) fail(ErrorCode::InvalidInput, "weight for unknown facet id " + key);
        w.omega[idx] = rat_from_json(val);
    }
    return w;
}

json decomposition_to_json(const DecompPoint& p, const DecompositionFlags& flags,
                           const std::string& method) {
    json out;
    out["g"] = function_to_json(p.g);
    out["h"] = function_to_json(p.h);
    out["weights_g"] = weights_to_json(p.g.complex(), p.wg);
    out["weights_h"] = weights_to_json(p.h.complex(), p.wh);
    json jf;
    jf["vertex"] = flags.vertex;
    jf["reduced"] = flags.reduced;
    if (flags.has_minimal) jf["minimal"] = flags.minimal;
    out["flags"] = std::move(jf);
    out["pieces"] = json::array({coarsen(p.g).piece_count, coarsen(p.h).piece_count});
    if (!method.empty()) out["method"] = method;
    return out;
}

json set_function_to_json(const SetFunction& F) {
    json out;
    out["n"] = F.n();
    json values = json::object();
    for (unsigned mask = 0; mask < F.table_size(); ++mask)
        values[std::to_string(mask)] = rat_to_json(F.value(mask));
    out["values"] = std::move(values);
    return out;
}

SetFunction set_function_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    if (n < 1 || n > 30) fail(ErrorCode::InvalidInput, "set function n out of range");
    RatVec values(1u << n, Rat(0));
    for (const auto& [key, val] : j.at("values").items()) {
        unsigned long mask = std::stoul(key);
        if (mask >= values.size()) fail(ErrorCode::InvalidInput, "subset mask out of range");
        values[mask] = rat_from_json(val);
    }
    return SetFunction(n, std::move(values));
}

json graph_to_json(const WeightedGraph& g) {
    json out;
    out["n"] = g.n;
    out["edges"] = json::array();
    for (const auto& e : g.edges)
        out["edges"].push_back(json::array({e.u, e.v, rat_to_json(e.weight)}));
    return out;
}

WeightedGraph graph_from_json(const json& j) {
    WeightedGraph g;
    g.n = j.at("n").get<int>();
    for (const auto& je : j.at("edges")) {
        if (je.size() != 3) fail(ErrorCode::InvalidInput, "edge must be [u, v, weight]");
        g.edges.push_back({je[0].get<int>(), je[1].get<int>(), rat_from_json(je[2])});
    }
    return g;
}

json fan2d_to_json(const WeightedFan2D& fan) {
    json out;
    out["rays"] = json::array();
    for (const auto& r : fan.rays) out["rays"].push_back(int_vec_to_json(r));
    json w = json::array();
    for (const auto& v : fan.weights) w.push_back(rat_to_json(v));
    out["weights"] = std::move(w);
    return out;
}

WeightedFan2D fan2d_from_json(const json& j) {
    WeightedFan2D fan;
    for (const auto& r : j.at("rays")) fan.rays.push_back(int_vec_from_json(r));
    for (const auto& w : j.at("weights")) fan.weights.push_back(rat_from_json(w));
    if (fan.rays.size() != fan.weights.size())
        fail(ErrorCode::InvalidInput, "one weight per ray required");
    return fan;
}

GluingInput gluing_input_from_json(const json& j, const Caps&) {
    if (j.contains("complex")) {
        ComplexPtr c = complex_from_json(j.at("complex"));
        Weights w = weights_from_json(*c, j.at("weights"));
        return gluing_input_from_complex(*c, w);
    }
    if (!j.contains("rays") || !j.contains("facets"))
        fail(ErrorCode::InvalidInput,
             "gluing input needs either {complex, weights} or {rays, facets}");
    std::map<int, IntVec> gens;
    for (const auto& jr : j.at("rays"))
        gens[jr.at("id").get<int>()] = primitive_normal(int_vec_from_json(jr.at("gen")));
    std::map<int, std::vector<GluingStar::Arm>> arms_of_ray;
    for (const auto& jf : j.at("facets")) {
        int id = jf.at("id").get<int>();
        const auto& rays = jf.at("rays");
        if (rays.size() != 2) fail(ErrorCode::InvalidInput, "facet needs exactly two rays");
        int a = rays[0].get<int>(), b = rays[1].get<int>();
        Rat weight = rat_from_json(jf.at("weight"));
        if (!gens.count(a) || !gens.count(b))
            fail(ErrorCode::InvalidInput, "facet references an unknown ray");
        if (weight <= 0) continue;
        arms_of_ray[a].push_back({id, gens.at(b), weight});
        arms_of_ray[b].push_back({id, gens.at(a), weight});
    }
    GluingInput input;
    for (const auto& [id, arms] : arms_of_ray) {
        GluingStar star;
        star.ray = gens.at(id);
        star.arms = arms;
        input.stars.push_back(std::move(star));
    }
    return input;
}

json network_to_json(const ReluNetwork& net, bool float_export) {
    json out;
    out["input_dim"] = net.input_dim;
    if (float_export) out["dtype"] = "f64";
    out["layers"] = json::array();
    for (const auto& layer : net.layers) {
        json jl;
        jl["relu"] = layer.relu;
        json w = json::array();
        for (const auto& row : layer.weight) {
            if (float_export) {
                json r = json::array();
                for (const auto& v : row) r.push_back(v.convert_to<double>());
                w.push_back(std::move(r));
            } else {
                w.push_back(rat_vec_to_json(row));
            }
        }
        jl["W"] = std::move(w);
        if (float_export) {
            json b = json::array();
            for (const auto& v : layer.bias) b.push_back(v.convert_to<double>());
            jl["b"] = std::move(b);
        } else {
            jl["b"] = rat_vec_to_json(layer.bias);
        }
        out["layers"].push_back(std::move(jl));
    }
    return out;
}

ReluNetwork network_from_json(const json& j) {
    if (j.value("dtype", std::string()) == "f64")
        fail(ErrorCode::InvalidInput, "float networks cannot be re-imported exactly");
    ReluNetwork net;
    net.input_dim = j.at("input_dim").get<int>();
    for (const auto& jl : j.at("layers")) {
        Layer layer;
        layer.relu = jl.at("relu").get<bool>();
        for (const auto& row : jl.at("W")) layer.weight.push_back(rat_vec_from_json(row));
        layer.bias = rat_vec_from_json(jl.at("b"));
        net.layers.push_back(std::move(layer));
    }
    return net;
}

TermList terms_from_json(const json& j) {
    TermList out;
    out.dim = j.at("dim").get<int>();
    for (const auto& jt : j.at("terms")) {
        HyperplaneTerm t;
        t.lambda = rat_from_json(jt.at("lambda"));
        t.a = rat_vec_from_json(jt.at("a"));
        t.b = rat_from_json(jt.at("b"));
        t.c = rat_vec_from_json(jt.at("c"));
        t.d = rat_from_json(jt.at("d"));
        if (static_cast<int>(t.a.size()) != out.dim || static_cast<int>(t.c.size()) != out.dim)
            fail(ErrorCode::InvalidInput, "term dimension mismatch");
        out.terms.push_back(std::move(t));
    }
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidInput, "cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidInput, "cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace dcsplit::io
