#include "dcsplit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dcsplit/error.hpp"
#include "dcsplit/io.hpp"
#include "dcsplit/svg.hpp"

namespace dcsplit {

namespace {

using io::json;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::CapExceeded:
            return 3;
        case ErrorCode::Infeasible:
        case ErrorCode::NotRegular:
        case ErrorCode::NotBalanced:
        case ErrorCode::NotConvex:
        case ErrorCode::NotSubmodular:
        case ErrorCode::DecompositionMismatch:
        case ErrorCode::ComplexMismatch:
            return 2;
        case ErrorCode::Internal:
            return 70;
        default:
            return 1;
    }
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) fail(ErrorCode::InvalidInput, "cannot write " + out_path);
        out << text;
    }
}

void emit_json(const std::string& out_path, const json& j) { emit(out_path, j.dump(2) + "\n"); }

std::string dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

CPWL load_function(const std::string& path) {
    return io::function_from_json(io::load_json_file(path), dir_of(path));
}

RatVec parse_objective(const std::string& spec, std::size_t facets) {
    RatVec obj;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) obj.push_back(parse_rat(item));
    if (obj.size() == 1) obj.assign(facets, obj[0]);
    if (obj.size() != facets)
        fail(ErrorCode::InvalidInput, "objective needs one weight per facet");
    return obj;
}

json decomposition_report(const DecompPoint& p, const std::string& method,
                          bool minimal_flag = false, bool has_minimal = false) {
    io::DecompositionFlags flags;
    flags.vertex = is_vertex(p);
    flags.reduced = is_reduced(p);
    flags.minimal = minimal_flag;
    flags.has_minimal = has_minimal;
    return io::decomposition_to_json(p, flags, method);
}

struct CliState {
    Caps caps = Caps::from_env();
    std::string caps_override;
    std::string out_path;

    void finalize() {
        if (!caps_override.empty()) caps.apply_overrides(caps_override);
    }
};

int run_validate(CliState& state, const std::string& path) {
    ComplexPtr c = io::complex_from_json(io::load_json_file(path));
    ValidationReport report = validate_complex(*c, state.caps);
    json out;
    out["valid"] = report.valid();
    out["issues"] = json::array();
    for (const auto& issue : report.issues)
        out["issues"].push_back(json{{"kind", issue.kind}, {"detail", issue.detail}});
    emit_json(state.out_path, out);
    return report.valid() ? 0 : 1;
}

int run_weights(CliState& state, const std::string& path) {
    CPWL f = load_function(path);
    ValidationReport report = validate_continuity(f);
    if (!report.valid()) {
        json out;
        out["valid"] = false;
        out["issues"] = json::array();
        for (const auto& issue : report.issues)
            out["issues"].push_back(json{{"kind", issue.kind}, {"detail", issue.detail}});
        emit_json(state.out_path, out);
        return 1;
    }
    emit_json(state.out_path, io::weights_to_json(f.complex(), weights(f)));
    return 0;
}

int run_decompose(CliState& state, const std::string& path, const std::string& objective,
                  bool do_enumerate, bool do_minimal) {
    CPWL f = load_function(path);
    json out;
    std::optional<RatVec> obj;
    if (!objective.empty()) obj = parse_objective(objective, f.complex().facets().size());
    DecompPoint reduced = solve_reduced(f, obj ? &*obj : nullptr);
    out["reduced"] = decomposition_report(reduced, "lp");
    if (do_enumerate || do_minimal) {
        std::vector<DecompPoint> vertices = enumerate_decompositions(f, state.caps);
        if (do_enumerate) {
            out["vertices"] = json::array();
            for (const auto& v : vertices)
                out["vertices"].push_back(decomposition_report(v, "vertex"));
        }
        if (do_minimal) {
            out["minimal"] = json::array();
            for (const auto& entry : minimal_set(f, state.caps))
                out["minimal"].push_back(
                    decomposition_report(entry.point, "vertex", true, true));
        }
    }
    emit_json(state.out_path, out);
    return 0;
}

int run_check(CliState& state, const std::string& fpath, const std::string& gpath,
              const std::string& hpath) {
    CPWL f = load_function(fpath);
    CPWL g = load_function(gpath);
    CPWL h = load_function(hpath);
    bool certificate = unique_vertex_certificate(f, g, h);
    Weights wg = weights(g), wh = weights(h);
    DecompPoint p{g, h, wg, wh};
    json out;
    out["vertex"] = is_vertex(p);
    out["reduced"] = is_reduced(p);
    out["certificate"] = certificate;
    emit_json(state.out_path, out);
    return 0;
}

int run_construct(CliState& state, const std::string& method, const std::string& path,
                  int n, int k) {
    json out;
    if (method == "hyperplane-ext") {
        ExtensionResult r = hyperplane_extension(load_function(path), state.caps);
        out = decomposition_report(r.decomposition, "hyperplane-ext");
    } else if (method == "local-max") {
        LocalMaximaResult r = local_maxima_decomposition(load_function(path), state.caps);
        out = decomposition_report(r.decomposition, "local-max");
    } else if (method == "tran2d") {
        Tran2DResult r = tran2d_minimal(io::fan2d_from_json(io::load_json_file(path)));
        out["method"] = "tran2d";
        out["fan"] = io::fan2d_to_json(r.fan);
        out["augmented"] = io::fan2d_to_json(r.augmented);
        json wg = json::array(), wh = json::array();
        for (const auto& v : r.wg) wg.push_back(io::rat_to_json(v));
        for (const auto& v : r.wh) wh.push_back(io::rat_to_json(v));
        out["wg"] = std::move(wg);
        out["wh"] = std::move(wh);
        out["new_ray"] = r.new_ray ? json::array({r.new_ray->at(0).convert_to<long long>(),
                                                  r.new_ray->at(1).convert_to<long long>()})
                                   : json();
        out["closing_weight"] = io::rat_to_json(r.closing_weight);
    } else if (method == "sign-split") {
        io::TermList terms = io::terms_from_json(io::load_json_file(path));
        SignSplitResult r = sign_split(terms.terms, terms.dim, state.caps);
        out = decomposition_report(r.decomposition, "sign-split");
        out["f"] = io::function_to_json(r.f);
        out["certificate"] =
            unique_vertex_certificate(r.f, r.decomposition.g, r.decomposition.h);
    } else if (method == "order-stat") {
        OrderStatisticResult r = order_statistic(n, k, state.caps);
        out = decomposition_report(
            DecompPoint{r.g, r.h, weights(r.g), weights(r.h)}, "order-stat");
        out["f"] = io::function_to_json(r.f);
        out["certificate"] = unique_vertex_certificate(r.f, r.g, r.h);
    } else {
        fail(ErrorCode::InvalidInput, "unknown construction " + method);
    }
    emit_json(state.out_path, out);
    return 0;
}

int run_glue(CliState& state, const std::string& path) {
    GluingInput input = io::gluing_input_from_json(io::load_json_file(path), state.caps);
    GluingResult r = polygon_gluing(input);
    json out;
    out["feasible"] = r.feasible;
    out["polygons"] = json::array();
    for (const auto& poly : r.polygons) {
        json jp;
        jp["ray"] = json::array({poly.ray[0].convert_to<long long>(),
                                 poly.ray[1].convert_to<long long>(),
                                 poly.ray[2].convert_to<long long>()});
        jp["edges"] = json::array();
        for (const auto& [facet, edge] : poly.edges) {
            json je;
            je["facet"] = facet;
            je["vector"] = json::array(
                {io::rat_to_json(edge[0]), io::rat_to_json(edge[1]), io::rat_to_json(edge[2])});
            jp["edges"].push_back(std::move(je));
        }
        out["polygons"].push_back(std::move(jp));
    }
    if (r.feasible) {
        out["placements"] = json::array();
        for (const auto& [ray, x] : r.placements) {
            json jp;
            jp["ray"] = json::array({ray[0].convert_to<long long>(),
                                     ray[1].convert_to<long long>(),
                                     ray[2].convert_to<long long>()});
            jp["point"] = json::array(
                {io::rat_to_json(x[0]), io::rat_to_json(x[1]), io::rat_to_json(x[2])});
            out["placements"].push_back(std::move(jp));
        }
    } else {
        json cert = json::array();
        for (const auto& v : r.certificate) cert.push_back(io::rat_to_json(v));
        out["certificate"] = std::move(cert);
    }
    emit_json(state.out_path, out);
    return r.feasible ? 0 : 2;
}

int run_submod(CliState& state, const std::string& op, const std::string& path) {
    if (op == "lovasz") {
        SetFunction F = io::set_function_from_json(io::load_json_file(path));
        emit_json(state.out_path, io::function_to_json(lovasz(F, state.caps)));
    } else if (op == "tosetfn") {
        CPWL f = load_function(path);
        emit_json(state.out_path, io::set_function_to_json(to_set_function(f, state.caps)));
    } else if (op == "issubmodular") {
        SetFunction F = io::set_function_from_json(io::load_json_file(path));
        json out;
        out["submodular"] = is_submodular(F, state.caps);
        emit_json(state.out_path, out);
    } else if (op == "decompose") {
        SetFunction F = io::set_function_from_json(io::load_json_file(path));
        SetDecomposition dec = decompose_set_function(F, state.caps);
        json out;
        out["G"] = io::set_function_to_json(dec.G);
        out["H"] = io::set_function_to_json(dec.H);
        out["flags"] = json{{"vertex", dec.vertex}, {"reduced", dec.reduced}};
        emit_json(state.out_path, out);
    } else if (op == "cut") {
        WeightedGraph g = io::graph_from_json(io::load_json_file(path));
        emit_json(state.out_path, io::set_function_to_json(cut_function(g)));
    } else if (op == "greedy") {
        SetFunction F = io::set_function_from_json(io::load_json_file(path));
        std::vector<RatVec> vertices = greedy_vertices(F, state.caps);
        json out;
        out["count"] = vertices.size();
        out["vertices"] = json::array();
        for (const auto& v : vertices) {
            json jv = json::array();
            for (const auto& x : v) jv.push_back(io::rat_to_json(x));
            out["vertices"].push_back(std::move(jv));
        }
        emit_json(state.out_path, out);
    } else {
        fail(ErrorCode::InvalidInput, "unknown submod operation " + op);
    }
    return 0;
}

int run_nn(CliState& state, const std::string& op, const std::vector<std::string>& paths,
           int r, int s, int samples, std::uint64_t seed, bool float_export) {
    if (op == "build") {
        CPWL f = load_function(paths.at(0));
        ReluNetwork net = grouped_convex(f, r, s);
        json out = io::network_to_json(net, float_export);
        NetworkStats st = stats(net);
        out["stats"] = json{{"depth", st.depth}, {"width", st.width}, {"size", st.size}};
        emit_json(state.out_path, out);
    } else if (op == "dc") {
        CPWL f = load_function(paths.at(0));
        DecompPoint dec = solve_reduced(f);
        ReluNetwork net = dc_network(f, dec, r, s);
        json out = io::network_to_json(net, float_export);
        NetworkStats st = stats(net);
        out["stats"] = json{{"depth", st.depth}, {"width", st.width}, {"size", st.size}};
        emit_json(state.out_path, out);
    } else if (op == "verify") {
        ReluNetwork net = io::network_from_json(io::load_json_file(paths.at(0)));
        CPWL f = load_function(paths.at(1));
        VerifyReport report = verify_network(net, f, samples, seed);
        json out;
        out["samples"] = report.samples_checked;
        out["failures"] = report.failures;
        out["pass"] = report.all_exact();
        emit_json(state.out_path, out);
        return report.all_exact() ? 0 : 1;
    } else if (op == "stats") {
        ReluNetwork net = io::network_from_json(io::load_json_file(paths.at(0)));
        NetworkStats st = stats(net);
        emit_json(state.out_path,
                  json{{"depth", st.depth}, {"width", st.width}, {"size", st.size}});
    } else {
        fail(ErrorCode::InvalidInput, "unknown nn operation " + op);
    }
    return 0;
}

int run_plot(CliState& state, const std::string& path) {
    json j = io::load_json_file(path);
    WeightedFan2D fan;
    if (j.contains("rays")) {
        fan = io::fan2d_from_json(j);
        fan = complete_fan2d(fan);
    } else {
        CPWL f = io::function_from_json(j, dir_of(path));
        fan = fan2d_of_cpwl(f);
    }
    emit(state.out_path, render_fan_svg(fan));
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"exact difference-of-convex decompositions of CPWL functions"};
    app.require_subcommand(1);
    CliState state;
    app.add_option("--caps", state.caps_override, "cap overrides, e.g. dim=4,enum_dim=12");
    app.add_option("-o,--out", state.out_path, "write output to a file instead of stdout");

    std::string path, path_g, path_h, objective, method, op;
    std::vector<std::string> paths;
    int n = 3, k = 2, r = 1, s = 1, samples = 100;
    std::uint64_t seed = 0;
    bool do_enumerate = false, do_minimal = false, float_export = false;

    auto* validate = app.add_subcommand("validate", "validate a complex");
    validate->add_option("complex", path)->required();

    auto* weights_cmd = app.add_subcommand("weights", "scaled weight function of a CPWL function");
    weights_cmd->add_option("function", path)->required();

    auto* decompose = app.add_subcommand("decompose", "reduced decomposition via exact LP");
    decompose->add_option("function", path)->required();
    decompose->add_option("--objective", objective, "per-facet positive weights, comma separated");
    decompose->add_flag("--enumerate", do_enumerate, "enumerate all vertices");
    decompose->add_flag("--minimal", do_minimal, "report the Pareto-minimal vertices");

    auto* check = app.add_subcommand("check", "flags for a claimed decomposition f = g - h");
    check->add_option("f_file", path)->required();
    check->add_option("g_file", path_g)->required();
    check->add_option("h_file", path_h)->required();

    auto* construct = app.add_subcommand("construct", "named decomposition constructions");
    construct->add_option("method", method,
                          "hyperplane-ext|local-max|tran2d|sign-split|order-stat")
        ->required();
    construct->add_option("input", path, "input file (not used by order-stat)");
    construct->add_option("--n", n, "order statistic ground size");
    construct->add_option("--k", k, "order statistic rank");

    auto* glue = app.add_subcommand("glue", "polygon gluing feasibility for a 3D fan");
    glue->add_option("fan", path)->required();

    auto* submod = app.add_subcommand("submod", "set function bridge");
    submod->add_option("op", op, "lovasz|tosetfn|issubmodular|decompose|cut|greedy")
        ->required();
    submod->add_option("input", path)->required();

    auto* nn = app.add_subcommand("nn", "ReLU network emission and verification");
    nn->add_option("op", op, "build|dc|verify|stats")->required();
    nn->add_option("inputs", paths, "input files");
    nn->add_option("--r", r, "number of groups");
    nn->add_option("--s", s, "group size bound");
    nn->add_option("--samples", samples, "verification sample count");
    nn->add_option("--seed", seed, "verification sampling seed");
    nn->add_flag("--float", float_export, "emit a float64 network");

    auto* plot = app.add_subcommand("plot", "static SVG of a 2D fan or function");
    plot->add_option("input", path)->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        state.finalize();
        if (validate->parsed()) return run_validate(state, path);
        if (weights_cmd->parsed()) return run_weights(state, path);
        if (decompose->parsed())
            return run_decompose(state, path, objective, do_enumerate, do_minimal);
        if (check->parsed()) return run_check(state, path, path_g, path_h);
        if (construct->parsed()) return run_construct(state, method, path, n, k);
        if (glue->parsed()) return run_glue(state, path);
        if (submod->parsed()) return run_submod(state, op, path);
        if (nn->parsed()) return run_nn(state, op, paths, r, s, samples, seed, float_export);
        if (plot->parsed()) return run_plot(state, path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}

}  // namespace dcsplit
