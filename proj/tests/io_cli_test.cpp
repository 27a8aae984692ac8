#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dcsplit/cli.hpp"
#include "dcsplit/svg.hpp"
#include "test_helpers.hpp"

using namespace dcsplit;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("dcsplit_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("rational JSON round trip") {
    for (const char* s : {"0", "1", "-3/7", "22/7", "-5"}) {
        Rat r = parse_rat(s);
        CHECK(io::rat_from_json(io::rat_to_json(r)) == r);
    }
    CHECK(io::rat_from_json(io::json(7)) == 7);
    CHECK(parse_rat("6/-8") == make_rat(-3, 4));
}

TEST_CASE("complex and function JSON round trips") {
    CPWL f = test::median_fixture();
    io::json jf = io::function_to_json(f);
    CPWL back = io::function_from_json(jf);
    CHECK(complexes_equal(f.complex(), back.complex()));
    test::RatSampler sampler(3);
    for (int t = 0; t < 20; ++t) {
        RatVec x = sampler.point(2);
        CHECK(back.evaluate(x) == f.evaluate(x));
    }
    // parse ∘ print = id on the serialized form
    CHECK(io::function_to_json(back) == jf);
    io::json jc = io::complex_to_json(f.complex());
    CHECK(io::complex_to_json(*io::complex_from_json(jc)) == jc);
}

TEST_CASE("weights, set function, graph, fan and network round trips") {
    CPWL f = test::median_fixture();
    Weights w = weights(f);
    io::json jw = io::weights_to_json(f.complex(), w);
    CHECK(io::weights_from_json(f.complex(), jw).omega == w.omega);

    SetFunction F = io::set_function_from_json(
        io::load_json_file(test::fixture_path("setfn_max2.json")));
    io::json js = io::set_function_to_json(F);
    CHECK(io::set_function_from_json(js) == F);
    CHECK(io::set_function_to_json(io::set_function_from_json(js)) == js);

    WeightedGraph g = io::graph_from_json(
        io::load_json_file(test::fixture_path("cut_triangle.json")));
    io::json jg = io::graph_to_json(g);
    CHECK(io::graph_to_json(io::graph_from_json(jg)) == jg);

    WeightedFan2D fan =
        io::fan2d_from_json(io::load_json_file(test::fixture_path("tran_fan.json")));
    io::json jfan = io::fan2d_to_json(fan);
    CHECK(io::fan2d_to_json(io::fan2d_from_json(jfan)) == jfan);

    DecompPoint dec = solve_reduced(f);
    ReluNetwork net = dc_network(f, dec, 2, 2);
    io::json jn = io::network_to_json(net);
    ReluNetwork back = io::network_from_json(jn);
    CHECK(io::network_to_json(back) == jn);
    test::RatSampler sampler(5);
    for (int t = 0; t < 10; ++t) {
        RatVec x = sampler.point(2);
        CHECK(evaluate_network(back, x) == evaluate_network(net, x));
    }
    io::json jfloat = io::network_to_json(net, true);
    CHECK(jfloat.at("dtype") == "f64");
}

TEST_CASE("function JSON can reference its complex by path") {
    TempDir dir;
    CPWL f = test::median_fixture();
    io::write_json_file(dir.file("fan.json"), io::complex_to_json(f.complex()));
    io::json jf = io::function_to_json(f);
    jf["complex"] = "fan.json";
    io::write_json_file(dir.file("fn.json"), jf);
    CPWL loaded = io::function_from_json(io::load_json_file(dir.file("fn.json")),
                                         dir.path.string());
    CHECK(complexes_equal(loaded.complex(), f.complex()));
}

TEST_CASE("cli: validate, weights, decompose on the median fixture") {
    TempDir dir;
    std::string median = test::fixture_path("median.json");
    CHECK(run_cli({"validate", median, "-o", dir.file("v.json")}) == 0);
    io::json v = io::load_json_file(dir.file("v.json"));
    CHECK(v.at("valid") == true);

    CHECK(run_cli({"weights", median, "-o", dir.file("w.json")}) == 0);
    io::json w = io::load_json_file(dir.file("w.json"));
    CHECK(w.at("0") == "1");
    CHECK(w.at("4") == "-1");

    CHECK(run_cli({"decompose", median, "--enumerate", "--minimal", "-o",
                   dir.file("d.json")}) == 0);
    io::json d = io::load_json_file(dir.file("d.json"));
    CHECK(d.at("reduced").at("flags").at("vertex") == true);
    CHECK(d.at("reduced").at("flags").at("reduced") == true);
    CHECK(d.at("vertices").size() == 1);
    CHECK(d.at("minimal").size() == 1);
    CHECK(d.at("minimal")[0].at("pieces") == io::json::array({3, 3}));
}

TEST_CASE("cli: check flags for an exact decomposition") {
    TempDir dir;
    CPWL f = test::median_fixture();
    DecompPoint dec = solve_reduced(f);
    io::write_json_file(dir.file("f.json"), io::function_to_json(f));
    io::write_json_file(dir.file("g.json"), io::function_to_json(dec.g));
    io::write_json_file(dir.file("h.json"), io::function_to_json(dec.h));
    CHECK(run_cli({"check", dir.file("f.json"), dir.file("g.json"), dir.file("h.json"),
                   "-o", dir.file("c.json")}) == 0);
    io::json c = io::load_json_file(dir.file("c.json"));
    CHECK(c.at("vertex") == true);
    CHECK(c.at("reduced") == true);
    CHECK(c.at("certificate") == true);
}

TEST_CASE("cli: constructions and exit codes") {
    TempDir dir;
    CHECK(run_cli({"construct", "tran2d", test::fixture_path("tran_fan.json"), "-o",
                   dir.file("t.json")}) == 0);
    io::json t = io::load_json_file(dir.file("t.json"));
    CHECK(t.at("new_ray") == io::json::array({-1, -1}));
    CHECK(t.at("closing_weight") == "1");

    CHECK(run_cli({"construct", "order-stat", "--n", "3", "--k", "2", "-o",
                   dir.file("o.json")}) == 0);
    io::json o = io::load_json_file(dir.file("o.json"));
    CHECK(o.at("certificate") == true);

    CHECK(run_cli({"construct", "sign-split", test::fixture_path("sign_split_terms.json"),
                   "-o", dir.file("s.json")}) == 0);
    io::json s = io::load_json_file(dir.file("s.json"));
    CHECK(s.at("certificate") == true);

    CHECK(run_cli({"construct", "hyperplane-ext", test::fixture_path("median.json"), "-o",
                   dir.file("he.json")}) == 0);
    CHECK(run_cli({"construct", "local-max", test::fixture_path("median.json"), "-o",
                   dir.file("lm.json")}) == 0);
    io::json he = io::load_json_file(dir.file("he.json"));
    CHECK(he.at("flags").at("vertex") == false);

    // caps exceeded -> exit 3
    CHECK(run_cli({"--caps", "order_n=2", "construct", "order-stat", "--n", "3", "--k",
                   "2"}) == 3);
    // usage error -> 64
    CHECK(run_cli({"construct"}) == 64);
    CHECK(run_cli({}) == 64);
}

TEST_CASE("cli: glue exit codes") {
    TempDir dir;
    CHECK(run_cli({"glue", test::fixture_path("gluing_counterexample.json"), "-o",
                   dir.file("g1.json")}) == 2);
    io::json g1 = io::load_json_file(dir.file("g1.json"));
    CHECK(g1.at("feasible") == false);
    CHECK(!g1.at("certificate").empty());
    CHECK(run_cli({"glue", test::fixture_path("gluing_max_fan.json"), "-o",
                   dir.file("g2.json")}) == 0);
}

TEST_CASE("cli: submod and nn round trips") {
    TempDir dir;
    CHECK(run_cli({"submod", "cut", test::fixture_path("cut_triangle.json"), "-o",
                   dir.file("cut.json")}) == 0);
    CHECK(run_cli({"submod", "issubmodular", dir.file("cut.json"), "-o",
                   dir.file("sub.json")}) == 0);
    CHECK(io::load_json_file(dir.file("sub.json")).at("submodular") == true);
    CHECK(run_cli({"submod", "lovasz", dir.file("cut.json"), "-o", dir.file("lov.json")}) ==
          0);
    CHECK(run_cli({"submod", "tosetfn", dir.file("lov.json"), "-o", dir.file("back.json")}) ==
          0);
    SetFunction F = io::set_function_from_json(io::load_json_file(dir.file("cut.json")));
    SetFunction back = io::set_function_from_json(io::load_json_file(dir.file("back.json")));
    CHECK(F == back);
    CHECK(run_cli({"submod", "decompose", dir.file("cut.json"), "-o", dir.file("dec.json")}) ==
          0);
    CHECK(run_cli({"submod", "greedy", dir.file("cut.json"), "-o", dir.file("gr.json")}) == 0);
    io::json gr = io::load_json_file(dir.file("gr.json"));
    CHECK(gr.at("count").get<int>() == 6);

    CHECK(run_cli({"nn", "dc", test::fixture_path("median.json"), "--r", "2", "--s", "2",
                   "-o", dir.file("net.json")}) == 0);
    CHECK(run_cli({"nn", "stats", dir.file("net.json"), "-o", dir.file("st.json")}) == 0);
    io::json st = io::load_json_file(dir.file("st.json"));
    CHECK(st.at("depth") == 3);
    CHECK(run_cli({"nn", "verify", dir.file("net.json"), test::fixture_path("median.json"),
                   "--samples", "50", "--seed", "7", "-o", dir.file("vr.json")}) == 0);
    io::json vr = io::load_json_file(dir.file("vr.json"));
    CHECK(vr.at("pass") == true);
}

TEST_CASE("cli: plot emits solid and dashed rays") {
    TempDir dir;
    CHECK(run_cli({"plot", test::fixture_path("median.json"), "-o", dir.file("m.svg")}) == 0);
    std::string svg = slurp(dir.file("m.svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    // 3 solid positive rays, 3 dashed negative rays on the median
    int dashed = 0, lines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<line", pos)) != std::string::npos; ++pos)
        ++lines;
    for (std::size_t pos = 0; (pos = svg.find("stroke-dasharray=\"8,5\"", pos)) !=
                              std::string::npos;
         ++pos)
        ++dashed;
    CHECK(lines == 6);
    CHECK(dashed == 3);
    // Euclidean weights print symbolically
    CHECK(svg.find("1*sqrt(2)") != std::string::npos);
    CHECK(run_cli({"plot", test::fixture_path("tran_fan.json"), "-o", dir.file("t.svg")}) ==
          0);
    CHECK(slurp(dir.file("t.svg")).find("-1/3") != std::string::npos);
}

TEST_CASE("cli: DCSPLIT_CAPS environment override") {
    ::setenv("DCSPLIT_CAPS", "order_n=2", 1);
    int code = run_cli({"construct", "order-stat", "--n", "3", "--k", "2"});
    ::unsetenv("DCSPLIT_CAPS");
    CHECK(code == 3);
}

TEST_CASE("euclidean weight labels") {
    CHECK(euclidean_weight_label(Rat(1), test::ivec({1, 1})) == "1*sqrt(2)");
    CHECK(euclidean_weight_label(Rat(1), test::ivec({0, 1})) == "1");
    CHECK(euclidean_weight_label(make_rat(-1, 3), test::ivec({1, 2})) == "-1/3*sqrt(5)");
}
