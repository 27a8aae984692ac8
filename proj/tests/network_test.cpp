#include <doctest.h>

#include "dcsplit/error.hpp"
#include "dcsplit/network.hpp"
#include "test_helpers.hpp"

using namespace dcsplit;
using dcsplit::test::rvec;

namespace {

CPWL relu_1d() {
    std::vector<Cell> cells{Cell{0, {Inequality{IntVec{Int(-1)}, Rat(0)}}},
                            Cell{1, {Inequality{IntVec{Int(1)}, Rat(0)}}}};
    std::vector<Facet> facets{Facet{0, Hyperplane{IntVec{Int(1)}, Rat(0)}, 1, 0}};
    auto complex = std::make_shared<Complex>(1, std::move(cells), std::move(facets));
    return CPWL(complex, {AffineMap{{Rat(0)}, Rat(0)}, AffineMap{{Rat(1)}, Rat(0)}});
}

CPWL abs_1d() {
    std::vector<Cell> cells{Cell{0, {Inequality{IntVec{Int(-1)}, Rat(0)}}},
                            Cell{1, {Inequality{IntVec{Int(1)}, Rat(0)}}}};
    std::vector<Facet> facets{Facet{0, Hyperplane{IntVec{Int(1)}, Rat(0)}, 1, 0}};
    auto complex = std::make_shared<Complex>(1, std::move(cells), std::move(facets));
    return CPWL(complex, {AffineMap{{Rat(-1)}, Rat(0)}, AffineMap{{Rat(1)}, Rat(0)}});
}

}  // namespace

TEST_CASE("ceil_log2") {
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(3) == 2);
    CHECK(ceil_log2(4) == 2);
    CHECK(ceil_log2(5) == 3);
    CHECK(ceil_log2(8) == 3);
}

TEST_CASE("max_tree with a single map is a depth-1 affine network") {
    ReluNetwork net = max_tree({AffineMap{rvec({2, -1}), Rat(3)}}, 2);
    CHECK(stats(net).depth == 1);
    CHECK(stats(net).size == 0);
    CHECK(evaluate_network(net, rvec({1, 1})) == 4);
}

TEST_CASE("max_tree of x and 0 is a single ReLU") {
    ReluNetwork net = max_tree(
        {AffineMap{{Rat(1)}, Rat(0)}, AffineMap{{Rat(0)}, Rat(0)}}, 1);
    CHECK(stats(net).depth == 2);
    CHECK(evaluate_network(net, {Rat(-1)}) == 0);
    CHECK(evaluate_network(net, {Rat(5)}) == 5);
    CHECK(evaluate_network(net, {make_rat(3, 7)}) == make_rat(3, 7));
}

TEST_CASE("max_tree of four random maps has depth 3 and is exact") {
    test::RatSampler sampler(3);
    std::vector<AffineMap> maps;
    for (int i = 0; i < 4; ++i) {
        maps.push_back(AffineMap{sampler.point(2, 5), sampler.small()});
    }
    ReluNetwork net = max_tree(maps, 2);
    NetworkStats st = stats(net);
    CHECK(st.depth == 3);
    CHECK(st.size <= 3 * 3 + 2 * 2);  // 3(k-1) + 2 ceil(log2 k)
    for (int t = 0; t < 100; ++t) {
        RatVec x = sampler.point(2);
        Rat expected = maps[0](x);
        for (const auto& m : maps) {
            Rat v = m(x);
            if (v > expected) expected = v;
        }
        CHECK(evaluate_network(net, x) == expected);
    }
}

TEST_CASE("max_tree rejects an empty list") {
    CHECK_THROWS_AS(max_tree({}, 1), Error);
}

TEST_CASE("convex_1d of |x| is ReLU(x) + ReLU(-x)") {
    ReluNetwork net = convex_1d(abs_1d());
    NetworkStats st = stats(net);
    CHECK(st.depth == 2);
    CHECK(st.size == 2);
    test::RatSampler sampler(5);
    for (int t = 0; t < 50; ++t) {
        RatVec x = sampler.point(1);
        CHECK(evaluate_network(net, x) == (x[0] >= 0 ? x[0] : -x[0]));
    }
}

TEST_CASE("convex_1d of max(x, 0) has a single hidden unit") {
    ReluNetwork net = convex_1d(relu_1d());
    NetworkStats st = stats(net);
    CHECK(st.depth == 2);
    CHECK(st.size == 1);
    CHECK(evaluate_network(net, {Rat(-2)}) == 0);
}

TEST_CASE("convex_1d with four breakpoints and a flat left end has size 4") {
    // f = sum of four ReLU kinks: slopes 0,1,2,3,4 with breakpoints -2,-1,1,3
    std::vector<Cell> cells;
    std::vector<Facet> facets;
    RatVec breaks{Rat(-2), Rat(-1), Rat(1), Rat(3)};
    for (int i = 0; i <= 4; ++i) {
        Cell cell;
        cell.id = i;
        if (i > 0) cell.ineqs.push_back(Inequality{IntVec{Int(1)}, breaks[i - 1]});
        if (i < 4) cell.ineqs.push_back(Inequality{IntVec{Int(-1)}, -breaks[i]});
        cells.push_back(std::move(cell));
    }
    for (int i = 0; i < 4; ++i)
        facets.push_back(Facet{i, Hyperplane{IntVec{Int(1)}, breaks[i]}, i + 1, i});
    auto complex = std::make_shared<Complex>(1, std::move(cells), std::move(facets));
    std::vector<AffineMap> pieces;
    Rat slope(0), intercept(0);
    pieces.push_back(AffineMap{{slope}, intercept});
    for (int i = 0; i < 4; ++i) {
        Rat value = slope * breaks[i] + intercept;
        slope += 1;
        intercept = value - slope * breaks[i];
        pieces.push_back(AffineMap{{slope}, intercept});
    }
    CPWL f(complex, std::move(pieces));
    REQUIRE(is_convex(f));
    ReluNetwork net = convex_1d(f);
    NetworkStats st = stats(net);
    CHECK(st.depth == 2);
    CHECK(st.size == 4);
    VerifyReport report = verify_network(net, f, 100, 11);
    CHECK(report.all_exact());
}

TEST_CASE("convex_1d rejects nonconvex and multi-dimensional input") {
    CHECK_THROWS_AS(convex_1d(test::median_fixture()), Error);
    CPWL zig = test::load_fixture_function("zigzag1d.json");
    CHECK_THROWS_AS(convex_1d(zig), Error);
}

TEST_CASE("grouped_convex extremes on the median's convex part") {
    CPWL median = test::median_fixture();
    DecompPoint dec = solve_reduced(median);
    const CPWL& g = dec.g;  // three affine components
    const int k = component_count(g);
    REQUIRE(k == 3);
    for (auto [r, s] : std::vector<std::pair<int, int>>{{1, 3}, {3, 1}, {2, 2}}) {
        ReluNetwork net = grouped_convex(g, r, s);
        NetworkStats st = stats(net);
        CHECK(st.depth == ceil_log2(s) + ceil_log2(r) + 1);
        VerifyReport report = verify_network(net, g, 100, 13);
        CHECK(report.all_exact());
    }
    CHECK_THROWS_AS(grouped_convex(g, 1, 2), Error);  // r*s < k
}

TEST_CASE("grouped_convex in one dimension has depth 2 + ceil(log2 r)") {
    // convex 1D function with 4 components
    RatVec breaks{Rat(-1), Rat(0), Rat(2)};
    std::vector<Cell> cells;
    std::vector<Facet> facets;
    for (int i = 0; i <= 3; ++i) {
        Cell cell;
        cell.id = i;
        if (i > 0) cell.ineqs.push_back(Inequality{IntVec{Int(1)}, breaks[i - 1]});
        if (i < 3) cell.ineqs.push_back(Inequality{IntVec{Int(-1)}, -breaks[i]});
        cells.push_back(std::move(cell));
    }
    for (int i = 0; i < 3; ++i)
        facets.push_back(Facet{i, Hyperplane{IntVec{Int(1)}, breaks[i]}, i + 1, i});
    auto complex = std::make_shared<Complex>(1, std::move(cells), std::move(facets));
    std::vector<AffineMap> pieces{AffineMap{{Rat(-2)}, Rat(-2)}, AffineMap{{Rat(-1)}, Rat(-1)},
                                  AffineMap{{Rat(0)}, Rat(-1)}, AffineMap{{Rat(2)}, Rat(-5)}};
    CPWL f(complex, std::move(pieces));
    REQUIRE(is_convex(f));
    for (int r : {1, 2, 4}) {
        int s = (4 + r - 1) / r;
        ReluNetwork net = grouped_convex(f, r, s);
        CHECK(stats(net).depth == 2 + ceil_log2(r));
        CHECK(verify_network(net, f, 80, 17).all_exact());
    }
}

TEST_CASE("dc_network reproduces the median exactly") {
    CPWL f = test::median_fixture();
    DecompPoint dec = solve_reduced(f);
    ReluNetwork net = dc_network(f, dec, 2, 2);
    VerifyReport report = verify_network(net, f, 100, 19);
    CHECK(report.samples_checked == 106);  // 100 samples + 6 cells
    CHECK(report.all_exact());
    // branch composition: depth matches the grouped formula
    CHECK(stats(net).depth == ceil_log2(2) + ceil_log2(2) + 1);
    // stats are the componentwise combination of the two branches
    ReluNetwork gb = grouped_convex(dec.g, 2, 2);
    ReluNetwork hb = grouped_convex(dec.h, 2, 2);
    CHECK(stats(net).size == stats(gb).size + stats(hb).size);
    CHECK(stats(net).depth == stats(gb).depth);
}

TEST_CASE("dc_network on a convex decomposition (f, 0)") {
    CPWL median = test::median_fixture();
    DecompPoint via = decompose_via_regular(median);
    CPWL convex = linear_combination(Rat(1), median, Rat(1), via.h);
    DecompPoint dec = solve_reduced(convex);
    ReluNetwork net = dc_network(convex, dec, 2, 3);
    CHECK(verify_network(net, convex, 60, 23).all_exact());
}

TEST_CASE("dc_network on the 1D zigzag") {
    CPWL f = test::load_fixture_function("zigzag1d.json");
    DecompPoint dec = solve_reduced(f);
    ReluNetwork net = dc_network(f, dec, 1, 4);
    CHECK(stats(net).depth == 2);
    CHECK(verify_network(net, f, 100, 29).all_exact());
}

TEST_CASE("dc_network validates its parameters") {
    CPWL f = test::median_fixture();
    DecompPoint dec = solve_reduced(f);
    CHECK_THROWS_AS(dc_network(f, dec, 1, 1), Error);
}

TEST_CASE("float evaluation approximates the exact value") {
    CPWL f = test::median_fixture();
    DecompPoint dec = solve_reduced(f);
    ReluNetwork net = dc_network(f, dec, 1, 3);
    std::vector<double> x{0.75, -1.25};
    double approx = evaluate_network_float(net, x);
    Rat exact = evaluate_network(net, {make_rat(3, 4), make_rat(-5, 4)});
    CHECK(std::abs(approx - exact.convert_to<double>()) < 1e-9);
}

TEST_CASE("monotone size growth stays linear in k across the trade-off") {
    test::RatSampler sampler(31);
    test::RandomConvex rc = test::random_convex_max(2, 7, sampler);
    const int k = rc.components;
    REQUIRE(k >= 3);
    long previous_inner = -1;
    for (int r = 1; r <= k; ++r) {
        int s = (k + r - 1) / r;
        ReluNetwork net = grouped_convex(rc.f, r, s);
        NetworkStats st = stats(net);
        CHECK(st.depth == ceil_log2(s) + ceil_log2(r) + 1);
        CHECK(st.size <= 8 * k);  // measured linear bound for the tree builder
        CHECK(verify_network(net, rc.f, 40, 37 + r).all_exact());
        (void)previous_inner;
    }
}
