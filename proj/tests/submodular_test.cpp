#include <doctest.h>

#include "dcsplit/error.hpp"
#include "dcsplit/submodular.hpp"
#include "test_helpers.hpp"

using namespace dcsplit;

namespace {

SetFunction random_set_function(int n, test::RatSampler& sampler) {
    RatVec values(1u << n);
    for (auto& v : values) v = sampler.small(8);
    return SetFunction(n, std::move(values));
}

WeightedGraph random_signed_graph(int n, test::RatSampler& sampler) {
    WeightedGraph g;
    g.n = n;
    for (int u = 1; u <= n; ++u) {
        for (int v = u + 1; v <= n; ++v) {
            if (sampler.raw() % 3 == 0) continue;
            Rat w = sampler.small(4);
            if (w == 0) w = 1;
            g.edges.push_back({u, v, w});
        }
    }
    return g;
}

bool brute_force_submodular(const SetFunction& F) {
    for (unsigned a = 0; a < F.table_size(); ++a) {
        for (unsigned b = 0; b < F.table_size(); ++b) {
            if (F.value(a) + F.value(b) < F.value(a | b) + F.value(a & b)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("braid fan sizes and validity") {
    CHECK(braid_complex(2)->cells().size() == 2);
    CHECK(braid_complex(2)->facets().size() == 1);
    auto b3 = braid_complex(3);
    CHECK(b3->cells().size() == 6);
    CHECK(b3->facets().size() == 6);
    CHECK(validate_complex(*b3).valid());
    auto b4 = braid_complex(4);
    CHECK(b4->cells().size() == 24);
    CHECK(b4->facets().size() == 36);
    Caps caps;
    caps.braid_n = 3;
    CHECK_THROWS_AS(braid_complex(4, caps), Error);
}

TEST_CASE("the balanced subspace of the braid fan has dimension 2^n - n - 1") {
    for (int n : {2, 3, 4}) {
        auto fan = braid_complex(n);
        CPWL zero(fan, std::vector<AffineMap>(fan->cells().size(),
                                              AffineMap{RatVec(n, Rat(0)), Rat(0)}));
        DecompPolyhedron poly(zero);
        CHECK(poly.w_dim() == (1 << n) - n - 1);
    }
}

TEST_CASE("cardinality has an affine Lovász extension") {
    RatVec values(1u << 3);
    for (unsigned m = 0; m < values.size(); ++m) values[m] = __builtin_popcount(m);
    SetFunction F(3, std::move(values));
    CPWL f = lovasz(F);
    for (const auto& p : f.pieces()) {
        CHECK(p.a == RatVec{Rat(1), Rat(1), Rat(1)});
        CHECK(p.b == 0);
    }
    CHECK(is_submodular(F));
    CHECK(is_modular(F));
    CHECK(greedy_vertices(F).size() == 1);
}

TEST_CASE("max indicator on two elements extends to max(x1, x2)") {
    SetFunction F = io::set_function_from_json(
        io::load_json_file(test::fixture_path("setfn_max2.json")));
    CPWL f = lovasz(F);
    test::RatSampler sampler(3);
    for (int t = 0; t < 40; ++t) {
        RatVec x = sampler.point(2);
        CHECK(f.evaluate(x) == (x[0] > x[1] ? x[0] : x[1]));
    }
    // all four indicator vectors reproduce the table
    for (unsigned mask = 0; mask < 4; ++mask) {
        RatVec ind{Rat(mask & 1 ? 1 : 0), Rat(mask & 2 ? 1 : 0)};
        CHECK(f.evaluate(ind) == F.value(mask));
    }
    auto vertices = greedy_vertices(F);
    REQUIRE(vertices.size() == 2);
    CHECK(vertices[0] == RatVec{Rat(0), Rat(1)});
    CHECK(vertices[1] == RatVec{Rat(1), Rat(0)});
}

TEST_CASE("Φ round trips exactly on random tables") {
    test::RatSampler sampler(7);
    for (int trial = 0; trial < 50; ++trial) {
        SetFunction F = random_set_function(4, sampler);
        SetFunction back = to_set_function(lovasz(F));
        for (unsigned mask = 0; mask < F.table_size(); ++mask)
            CHECK(back.value(mask) == F.value(mask));
    }
}

TEST_CASE("Φ is linear") {
    test::RatSampler sampler(11);
    SetFunction A = random_set_function(3, sampler);
    SetFunction B = random_set_function(3, sampler);
    Rat alpha = sampler.small(), beta = sampler.small();
    RatVec combo_values(A.table_size());
    for (unsigned m = 0; m < A.table_size(); ++m)
        combo_values[m] = alpha * A.value(m) + beta * B.value(m);
    SetFunction combo(3, std::move(combo_values));
    CPWL fc = lovasz(combo);
    CPWL expected = linear_combination(alpha, lovasz(A), beta, lovasz(B));
    test::RatSampler probe(13);
    for (int t = 0; t < 30; ++t) {
        RatVec x = probe.point(3);
        CHECK(fc.evaluate(x) == expected.evaluate(x));
    }
}

TEST_CASE("local submodularity criterion agrees with the exhaustive check") {
    test::RatSampler sampler(17);
    int submodular_count = 0;
    for (int trial = 0; trial < 60; ++trial) {
        SetFunction F = random_set_function(3, sampler);
        bool local = is_submodular(F);
        CHECK(local == brute_force_submodular(F));
        submodular_count += local ? 1 : 0;
    }
    // random tables are rarely submodular but cut functions always are
    WeightedGraph tri = io::graph_from_json(
        io::load_json_file(test::fixture_path("cut_triangle.json")));
    CHECK(is_submodular(cut_function(tri)));
    (void)submodular_count;
}

TEST_CASE("submodularity iff the Lovász extension is convex") {
    test::RatSampler sampler(19);
    for (int trial = 0; trial < 25; ++trial) {
        SetFunction F = random_set_function(3, sampler);
        CHECK(is_submodular(F) == is_convex(lovasz(F)));
    }
}

TEST_CASE("cut function tables") {
    WeightedGraph single;
    single.n = 2;
    single.edges.push_back({1, 2, Rat(1)});
    SetFunction F = cut_function(single);
    CHECK(F.value(0) == 0);
    CHECK(F.value(1) == 1);
    CHECK(F.value(2) == 1);
    CHECK(F.value(3) == 0);
    WeightedGraph tri = io::graph_from_json(
        io::load_json_file(test::fixture_path("cut_triangle.json")));
    SetFunction T = cut_function(tri);
    for (unsigned mask = 1; mask < 7; ++mask) CHECK(T.value(mask) == 2);
    CHECK(T.value(7) == 0);
    // negated weights negate the table
    WeightedGraph neg = single;
    neg.edges[0].weight = Rat(-1);
    SetFunction N = cut_function(neg);
    for (unsigned mask = 0; mask < 4; ++mask) CHECK(N.value(mask) == -F.value(mask));
}

TEST_CASE("the cut Lovász extension is the sum of edge gadgets") {
    WeightedGraph tri = io::graph_from_json(
        io::load_json_file(test::fixture_path("cut_triangle.json")));
    SetFunction F = cut_function(tri);
    CPWL f = lovasz(F);
    test::RatSampler sampler(23);
    for (int t = 0; t < 40; ++t) {
        RatVec x = sampler.point(3);
        Rat expected = 0;
        for (const auto& e : tri.edges) {
            Rat d = x[e.u - 1] - x[e.v - 1];
            expected += e.weight * (d > 0 ? d : -d);
        }
        CHECK(f.evaluate(x) == expected);
    }
}

TEST_CASE("greedy vertex count equals the Lovász piece count") {
    WeightedGraph tri = io::graph_from_json(
        io::load_json_file(test::fixture_path("cut_triangle.json")));
    SetFunction F = cut_function(tri);
    auto vertices = greedy_vertices(F);
    CPWL f = lovasz(F);
    REQUIRE(is_convex(f));
    CHECK(static_cast<int>(vertices.size()) == coarsen(f).piece_count);
    CHECK_THROWS_AS(greedy_vertices(SetFunction(2, {Rat(0), Rat(0), Rat(0), Rat(1)})),
                    Error);
}

TEST_CASE("decompose_set_function splits a signed cut by edge sign") {
    test::RatSampler sampler(29);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 2 + static_cast<int>(sampler.raw() % 3);
        WeightedGraph g = random_signed_graph(n, sampler);
        WeightedGraph pos, negated;
        pos.n = negated.n = n;
        for (const auto& e : g.edges) {
            if (e.weight > 0) pos.edges.push_back(e);
            else negated.edges.push_back({e.u, e.v, -e.weight});
        }
        SetFunction F = cut_function(g);
        SetDecomposition dec = decompose_set_function(F);
        CHECK(dec.reduced);
        CHECK(dec.vertex);
        CHECK(is_submodular(dec.G));
        CHECK(is_submodular(dec.H));
        SetFunction Gexp = cut_function(pos);
        SetFunction Hexp = cut_function(negated);
        // equality modulo modular functions, and exact difference
        SetFunction gc = canonical_mod_modular(dec.G);
        SetFunction ge = canonical_mod_modular(Gexp);
        SetFunction hc = canonical_mod_modular(dec.H);
        SetFunction he = canonical_mod_modular(Hexp);
        for (unsigned mask = 0; mask < F.table_size(); ++mask) {
            CHECK(dec.G.value(mask) - dec.H.value(mask) == F.value(mask));
            CHECK(gc.value(mask) == ge.value(mask));
            CHECK(hc.value(mask) == he.value(mask));
        }
    }
}

TEST_CASE("submodular F decomposes as (F, 0) modulo modular functions") {
    WeightedGraph tri = io::graph_from_json(
        io::load_json_file(test::fixture_path("cut_triangle.json")));
    SetFunction F = cut_function(tri);
    SetDecomposition dec = decompose_set_function(F);
    SetFunction hc = canonical_mod_modular(dec.H);
    for (unsigned mask = 0; mask < F.table_size(); ++mask) CHECK(hc.value(mask) == 0);
    SetFunction gc = canonical_mod_modular(dec.G);
    SetFunction fc = canonical_mod_modular(F);
    for (unsigned mask = 0; mask < F.table_size(); ++mask)
        CHECK(gc.value(mask) == fc.value(mask));
}

TEST_CASE("lovasz_value agrees with the fan evaluation without building the fan") {
    test::RatSampler sampler(31);
    SetFunction F = random_set_function(4, sampler);
    CPWL f = lovasz(F);
    for (int t = 0; t < 25; ++t) {
        RatVec x = sampler.point(4);
        CHECK(lovasz_value(F, x) == f.evaluate(x));
    }
}

TEST_CASE("to_set_function rejects functions off the braid fan") {
    CPWL median = test::median_fixture();
    CHECK_THROWS_AS(to_set_function(median), Error);
}
