#include <doctest.h>

#include <algorithm>

#include "dcsplit/constructions.hpp"
#include "dcsplit/decomposition.hpp"
#include "dcsplit/error.hpp"
#include "test_helpers.hpp"

using namespace dcsplit;
using dcsplit::test::hp;
using dcsplit::test::ivec;
using dcsplit::test::rvec;

namespace {

void check_decomposition_point(const CPWL& f, const DecompPoint& p, std::uint64_t seed) {
    CHECK(p.wg.nonnegative());
    CHECK(p.wh.nonnegative());
    Weights wf = weights(f);
    for (std::size_t k = 0; k < wf.omega.size(); ++k)
        CHECK(p.wg.omega[k] - p.wh.omega[k] == wf.omega[k]);
    test::RatSampler sampler(seed);
    for (int t = 0; t < 100; ++t) {
        RatVec x = sampler.point(f.complex().dim());
        CHECK(p.g.evaluate(x) - p.h.evaluate(x) == f.evaluate(x));
    }
}

CPWL one_dim_function(const RatVec& breakpoints, const RatVec& jump_weights,
                      const Rat& left_slope = Rat(0)) {
    // cells (-inf, t1], [t1, t2], ..., [tm, inf)
    std::vector<Cell> cells;
    std::vector<Facet> facets;
    const int m = static_cast<int>(breakpoints.size());
    for (int i = 0; i <= m; ++i) {
        Cell cell;
        cell.id = i;
        if (i > 0) cell.ineqs.push_back(Inequality{ivec({1}), breakpoints[i - 1]});
        if (i < m) cell.ineqs.push_back(Inequality{ivec({-1}), -breakpoints[i]});
        cells.push_back(std::move(cell));
    }
    for (int i = 0; i < m; ++i) {
        Facet f;
        f.id = i;
        f.plane = Hyperplane{ivec({1}), breakpoints[i]};
        f.pos_cell = i + 1;
        f.neg_cell = i;
        facets.push_back(std::move(f));
    }
    auto complex = std::make_shared<Complex>(1, std::move(cells), std::move(facets));
    std::vector<AffineMap> pieces(m + 1);
    Rat slope = left_slope, value_at = 0;
    // anchor the leftmost piece at f(t1) = 0
    pieces[0] = AffineMap{{slope}, m > 0 ? -slope * breakpoints[0] : Rat(0)};
    for (int i = 0; i < m; ++i) {
        Rat prev_val = pieces[i].a[0] * breakpoints[i] + pieces[i].b;
        slope += jump_weights[i];
        pieces[i + 1] = AffineMap{{slope}, prev_val - slope * breakpoints[i]};
        (void)value_at;
    }
    return CPWL(complex, std::move(pieces));
}

}  // namespace

TEST_CASE("median: polyhedron shape, unique vertex, flags") {
    CPWL f = test::median_fixture();
    DecompPolyhedron poly(f);
    CHECK(poly.lambda_hrep().vars == 6);
    CHECK(poly.lambda_hrep().ineq_rows.size() == 12);
    CHECK(poly.lambda_hrep().eq_rows.size() == 2);  // one balancing pair at the origin
    CHECK(poly.w_dim() == 4);

    DecompPoint reduced = solve_reduced(f);
    Weights wf = poly.wf();
    for (std::size_t k = 0; k < wf.omega.size(); ++k)
        CHECK(reduced.wg.omega[k] == (wf.omega[k] > 0 ? wf.omega[k] : Rat(0)));
    CHECK(is_reduced(reduced));
    CHECK(is_vertex(reduced));
    check_decomposition_point(f, reduced, 7);

    auto vertices = enumerate_decompositions(f);
    REQUIRE(vertices.size() == 1);
    CHECK(vertices[0].wg.omega == reduced.wg.omega);
    CHECK(unique_vertex_certificate(f, vertices[0].g, vertices[0].h));
}

TEST_CASE("the official H-representation projects to the same vertex set") {
    CPWL f = test::median_fixture();
    DecompPolyhedron poly(f);
    auto official = enumerate_vertices(poly.hrep());
    auto structured = enumerate_decompositions(f);
    REQUIRE(official.size() == structured.size());
    const int m = static_cast<int>(f.complex().facets().size());
    for (std::size_t v = 0; v < official.size(); ++v) {
        RatVec lambda(official[v].begin(), official[v].begin() + m);
        CHECK(lambda == structured[v].wg.omega);
    }
}

TEST_CASE("affine f decomposes as (0, 0)") {
    CPWL f = test::median_fixture();
    std::vector<AffineMap> pieces(f.complex().cells().size(),
                                  AffineMap{rvec({3, -1}), Rat(2)});
    CPWL affine(f.complex_ptr(), std::move(pieces));
    auto vertices = enumerate_decompositions(affine);
    REQUIRE(vertices.size() == 1);
    for (const auto& w : vertices[0].wg.omega) CHECK(w == 0);
    DecompPoint reduced = solve_reduced(affine);
    CHECK(is_reduced(reduced));
    for (const auto& w : reduced.wg.omega) CHECK(w == 0);
}

TEST_CASE("convex f decomposes as (f, 0)") {
    CPWL median = test::median_fixture();
    DecompPoint via = decompose_via_regular(median);
    const CPWL& strict = via.h;  // λg is convex with full support
    // build a convex function: median + strict part is convex
    CPWL convex = linear_combination(Rat(1), median, Rat(1), via.h);
    REQUIRE(is_convex(convex));
    DecompPoint reduced = solve_reduced(convex);
    CHECK(reduced.wg.omega == weights(convex).omega);
    for (const auto& w : reduced.wh.omega) CHECK(w == 0);
    CHECK(is_reduced(reduced));
    (void)strict;
}

TEST_CASE("1D: vertices match the sign-split oracle") {
    // breakpoint weights (+1, -1, +1) at x = 0, 1, 2
    CPWL f = test::load_fixture_function("zigzag1d.json");
    Weights wf = weights(f);
    CHECK(wf.omega == RatVec{Rat(1), Rat(-1), Rat(1)});
    auto vertices = enumerate_decompositions(f);
    REQUIRE(vertices.size() == 1);
    // oracle: with no balancing constraints in 1D the only vertex keeps the
    // convex kinks in g and the concave kink in h
    CHECK(vertices[0].wg.omega == RatVec{Rat(1), Rat(0), Rat(1)});
    CHECK(vertices[0].wh.omega == RatVec{Rat(0), Rat(1), Rat(0)});
    check_decomposition_point(f, vertices[0], 13);
}

TEST_CASE("1D oracle equivalence on random functions with up to 6 breakpoints") {
    test::RatSampler sampler(97);
    for (int trial = 0; trial < 12; ++trial) {
        int m = 1 + static_cast<int>(sampler.raw() % 6);
        RatVec breakpoints;
        Rat t(-3);
        for (int i = 0; i < m; ++i) {
            t += Rat(1) + (sampler.small(2) + Rat(3)) / 3;
            breakpoints.push_back(t);
        }
        RatVec jumps;
        bool any = false;
        for (int i = 0; i < m; ++i) {
            Rat j = sampler.small(3);
            if (j == 0) j = 1;
            jumps.push_back(j);
            any = any || j != 0;
        }
        if (!any) continue;
        CPWL f = one_dim_function(breakpoints, jumps, sampler.small(2));
        REQUIRE(validate_continuity(f).valid());
        auto vertices = enumerate_decompositions(f);
        REQUIRE(vertices.size() == 1);
        Weights wf = weights(f);
        for (int k = 0; k < m; ++k) {
            CHECK(vertices[0].wg.omega[k] == (wf.omega[k] > 0 ? wf.omega[k] : Rat(0)));
            CHECK(vertices[0].wh.omega[k] == (wf.omega[k] < 0 ? -wf.omega[k] : Rat(0)));
        }
        CHECK(is_vertex(vertices[0]));
        CHECK(is_reduced(vertices[0]));
        DecompPoint reduced = solve_reduced(f);
        CHECK(reduced.wg.omega == vertices[0].wg.omega);
    }
}

TEST_CASE("is_reduced rejects a padded decomposition") {
    CPWL f = test::median_fixture();
    DecompPoint reduced = solve_reduced(f);
    // add a strictly positive convex ψ to both parts
    auto witness = regular_witness(f.complex_ptr());
    REQUIRE(witness.has_value());
    CPWL g2 = linear_combination(Rat(1), reduced.g, Rat(1), *witness);
    CPWL h2 = linear_combination(Rat(1), reduced.h, Rat(1), *witness);
    DecompPoint padded{g2, h2, weights(g2), weights(h2)};
    CHECK(!is_reduced(padded));
    CHECK(!is_vertex(padded));
    check_decomposition_point(f, padded, 29);
}

TEST_CASE("a midpoint of two distinct vertices is not a vertex") {
    // a function with several vertices: the four-ray fan fixture carried
    // onto the full line arrangement of its breakpoint directions
    WeightedFan2D fan = complete_fan2d(
        io::fan2d_from_json(io::load_json_file(test::fixture_path("tran_fan.json"))));
    Fan2DComplex base = fan2d_to_complex(fan);
    Weights wf;
    wf.omega.assign(fan.weights.size(), Rat(0));
    for (std::size_t i = 0; i < fan.weights.size(); ++i)
        wf.omega[base.facet_of_ray[i]] = fan.weights[i];
    CPWL f6 = from_weights(wf, base.complex, 0);
    std::vector<Hyperplane> lines{hp({1, -2}, 0), hp({2, -1}, 0), hp({1, -1}, 0),
                                  hp({1, 1}, 0)};
    RefineResult r = refine(*base.complex, lines);
    CPWL f = restrict_to_refinement(f6, r.complex, r.ancestry);
    REQUIRE(r.complex->cells().size() == 12);
    auto vertices = enumerate_decompositions(f);
    REQUIRE(vertices.size() >= 2);
    for (const auto& v : vertices) {
        CHECK(is_vertex(v));
        CHECK(is_reduced(v));
    }
    // midpoint of the first two vertices is feasible but not a vertex
    Weights mid;
    mid.omega = vertices[0].wg.omega + vertices[1].wg.omega;
    for (auto& w : mid.omega) w /= 2;
    DecompPolyhedron poly(f);
    DecompPoint midpoint = poly.lift(mid);
    CHECK(!is_vertex(midpoint));
    check_decomposition_point(f, midpoint, 31);
}

TEST_CASE("minimal_set is a subset of the vertex enumeration") {
    CPWL f = test::median_fixture();
    auto vertices = enumerate_decompositions(f);
    auto minimal = minimal_set(f);
    REQUIRE(minimal.size() == 1);
    CHECK(minimal[0].pieces_g == 3);
    CHECK(minimal[0].pieces_h == 3);
    bool found = false;
    for (const auto& v : vertices) found = found || v.wg.omega == minimal[0].point.wg.omega;
    CHECK(found);
}

TEST_CASE("certificate requires g - h = f exactly") {
    CPWL f = test::median_fixture();
    DecompPoint p = solve_reduced(f);
    CPWL shifted = linear_combination(Rat(2), p.g, Rat(0), p.g);
    CHECK_THROWS_AS(unique_vertex_certificate(f, shifted, p.h), Error);
}

TEST_CASE("is_regular on fans and a witness that decomposes") {
    CPWL median = test::median_fixture();
    CHECK(is_regular(median.complex()));
    auto witness = regular_witness(median.complex_ptr());
    REQUIRE(witness.has_value());
    CHECK(is_strictly_compatible(*witness));
    DecompPoint via = decompose_via_regular(median);
    check_decomposition_point(median, via, 37);
    // two-cell complex split by x1 = 0: witness is the one-kink function
    auto halfplanes = std::make_shared<Complex>(arrangement_complex({hp({1, 0}, 0)}, 2));
    CHECK(is_regular(*halfplanes));
    auto w2 = regular_witness(halfplanes);
    REQUIRE(w2.has_value());
    CHECK(weights(*w2).omega[0] >= 1);
}

TEST_CASE("twisted triangulation: non-regular, with empty decomposition polyhedra") {
    auto complex = io::complex_from_json(
        io::load_json_file(test::fixture_path("twisted_complex.json")));
    REQUIRE(validate_complex(*complex).valid());
    CHECK(!is_regular(*complex));
    CHECK(!regular_witness(complex).has_value());
    CPWL zero(complex,
              std::vector<AffineMap>(complex->cells().size(),
                                     AffineMap{RatVec(2, Rat(0)), Rat(0)}));
    CHECK_THROWS_AS(decompose_via_regular(zero), Error);
    // some compatible functions cannot be decomposed on this complex at all
    DecompPolyhedron poly(zero);
    int infeasible = 0;
    for (int j = 0; j < poly.w_dim(); ++j) {
        Weights w;
        w.omega = poly.w_basis()[j];
        CPWL f = from_weights(w, complex, 0);
        try {
            solve_reduced(f);
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::Infeasible);
            ++infeasible;
            CHECK_THROWS_AS(enumerate_decompositions(f), Error);
        }
    }
    CHECK(infeasible == 4);
}

TEST_CASE("vertex characterization by support comparison on the median") {
    CPWL f = test::median_fixture();
    auto vertices = enumerate_decompositions(f);
    for (const auto& p : vertices) {
        bool coarser_exists = false;
        for (const auto& q : vertices) {
            if (&p == &q) continue;
            SupportSets sp_g = supports(p.g), sq_g = supports(q.g);
            SupportSets sp_h = supports(p.h), sq_h = supports(q.h);
            bool sub_g = std::includes(sp_g.all.begin(), sp_g.all.end(), sq_g.all.begin(),
                                       sq_g.all.end());
            bool sub_h = std::includes(sp_h.all.begin(), sp_h.all.end(), sq_h.all.begin(),
                                       sq_h.all.end());
            if (sub_g && sub_h && (sq_g.all != sp_g.all || sq_h.all != sp_h.all))
                coarser_exists = true;
        }
        CHECK(is_vertex(p) == !coarser_exists);
    }
}
