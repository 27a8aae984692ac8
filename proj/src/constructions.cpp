#include "dcsplit/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dcsplit/error.hpp"
#include "dcsplit/linalg.hpp"

namespace dcsplit {

IntVec rot90(const IntVec& v) { return IntVec{-v[1], v[0]}; }

namespace {

IntVec rot_minus90(const RatVec& v) {
    return primitive_normal(RatVec{v[1], -v[0]});
}

std::pair<Rat, Rat> as_pair(const IntVec& v) { return {Rat(v[0]), Rat(v[1])}; }

Int cross2(const IntVec& a, const IntVec& b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

bool fan2d_balanced(const WeightedFan2D& fan) {
    Rat sx = 0, sy = 0;
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        sx += fan.weights[i] * Rat(-fan.rays[i][1]);
        sy += fan.weights[i] * Rat(fan.rays[i][0]);
    }
    return sx == 0 && sy == 0;
}

WeightedFan2D complete_fan2d(WeightedFan2D fan) {
    if (fan.rays.empty()) fail(ErrorCode::InvalidInput, "fan needs at least one ray");
    std::vector<std::pair<IntVec, Rat>> rays;
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        if (fan.rays[i].size() != 2) fail(ErrorCode::InvalidInput, "2D fan ray expected");
        rays.push_back({primitive_normal(fan.rays[i]), fan.weights[i]});
    }
    std::sort(rays.begin(), rays.end(), [](const auto& a, const auto& b) {
        return angle_less(as_pair(a.first), as_pair(b.first));
    });
    for (std::size_t i = 0; i + 1 < rays.size(); ++i) {
        if (rays[i].first == rays[i + 1].first)
            fail(ErrorCode::InvalidInput, "duplicate ray in 2D fan");
    }
    // close every gap of angle >= π with a quarter-turn fill ray
    bool changed = true;
    while (changed) {
        changed = false;
        const std::size_t m = rays.size();
        for (std::size_t i = 0; i < m; ++i) {
            const IntVec& a = rays[i].first;
            const IntVec& b = rays[(i + 1) % m].first;
            bool wide;
            if (m == 1) {
                wide = true;
            } else {
                Int cr = cross2(a, b);
                wide = cr < 0 || (cr == 0 && dot(a, b) <= 0) || a == b;
            }
            if (wide) {
                rays.insert(rays.begin() + i + 1,
                            {primitive_normal(rot90(a)), Rat(0)});
                changed = true;
                break;
            }
        }
    }
    WeightedFan2D out;
    for (auto& r : rays) {
        out.rays.push_back(std::move(r.first));
        out.weights.push_back(std::move(r.second));
    }
    return out;
}

Fan2DComplex fan2d_to_complex(const WeightedFan2D& fan) {
    const int m = static_cast<int>(fan.rays.size());
    if (m < 2) fail(ErrorCode::InvalidInput, "complete 2D fan needs at least two rays");
    std::vector<Cell> cells;
    for (int i = 0; i < m; ++i) {
        const IntVec& a = fan.rays[i];
        const IntVec& b = fan.rays[(i + 1) % m];
        Cell cell;
        cell.id = i;
        Inequality first{primitive_normal(rot90(a)), Rat(0)};
        Inequality second{primitive_normal(negate(rot90(b))), Rat(0)};
        cell.ineqs.push_back(first);
        if (!(second.normal == first.normal)) cell.ineqs.push_back(second);
        cells.push_back(std::move(cell));
    }
    std::vector<Facet> facets;
    std::vector<int> facet_of_ray(m, -1);
    for (int i = 0; i < m; ++i) {
        // ray i is the boundary between cell i-1 (clockwise) and cell i
        Facet f;
        f.id = i;
        f.plane = Hyperplane::canonical(rot90(fan.rays[i]), Rat(0));
        int ccw_cell = i;
        int cw_cell = (i + m - 1) % m;
        const IntVec& b = fan.rays[(i + 1) % m];
        Rat side = Rat(dot(f.plane.normal, b));
        f.pos_cell = side > 0 ? ccw_cell : cw_cell;
        f.neg_cell = side > 0 ? cw_cell : ccw_cell;
        facet_of_ray[i] = i;
        facets.push_back(std::move(f));
    }
    Fan2DComplex out;
    out.complex = std::make_shared<Complex>(2, std::move(cells), std::move(facets));
    out.facet_of_ray = std::move(facet_of_ray);
    return out;
}

WeightedFan2D fan2d_of_cpwl(const CPWL& f) {
    const Complex& c = f.complex();
    if (c.dim() != 2) fail(ErrorCode::WrongDim, "2D function expected");
    Weights w = weights(f);
    std::vector<std::pair<IntVec, Rat>> rays;
    for (std::size_t k = 0; k < c.facets().size(); ++k) {
        if (c.facets()[k].plane.offset != 0)
            fail(ErrorCode::InvalidInput, "fan facets must pass through the origin");
        if (!c.facet_point(k)) fail(ErrorCode::InvalidInput, "degenerate facet");
        rays.push_back({primitive_normal(*c.facet_point(k)), w.omega[k]});
    }
    std::sort(rays.begin(), rays.end(), [](const auto& a, const auto& b) {
        return angle_less(as_pair(a.first), as_pair(b.first));
    });
    WeightedFan2D out;
    for (auto& r : rays) {
        out.rays.push_back(std::move(r.first));
        out.weights.push_back(std::move(r.second));
    }
    return out;
}

Tran2DResult tran2d_minimal(const WeightedFan2D& input) {
    Tran2DResult result;
    result.fan = complete_fan2d(input);
    if (!fan2d_balanced(result.fan))
        fail(ErrorCode::NotBalanced, "input fan weights are not balanced");
    const int m = static_cast<int>(result.fan.rays.size());
    // closing edge of the Newton polygon of the positive part
    RatVec closing{Rat(0), Rat(0)};
    for (int i = 0; i < m; ++i) {
        const Rat& w = result.fan.weights[i];
        if (w <= 0) continue;
        closing[0] -= w * Rat(-result.fan.rays[i][1]);
        closing[1] -= w * Rat(result.fan.rays[i][0]);
    }
    result.augmented = result.fan;
    RatVec wg(m, Rat(0));
    for (int i = 0; i < m; ++i)
        wg[i] = result.fan.weights[i] > 0 ? result.fan.weights[i] : Rat(0);
    if (!(closing[0] == 0 && closing[1] == 0)) {
        IntVec vstar = rot_minus90(closing);
        IntVec r90 = rot90(vstar);
        int k = r90[0] != 0 ? 0 : 1;
        Rat wstar = closing[k] / Rat(r90[k]);
        if (wstar <= 0) fail(ErrorCode::Internal, "closing weight must be positive");
        if (closing[0] != wstar * Rat(r90[0]) || closing[1] != wstar * Rat(r90[1]))
            fail(ErrorCode::Internal, "closing edge is not a multiple of the closing ray");
        result.new_ray = vstar;
        result.closing_weight = wstar;
        int existing = -1;
        for (int i = 0; i < m; ++i)
            if (result.fan.rays[i] == vstar) existing = i;
        if (existing >= 0) {
            wg[existing] += wstar;
        } else {
            int at = m;
            for (int i = 0; i < m; ++i) {
                const IntVec& a = result.fan.rays[i];
                bool after_a = angle_less(as_pair(a), as_pair(vstar));
                bool before_b = (i + 1 < m)
                                    ? angle_less(as_pair(vstar), as_pair(result.fan.rays[i + 1]))
                                    : true;
                if (after_a && before_b) { at = i + 1; break; }
            }
            if (at == m && angle_less(as_pair(vstar), as_pair(result.fan.rays[0]))) at = 0;
            result.augmented.rays.insert(result.augmented.rays.begin() + at, vstar);
            result.augmented.weights.insert(result.augmented.weights.begin() + at, Rat(0));
            wg.insert(wg.begin() + at, wstar);
        }
    }
    result.wg = std::move(wg);
    result.wh.assign(result.augmented.rays.size(), Rat(0));
    for (std::size_t i = 0; i < result.wh.size(); ++i)
        result.wh[i] = result.wg[i] - result.augmented.weights[i];
    WeightedFan2D check{result.augmented.rays, result.wg};
    if (!fan2d_balanced(check))
        fail(ErrorCode::Internal, "closed positive part is not balanced");
    return result;
}

ExtensionResult hyperplane_extension(const CPWL& f, const Caps& caps) {
    const Complex& c = f.complex();
    Weights wf = weights(f);
    std::map<Hyperplane, Rat> positive_mass;
    for (std::size_t k = 0; k < c.facets().size(); ++k) {
        if (wf.omega[k] <= 0) continue;
        auto [it, fresh] = positive_mass.try_emplace(c.facets()[k].plane, Rat(0));
        it->second += wf.omega[k];
    }
    std::vector<Hyperplane> arrangement;
    for (const auto& entry : positive_mass) arrangement.push_back(entry.first);
    RefineResult ref = refine(c, arrangement, caps);
    Weights wg;
    wg.omega.assign(ref.complex->facets().size(), Rat(0));
    for (std::size_t k = 0; k < ref.complex->facets().size(); ++k) {
        auto it = positive_mass.find(ref.complex->facets()[k].plane);
        if (it != positive_mass.end()) wg.omega[k] = it->second;
    }
    int gauge = ref.complex->cells().front().id;
    for (const auto& cell : ref.complex->cells()) gauge = std::min(gauge, cell.id);
    CPWL g = from_weights(wg, ref.complex, gauge);
    CPWL f_refined = restrict_to_refinement(f, ref.complex, ref.ancestry);
    CPWL h = linear_combination(Rat(1), g, Rat(-1), f_refined);
    Weights wh = weights(h);
    return ExtensionResult{
        DecompPoint{std::move(g), std::move(h), std::move(wg), std::move(wh)},
        std::move(f_refined), ref.complex, std::move(ref.ancestry)};
}

LocalMaximaResult local_maxima_decomposition(const CPWL& f, const Caps& caps) {
    const Complex& c = f.complex();
    const int m = static_cast<int>(c.cells().size());
    const int n = c.dim();
    std::vector<Hyperplane> planes;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const AffineMap& fi = f.piece(i);
            const AffineMap& fj = f.piece(j);
            if (fi == fj) continue;
            RatVec d = fi.a - fj.a;
            if (is_zero(d)) continue;  // parallel graphs never meet
            Hyperplane h = Hyperplane::canonical(d, fj.b - fi.b);
            bool dup = false;
            for (const auto& p : planes) dup = dup || p == h;
            if (!dup) planes.push_back(h);
        }
    }
    auto arrangement = std::make_shared<Complex>(arrangement_complex(planes, n, caps));

    // M_i = { j : f_i >= f_j on cell i }, one exact LP per ordered pair
    std::vector<std::vector<int>> dominated(m);
    for (int i = 0; i < m; ++i) {
        RatMat rows;
        RatVec rhs;
        for (const auto& q : c.cells()[i].ineqs) {
            rows.push_back(to_rat_vec(q.normal));
            rhs.push_back(q.rhs);
        }
        for (int j = 0; j < m; ++j) {
            const AffineMap& fi = f.piece(i);
            const AffineMap& fj = f.piece(j);
            if (implied_inequality(rows, rhs, fi.a - fj.a, fj.b - fi.b))
                dominated[i].push_back(j);
        }
    }
    auto group_max_at = [&](int i, const RatVec& x) {
        int best = dominated[i].front();
        Rat best_val = f.piece(best)(x);
        for (int j : dominated[i]) {
            Rat v = f.piece(j)(x);
            if (v > best_val) { best_val = v; best = j; }
        }
        return best;
    };
    std::vector<AffineMap> g_pieces, h_pieces, f_pieces;
    for (std::size_t ci = 0; ci < arrangement->cells().size(); ++ci) {
        const RatVec& x = *arrangement->interior_point(ci);
        AffineMap g_map{RatVec(n, Rat(0)), Rat(0)};
        RatVec gi_values(m);
        std::vector<AffineMap> gi_maps(m);
        for (int i = 0; i < m; ++i) {
            int j = group_max_at(i, x);
            gi_maps[i] = f.piece(j);
            gi_values[i] = f.piece(j)(x);
            g_map.a = g_map.a + f.piece(j).a;
            g_map.b += f.piece(j).b;
        }
        int imin = 0;
        for (int i = 1; i < m; ++i)
            if (gi_values[i] < gi_values[imin]) imin = i;
        AffineMap h_map{g_map.a - gi_maps[imin].a, g_map.b - gi_maps[imin].b};
        int orig = c.cell_index(locate(c, x));
        g_pieces.push_back(std::move(g_map));
        h_pieces.push_back(std::move(h_map));
        f_pieces.push_back(f.piece(orig));
    }
    CPWL g(arrangement, std::move(g_pieces));
    CPWL h(arrangement, std::move(h_pieces));
    CPWL f_arr(arrangement, std::move(f_pieces));
    Weights wg = weights(g);
    Weights wh = weights(h);
    return LocalMaximaResult{
        DecompPoint{std::move(g), std::move(h), std::move(wg), std::move(wh)},
        std::move(f_arr), arrangement};
}

SignSplitResult sign_split(const std::vector<HyperplaneTerm>& terms, int dim,
                           const Caps& caps) {
    std::vector<Hyperplane> planes;
    RatVec affine_a(dim, Rat(0));
    Rat affine_b = 0;
    for (const auto& term : terms) {
        if (term.lambda == 0) continue;
        RatVec d = term.a - term.c;
        if (is_zero(d)) {
            if (term.b != term.d)
                fail(ErrorCode::InvalidInput, "degenerate max term with distinct constants");
            affine_a = affine_a + term.lambda * term.a;
            affine_b += term.lambda * term.b;
            continue;
        }
        Hyperplane h = Hyperplane::canonical(d, term.d - term.b);
        for (const auto& p : planes) {
            if (p == h)
                fail(ErrorCode::InvalidInput,
                     "term hyperplanes must be pairwise distinct (merge coefficients first)");
        }
        planes.push_back(h);
    }
    if (planes.empty()) fail(ErrorCode::InvalidInput, "no non-degenerate terms");
    auto complex = std::make_shared<Complex>(arrangement_complex(planes, dim, caps));
    std::vector<AffineMap> g_pieces, h_pieces, f_pieces;
    for (std::size_t ci = 0; ci < complex->cells().size(); ++ci) {
        const RatVec& x = *complex->interior_point(ci);
        AffineMap gm{affine_a, affine_b}, hm{RatVec(dim, Rat(0)), Rat(0)};
        for (const auto& term : terms) {
            if (term.lambda == 0) continue;
            RatVec d = term.a - term.c;
            if (is_zero(d)) continue;  // folded into the affine part
            bool first_side = dot(d, x) + term.b - term.d >= 0;
            const RatVec& a = first_side ? term.a : term.c;
            const Rat& b = first_side ? term.b : term.d;
            if (term.lambda > 0) {
                gm.a = gm.a + term.lambda * a;
                gm.b += term.lambda * b;
            } else {
                hm.a = hm.a + (-term.lambda) * a;
                hm.b += (-term.lambda) * b;
            }
        }
        f_pieces.push_back(AffineMap{gm.a - hm.a, gm.b - hm.b});
        g_pieces.push_back(std::move(gm));
        h_pieces.push_back(std::move(hm));
    }
    CPWL f(complex, std::move(f_pieces));
    CPWL g(complex, std::move(g_pieces));
    CPWL h(complex, std::move(h_pieces));
    Weights wg = weights(g);
    Weights wh = weights(h);
    return SignSplitResult{
        std::move(f),
        DecompPoint{std::move(g), std::move(h), std::move(wg), std::move(wh)}, complex};
}

OrderStatisticResult order_statistic(int n, int k, const Caps& caps) {
    if (n > caps.order_n) fail(ErrorCode::CapExceeded, "order statistic ground-set cap");
    if (k < 1 || k > n) fail(ErrorCode::InvalidInput, "need 1 <= k <= n");
    std::vector<Cell> cells;
    struct CellData {
        int i;
        unsigned above;  // the k-1 coordinates above x_i
    };
    std::vector<CellData> data;
    for (int i = 0; i < n; ++i) {
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (mask & (1u << i)) continue;
            if (__builtin_popcount(mask) != k - 1) continue;
            Cell cell;
            cell.id = static_cast<int>(cells.size());
            for (int l = 0; l < n; ++l) {
                if (l == i) continue;
                IntVec nu(n, Int(0));
                if (mask & (1u << l)) {
                    nu[l] = 1;
                    nu[i] = -1;  // x_l >= x_i
                } else {
                    nu[i] = 1;
                    nu[l] = -1;  // x_i >= x_l
                }
                cell.ineqs.push_back(Inequality{std::move(nu), Rat(0)});
            }
            cells.push_back(std::move(cell));
            data.push_back({i, mask});
        }
    }
    std::vector<Facet> facets = facets_from_cells(cells, n);
    auto complex = std::make_shared<Complex>(n, std::move(cells), std::move(facets));
    std::vector<AffineMap> f_pieces, g_pieces, h_pieces;
    for (const auto& d : data) {
        RatVec fi(n, Rat(0));
        fi[d.i] = 1;
        RatVec gi(n, Rat(0)), hi(n, Rat(0));
        for (int l = 0; l < n; ++l) {
            if (d.above & (1u << l)) { gi[l] = 1; hi[l] = 1; }
        }
        gi[d.i] = 1;
        f_pieces.push_back(AffineMap{std::move(fi), Rat(0)});
        g_pieces.push_back(AffineMap{std::move(gi), Rat(0)});
        h_pieces.push_back(AffineMap{std::move(hi), Rat(0)});
    }
    return OrderStatisticResult{complex, CPWL(complex, std::move(f_pieces)),
                                CPWL(complex, std::move(g_pieces)),
                                CPWL(complex, std::move(h_pieces))};
}

namespace {

IntVec cross3(const IntVec& a, const IntVec& b) {
    return IntVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                  a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

GluingInput gluing_input_from_complex(const Complex& fan, const Weights& w) {
    if (fan.dim() != 3) fail(ErrorCode::WrongDim, "polygon gluing expects a fan in R^3");
    for (const auto& facet : fan.facets()) {
        if (facet.plane.offset != 0)
            fail(ErrorCode::InvalidInput, "fan facets must pass through the origin");
    }
    GluingInput input;
    const auto& faces = fan.codim2();
    std::vector<IntVec> gens;
    for (const auto& face : faces) {
        if (is_zero(face.point))
            fail(ErrorCode::InvalidInput, "codim-2 witness at the origin; not a fan ray");
        gens.push_back(primitive_normal(face.point));
    }
    for (std::size_t t = 0; t < faces.size(); ++t) {
        GluingStar star;
        star.ray = gens[t];
        for (int fk : faces[t].star_facets) {
            if (w.omega[fk] <= 0) continue;
            int other = -1;
            for (std::size_t u = 0; u < faces.size(); ++u) {
                if (u == t) continue;
                for (int fk2 : faces[u].star_facets)
                    if (fk2 == fk) other = static_cast<int>(u);
            }
            if (other < 0)
                fail(ErrorCode::InvalidInput, "facet with only one incident ray");
            star.arms.push_back({fk, gens[other], w.omega[fk]});
        }
        input.stars.push_back(std::move(star));
    }
    return input;
}

GluingResult polygon_gluing(const GluingInput& input) {
    GluingResult result;
    struct EdgeRef {
        int star;
        RatVec start, end;
    };
    std::map<int, std::vector<EdgeRef>> by_facet;
    for (int s = 0; s < static_cast<int>(input.stars.size()); ++s) {
        const GluingStar& star = input.stars[s];
        const IntVec& t = star.ray;
        if (t.size() != 3) fail(ErrorCode::WrongDim, "gluing rays live in R^3");
        // quotient-plane basis u ⟂ t, v = t × u; arms sorted counterclockwise
        IntVec axis{Int(1), Int(0), Int(0)};
        if (is_zero(cross3(t, axis))) axis = IntVec{Int(0), Int(1), Int(0)};
        IntVec u = cross3(t, axis);
        IntVec v = cross3(t, u);
        struct ArmData {
            std::pair<Rat, Rat> q;
            int facet_id;
            RatVec edge;
        };
        std::vector<ArmData> arms;
        for (const auto& arm : star.arms) {
            if (arm.weight <= 0) continue;
            IntVec c = cross3(t, arm.other);
            if (is_zero(c)) fail(ErrorCode::InvalidInput, "facet rays are collinear");
            std::pair<Rat, Rat> q{Rat(dot(arm.other, u)), Rat(dot(arm.other, v))};
            IntVec dir = primitive_normal(c);
            RatVec edge(3);
            for (int j = 0; j < 3; ++j) edge[j] = arm.weight * Rat(dir[j]);
            arms.push_back({q, arm.facet_id, std::move(edge)});
        }
        std::sort(arms.begin(), arms.end(),
                  [](const ArmData& a, const ArmData& b) { return angle_less(a.q, b.q); });
        GluingPolygon poly;
        poly.ray = t;
        RatVec prefix(3, Rat(0));
        for (const auto& arm : arms) {
            EdgeRef ref;
            ref.star = s;
            ref.start = prefix;
            prefix = prefix + arm.edge;
            ref.end = prefix;
            by_facet[arm.facet_id].push_back(std::move(ref));
            poly.edges.push_back({arm.facet_id, arm.edge});
        }
        if (!is_zero(prefix)) {
            RatVec closing(3);
            for (int j = 0; j < 3; ++j) closing[j] = -prefix[j];
            poly.edges.push_back({-1, std::move(closing)});
        }
        result.polygons.push_back(std::move(poly));
    }
    // identification: a facet shared by two stars is traversed in opposite
    // directions, so the start of one segment matches the end of the other
    const int vars = 3 * static_cast<int>(input.stars.size());
    for (const auto& entry : by_facet) {
        const auto& refs = entry.second;
        if (refs.size() > 2)
            fail(ErrorCode::InvalidInput, "facet appears in more than two stars");
        if (refs.size() < 2) continue;
        const EdgeRef& a = refs[0];
        const EdgeRef& b = refs[1];
        for (int j = 0; j < 3; ++j) {
            RatVec row(vars, Rat(0));
            row[3 * a.star + j] = 1;
            row[3 * b.star + j] = -1;
            result.system_rows.push_back(std::move(row));
            result.system_rhs.push_back(b.end[j] - a.start[j]);
        }
    }
    LinearSolve sol = solve_linear_system(result.system_rows, result.system_rhs);
    if (!sol.consistent) {
        result.feasible = false;
        result.certificate = sol.certificate;
        RatVec combo(vars, Rat(0));
        Rat rhs = 0;
        for (std::size_t i = 0; i < result.system_rows.size(); ++i) {
            for (int j = 0; j < vars; ++j)
                combo[j] += sol.certificate[i] * result.system_rows[i][j];
            rhs += sol.certificate[i] * result.system_rhs[i];
        }
        if (!is_zero(combo) || rhs == 0)
            fail(ErrorCode::Internal, "gluing certificate failed to verify");
        return result;
    }
    result.feasible = true;
    RatVec x = sol.solution;
    if (static_cast<int>(x.size()) < vars) x.resize(vars, Rat(0));
    for (int s = 0; s < static_cast<int>(input.stars.size()); ++s) {
        RatVec placement{x[3 * s], x[3 * s + 1], x[3 * s + 2]};
        result.placements.push_back({input.stars[s].ray, std::move(placement)});
    }
    return result;
}

}  // namespace dcsplit
