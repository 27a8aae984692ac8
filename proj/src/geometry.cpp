#include "dcsplit/geometry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "dcsplit/error.hpp"
#include "dcsplit/linalg.hpp"
#include "dcsplit/lp.hpp"

namespace dcsplit {

namespace {

std::pair<RatMat, RatVec> rows_of(const std::vector<Inequality>& ineqs, int skip_a = -1,
                                  int skip_b = -1) {
    RatMat rows;
    RatVec rhs;
    for (int k = 0; k < static_cast<int>(ineqs.size()); ++k) {
        if (k == skip_a || k == skip_b) continue;
        rows.push_back(to_rat_vec(ineqs[k].normal));
        rhs.push_back(ineqs[k].rhs);
    }
    return {rows, rhs};
}

bool parallel(const IntVec& a, const IntVec& b) {
    return a == b || a == negate(b);
}

std::string idstr(int id) {
    std::ostringstream os;
    os << id;
    return os.str();
}

// is there a point with eq pinned, loose rows satisfied, and the strict row
// exceeded by a positive margin?
bool strictly_feasible(const RatMat& eq, const RatVec& eqr, const RatMat& loose,
                       const RatVec& loose_rhs, const RatVec& strict_row,
                       const Rat& strict_rhs) {
    const int n = static_cast<int>(strict_row.size());
    LinearProgram lp;
    lp.vars = n + 1;
    for (std::size_t i = 0; i < eq.size(); ++i) {
        RatVec row = eq[i];
        row.push_back(Rat(0));
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(eqr[i]);
    }
    for (std::size_t i = 0; i < loose.size(); ++i) {
        RatVec row = loose[i];
        row.push_back(Rat(0));
        lp.ineq_rows.push_back(std::move(row));
        lp.ineq_rhs.push_back(loose_rhs[i]);
    }
    RatVec srow = strict_row;
    srow.push_back(Rat(-1));
    lp.ineq_rows.push_back(std::move(srow));
    lp.ineq_rhs.push_back(strict_rhs);
    RatVec cap(n + 1, Rat(0));
    cap[n] = -1;
    lp.ineq_rows.push_back(std::move(cap));
    lp.ineq_rhs.push_back(Rat(-1));
    lp.objective.assign(n + 1, Rat(0));
    lp.objective[n] = -1;
    LPResult res = lp_solve(lp);
    return res.status == LPStatus::Optimal && res.point[n] > 0;
}

}  // namespace

Hyperplane Hyperplane::canonical(const RatVec& nu, const Rat& c) {
    IntVec prim = primitive_normal(nu);
    // scale the offset consistently: prim = lambda * nu with lambda > 0
    int k = 0;
    while (nu[k] == 0) ++k;
    Rat lambda = Rat(prim[k]) / nu[k];
    Rat offset = lambda * c;
    for (const auto& e : prim) {
        if (e == 0) continue;
        if (e < 0) return {negate(prim), -offset};
        break;
    }
    return {prim, offset};
}

Hyperplane Hyperplane::canonical(const IntVec& nu, const Rat& c) {
    return canonical(to_rat_vec(nu), c);
}

Inequality Inequality::normalized(const RatVec& nu, const Rat& c) {
    IntVec prim = primitive_normal(nu);
    int k = 0;
    while (nu[k] == 0) ++k;
    Rat lambda = Rat(prim[k]) / nu[k];
    return {prim, lambda * c};
}

Complex::Complex(int dim, std::vector<Cell> cells, std::vector<Facet> facets)
    : dim_(dim), cells_(std::move(cells)), facets_(std::move(facets)) {
    if (dim_ < 1) fail(ErrorCode::InvalidInput, "complex dimension must be >= 1");
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
        Cell& cell = cells_[i];
        if (!cell_by_id_.emplace(cell.id, i).second)
            fail(ErrorCode::InvalidInput, "duplicate cell id " + idstr(cell.id));
        for (auto& ineq : cell.ineqs) {
            if (static_cast<int>(ineq.normal.size()) != dim_)
                fail(ErrorCode::InvalidInput, "inequality dimension mismatch");
            if (is_zero(ineq.normal))
                fail(ErrorCode::InvalidInput, "zero inequality normal");
            ineq = Inequality::normalized(to_rat_vec(ineq.normal), ineq.rhs);
        }
    }
    for (int i = 0; i < static_cast<int>(facets_.size()); ++i) {
        Facet& f = facets_[i];
        if (!facet_by_id_.emplace(f.id, i).second)
            fail(ErrorCode::InvalidInput, "duplicate facet id " + idstr(f.id));
        if (static_cast<int>(f.plane.normal.size()) != dim_ || is_zero(f.plane.normal))
            fail(ErrorCode::InvalidInput, "bad facet normal");
        Hyperplane canon = Hyperplane::canonical(f.plane.normal, f.plane.offset);
        if (canon.normal != f.plane.normal) std::swap(f.pos_cell, f.neg_cell);
        f.plane = canon;
    }
    cell_facets_.assign(cells_.size(), {});
    for (int k = 0; k < static_cast<int>(facets_.size()); ++k) {
        auto pos = cell_by_id_.find(facets_[k].pos_cell);
        auto neg = cell_by_id_.find(facets_[k].neg_cell);
        if (pos != cell_by_id_.end()) cell_facets_[pos->second].push_back(k);
        if (neg != cell_by_id_.end()) cell_facets_[neg->second].push_back(k);
    }
    compute_interiors();
    if (dim_ >= 2) compute_codim2();
}

int Complex::cell_index(int id) const {
    auto it = cell_by_id_.find(id);
    return it == cell_by_id_.end() ? -1 : it->second;
}

int Complex::facet_index(int id) const {
    auto it = facet_by_id_.find(id);
    return it == facet_by_id_.end() ? -1 : it->second;
}

bool Complex::cell_contains(int cell_idx, const RatVec& x) const {
    for (const auto& ineq : cells_[cell_idx].ineqs) {
        if (dot(ineq.normal, x) < ineq.rhs) return false;
    }
    return true;
}

void Complex::compute_interiors() {
    cell_interior_.assign(cells_.size(), std::nullopt);
    facet_interior_.assign(facets_.size(), std::nullopt);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        auto [rows, rhs] = rows_of(cells_[i].ineqs);
        auto ip = relative_interior_point({}, {}, rows, rhs);
        if (ip && ip->margin > 0) cell_interior_[i] = ip->x;
    }
    for (std::size_t k = 0; k < facets_.size(); ++k) {
        const Facet& f = facets_[k];
        int pi = cell_index(f.pos_cell), ni = cell_index(f.neg_cell);
        if (pi < 0 || ni < 0) continue;
        // the two inequalities carried by the hyperplane itself are forced
        // tight and must not count against the relative-interior margin
        RatMat rows;
        RatVec rhs;
        auto add_cell = [&](int ci, bool positive_side) {
            const IntVec& match = positive_side ? f.plane.normal : negate(f.plane.normal);
            Rat match_rhs = positive_side ? f.plane.offset : -f.plane.offset;
            for (const auto& q : cells_[ci].ineqs) {
                if (q.normal == match && q.rhs == match_rhs) continue;
                rows.push_back(to_rat_vec(q.normal));
                rhs.push_back(q.rhs);
            }
        };
        add_cell(pi, true);
        add_cell(ni, false);
        RatMat eq{to_rat_vec(f.plane.normal)};
        RatVec eqr{f.plane.offset};
        auto ip = relative_interior_point(eq, eqr, rows, rhs);
        if (ip && ip->margin > 0) facet_interior_[k] = ip->x;
    }
}

bool angle_less(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) {
    auto half = [](const std::pair<Rat, Rat>& p) {
        return (p.second > 0 || (p.second == 0 && p.first > 0)) ? 0 : 1;
    };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Rat cross = a.first * b.second - a.second * b.first;
    return cross > 0;
}

void Complex::compute_codim2() {
    std::map<std::vector<int>, int> seen;  // facet set -> codim2 index
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
        const auto& ineqs = cells_[ci].ineqs;
        const int ni = static_cast<int>(ineqs.size());
        for (int i = 0; i < ni; ++i) {
            for (int j = i + 1; j < ni; ++j) {
                if (parallel(ineqs[i].normal, ineqs[j].normal)) continue;
                RatMat eq{to_rat_vec(ineqs[i].normal), to_rat_vec(ineqs[j].normal)};
                RatVec eqr{ineqs[i].rhs, ineqs[j].rhs};
                auto [rows, rhs] = rows_of(ineqs, i, j);
                auto ip = relative_interior_point(eq, eqr, rows, rhs);
                if (!ip || ip->margin <= 0) continue;
                const RatVec& x = ip->x;
                std::vector<int> on_facets;
                for (int k = 0; k < static_cast<int>(facets_.size()); ++k) {
                    const Facet& f = facets_[k];
                    if (dot(f.plane.normal, x) != f.plane.offset) continue;
                    int pi = cell_index(f.pos_cell), nidx = cell_index(f.neg_cell);
                    if (pi < 0 || nidx < 0) continue;
                    if (cell_contains(pi, x) && cell_contains(nidx, x)) on_facets.push_back(k);
                }
                if (static_cast<int>(on_facets.size()) < 3) {
                    codim2_diagnostics_.push_back(
                        "codim-2 witness in cell " + idstr(cells_[ci].id) +
                        " lies on fewer than 3 facets");
                    continue;
                }
                if (seen.count(on_facets)) continue;
                seen.emplace(on_facets, static_cast<int>(codim2_.size()));
                Codim2Face face;
                face.point = x;
                face.normal_a = ineqs[i].normal;
                face.normal_b = ineqs[j].normal;
                // order the star counterclockwise in the quotient plane
                std::vector<std::pair<std::pair<Rat, Rat>, int>> rays;
                bool ok = true;
                for (int k : on_facets) {
                    if (!facet_interior_[k]) { ok = false; break; }
                    RatVec d = *facet_interior_[k] - x;
                    std::pair<Rat, Rat> q{dot(face.normal_a, d), dot(face.normal_b, d)};
                    if (q.first == 0 && q.second == 0) { ok = false; break; }
                    rays.push_back({q, k});
                }
                if (!ok) {
                    codim2_diagnostics_.push_back(
                        "degenerate facet direction at a codim-2 face in cell " +
                        idstr(cells_[ci].id));
                    continue;
                }
                std::sort(rays.begin(), rays.end(),
                          [](const auto& a, const auto& b) { return angle_less(a.first, b.first); });
                const int m = static_cast<int>(rays.size());
                for (const auto& r : rays) face.star_facets.push_back(r.second);
                for (int k = 0; k < m; ++k) {
                    const Facet& fa = facets_[face.star_facets[k]];
                    const Facet& fb = facets_[face.star_facets[(k + 1) % m]];
                    std::set<int> sa{cell_index(fa.pos_cell), cell_index(fa.neg_cell)};
                    std::set<int> sb{cell_index(fb.pos_cell), cell_index(fb.neg_cell)};
                    std::vector<int> common;
                    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                          std::back_inserter(common));
                    if (common.size() != 1) {
                        codim2_diagnostics_.push_back(
                            "consecutive star facets share " +
                            idstr(static_cast<int>(common.size())) +
                            " cells at a codim-2 face (expected 1)");
                        face.star_cells.push_back(-1);
                    } else {
                        face.star_cells.push_back(common[0]);
                    }
                }
                codim2_.push_back(std::move(face));
            }
        }
    }
}

ValidationReport validate_complex(const Complex& c, const Caps&) {
    ValidationReport report;
    const auto& cells = c.cells();
    const auto& facets = c.facets();
    const int n = c.dim();

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!c.interior_point(i)) {
            report.add("cell-not-full-dimensional", "cell " + idstr(cells[i].id));
            continue;
        }
        const auto& ineqs = cells[i].ineqs;
        for (int k = 0; k < static_cast<int>(ineqs.size()); ++k) {
            RatMat eq{to_rat_vec(ineqs[k].normal)};
            RatVec eqr{ineqs[k].rhs};
            auto [rows, rhs] = rows_of(ineqs, k);
            auto ip = relative_interior_point(eq, eqr, rows, rhs);
            if (!ip || ip->margin <= 0)
                report.add("redundant-inequality",
                           "cell " + idstr(cells[i].id) + " inequality " + idstr(k));
        }
    }

    for (std::size_t k = 0; k < facets.size(); ++k) {
        const Facet& f = facets[k];
        int pi = c.cell_index(f.pos_cell), ni = c.cell_index(f.neg_cell);
        if (pi < 0 || ni < 0 || pi == ni) {
            report.add("facet-bad-cells", "facet " + idstr(f.id));
            continue;
        }
        bool pos_has = false, neg_has = false;
        for (const auto& q : cells[pi].ineqs)
            if (q.normal == f.plane.normal && q.rhs == f.plane.offset) pos_has = true;
        for (const auto& q : cells[ni].ineqs)
            if (q.normal == negate(f.plane.normal) && q.rhs == -f.plane.offset) neg_has = true;
        if (!pos_has || !neg_has)
            report.add("facet-not-cell-inequality", "facet " + idstr(f.id));
        if (!c.facet_point(k))
            report.add("facet-not-codim-1", "facet " + idstr(f.id));
    }

    // completeness: every facet-defining inequality of every cell is matched
    // by exactly one facet record
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (const auto& q : cells[i].ineqs) {
            Hyperplane h = Hyperplane::canonical(q.normal, q.rhs);
            bool flipped = h.normal != q.normal;
            int count = 0;
            for (const Facet& f : facets) {
                if (!(f.plane == h)) continue;
                int side = flipped ? f.neg_cell : f.pos_cell;
                if (side == cells[i].id) ++count;
            }
            if (count == 0)
                report.add("unmatched-facet",
                           "cell " + idstr(cells[i].id) + " has an uncovered boundary facet");
            if (count > 1)
                report.add("duplicate-facet", "cell " + idstr(cells[i].id));
        }
    }

    // pairwise face-intersection property via exact affine hulls
    for (std::size_t a = 0; a < cells.size(); ++a) {
        if (!c.interior_point(a)) continue;
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
            if (!c.interior_point(b)) continue;
            auto [rows, rhs] = rows_of(cells[a].ineqs);
            auto [rows2, rhs2] = rows_of(cells[b].ineqs);
            RatMat all = rows;
            all.insert(all.end(), rows2.begin(), rows2.end());
            RatVec allr = rhs;
            allr.insert(allr.end(), rhs2.begin(), rhs2.end());
            auto ip = relative_interior_point({}, {}, all, allr);
            if (!ip) continue;
            if (ip->margin > 0) {
                report.add("full-dimensional-overlap",
                           "cells " + idstr(cells[a].id) + " and " + idstr(cells[b].id));
                continue;
            }
            // is the intersection empty?
            LinearProgram feas;
            feas.vars = n;
            feas.ineq_rows = all;
            feas.ineq_rhs = allr;
            feas.objective.assign(n, Rat(0));
            if (lp_solve(feas).status == LPStatus::Infeasible) continue;
            // implicit equalities give the affine hull of the intersection
            RatMat hull_rows;
            RatVec hull_rhs;
            for (std::size_t t = 0; t < all.size(); ++t) {
                RatVec neg_row(n);
                for (int j = 0; j < n; ++j) neg_row[j] = -all[t][j];
                // row·x <= rhs over the intersection means the row is an
                // implicit equality
                LinearProgram up;
                up.vars = n;
                up.ineq_rows = all;
                up.ineq_rhs = allr;
                up.objective = neg_row;  // maximize row·x
                LPResult r = lp_solve(up);
                bool tight = r.status == LPStatus::Optimal && -r.objective_value <= allr[t];
                if (tight) {
                    hull_rows.push_back(all[t]);
                    hull_rhs.push_back(allr[t]);
                }
            }
            // P ∩ aff(S) must stay inside Q, and symmetrically
            auto check_side = [&](std::size_t own, std::size_t other) {
                auto [orows, orhs] = rows_of(cells[own].ineqs);
                for (const auto& q : cells[other].ineqs) {
                    RatVec viol(n);
                    for (int j = 0; j < n; ++j) viol[j] = -Rat(q.normal[j]);
                    if (strictly_feasible(hull_rows, hull_rhs, orows, orhs, viol, -q.rhs)) {
                        report.add("face-intersection-violation",
                                   "cells " + idstr(cells[own].id) + " and " +
                                       idstr(cells[other].id));
                        return;
                    }
                }
            };
            check_side(a, b);
            check_side(b, a);
        }
    }

    for (const auto& diag : c.codim2_diagnostics()) report.add("star-structure", diag);
    for (const auto& face : c.codim2()) {
        std::set<int> star_cells(face.star_cells.begin(), face.star_cells.end());
        if (star_cells.count(-1)) continue;  // already diagnosed
        if (star_cells.size() != face.star_cells.size())
            report.add("star-structure", "repeated cell in a codim-2 star");
        std::set<int> containing;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (c.cell_contains(i, face.point)) containing.insert(static_cast<int>(i));
        if (containing != star_cells)
            report.add("star-structure", "codim-2 star does not close around the face");
    }

    // dual graph connectivity
    if (report.valid() && !cells.empty()) {
        std::vector<int> parent(cells.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (const Facet& f : facets) {
            int a = c.cell_index(f.pos_cell), b = c.cell_index(f.neg_cell);
            if (a >= 0 && b >= 0) parent[find(a)] = find(b);
        }
        std::set<int> roots;
        for (std::size_t i = 0; i < parent.size(); ++i) roots.insert(find(static_cast<int>(i)));
        if (roots.size() > 1) report.add("dual-graph-disconnected", "");
    }
    return report;
}

namespace {

struct SignRegion {
    std::vector<int> signs;
    std::vector<Inequality> ineqs;          // irredundant
    std::vector<int> ineq_hyperplane;       // hyperplane index per kept ineq
};

void sign_dfs(const std::vector<Hyperplane>& hs, const std::vector<Inequality>& base,
              std::vector<int>& signs, std::vector<Inequality>& acc,
              std::vector<SignRegion>& out) {
    std::size_t k = signs.size();
    if (k == hs.size()) {
        // filter to the facet-defining inequalities; exact duplicates (a
        // hyperplane repeating a base inequality) are collapsed first or the
        // pair would mark each other redundant
        SignRegion region;
        region.signs = signs;
        std::vector<Inequality> all;
        std::vector<int> origin;
        const int nb = static_cast<int>(base.size());
        for (int t = 0; t < nb + static_cast<int>(acc.size()); ++t) {
            const Inequality& q = t < nb ? base[t] : acc[t - nb];
            bool dup = false;
            for (const auto& seen : all) dup = dup || seen == q;
            if (dup) continue;
            all.push_back(q);
            origin.push_back(t < nb ? -1 : t - nb);
        }
        for (int t = 0; t < static_cast<int>(all.size()); ++t) {
            RatMat eq{to_rat_vec(all[t].normal)};
            RatVec eqr{all[t].rhs};
            auto [rows, rhs] = rows_of(all, t);
            auto ip = relative_interior_point(eq, eqr, rows, rhs);
            if (ip && ip->margin > 0) {
                region.ineqs.push_back(all[t]);
                region.ineq_hyperplane.push_back(origin[t]);
            }
        }
        out.push_back(std::move(region));
        return;
    }
    for (int s : {1, -1}) {
        Inequality iq;
        iq.normal = s > 0 ? hs[k].normal : negate(hs[k].normal);
        iq.rhs = s > 0 ? hs[k].offset : -hs[k].offset;
        acc.push_back(iq);
        signs.push_back(s);
        std::vector<Inequality> all = base;
        all.insert(all.end(), acc.begin(), acc.end());
        auto [rows, rhs] = rows_of(all);
        auto ip = relative_interior_point({}, {}, rows, rhs);
        if (ip && ip->margin > 0) sign_dfs(hs, base, signs, acc, out);
        signs.pop_back();
        acc.pop_back();
    }
}

std::vector<Hyperplane> dedupe_canonical(std::vector<Hyperplane> hs) {
    for (auto& h : hs) h = Hyperplane::canonical(h.normal, h.offset);
    std::vector<Hyperplane> out;
    for (const auto& h : hs) {
        bool dup = false;
        for (const auto& g : out) dup = dup || g == h;
        if (!dup) out.push_back(h);
    }
    return out;
}

}  // namespace

Complex arrangement_complex(std::vector<Hyperplane> hyperplanes, int dim, const Caps& caps) {
    std::vector<Hyperplane> hs = dedupe_canonical(hyperplanes);
    if (hs.size() != hyperplanes.size())
        fail(ErrorCode::InvalidInput, "arrangement hyperplanes must be pairwise distinct");
    if (dim > caps.dim) fail(ErrorCode::CapExceeded, "arrangement dimension cap exceeded");
    if (static_cast<int>(hs.size()) > caps.hyperplanes)
        fail(ErrorCode::CapExceeded, "arrangement hyperplane cap exceeded");
    for (const auto& h : hs) {
        if (static_cast<int>(h.normal.size()) != dim)
            fail(ErrorCode::InvalidInput, "hyperplane dimension mismatch");
    }
    std::vector<SignRegion> regions;
    std::vector<int> signs;
    std::vector<Inequality> acc;
    if (hs.empty()) {
        // no hyperplanes: a single cell covering space, no facets (valid
        // only as a degenerate complex; kept for completeness)
        std::vector<Cell> cells{Cell{0, {}}};
        return Complex(dim, std::move(cells), {});
    }
    sign_dfs(hs, {}, signs, acc, regions);

    std::vector<Cell> cells;
    std::map<std::vector<int>, int> by_signs;
    for (int i = 0; i < static_cast<int>(regions.size()); ++i) {
        cells.push_back(Cell{i, regions[i].ineqs});
        by_signs[regions[i].signs] = i;
    }
    // facets: sign flips across each facet-defining hyperplane
    std::set<std::tuple<int, int, int>> keys;  // (hyperplane, min cell, max cell)
    std::vector<Facet> facets;
    for (int i = 0; i < static_cast<int>(regions.size()); ++i) {
        for (std::size_t t = 0; t < regions[i].ineqs.size(); ++t) {
            int h = regions[i].ineq_hyperplane[t];
            if (h < 0) continue;
            std::vector<int> flipped = regions[i].signs;
            flipped[h] = -flipped[h];
            auto it = by_signs.find(flipped);
            if (it == by_signs.end())
                fail(ErrorCode::Internal, "arrangement neighbor region missing");
            int j = it->second;
            auto key = std::make_tuple(h, std::min(i, j), std::max(i, j));
            if (!keys.insert(key).second) continue;
            Facet f;
            f.plane = hs[h];
            f.pos_cell = regions[i].signs[h] > 0 ? i : j;
            f.neg_cell = regions[i].signs[h] > 0 ? j : i;
            facets.push_back(f);
        }
    }
    std::sort(facets.begin(), facets.end(), [&](const Facet& a, const Facet& b) {
        if (!(a.plane == b.plane)) return a.plane < b.plane;
        if (a.pos_cell != b.pos_cell) return a.pos_cell < b.pos_cell;
        return a.neg_cell < b.neg_cell;
    });
    for (int k = 0; k < static_cast<int>(facets.size()); ++k) facets[k].id = k;
    return Complex(dim, std::move(cells), std::move(facets));
}

std::vector<Facet> facets_from_cells(const std::vector<Cell>& cells, int dim) {
    std::vector<Facet> facets;
    for (std::size_t a = 0; a < cells.size(); ++a) {
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
            for (const auto& qa : cells[a].ineqs) {
                bool matched = false;
                for (const auto& qb : cells[b].ineqs) {
                    if (qb.normal == negate(qa.normal) && qb.rhs == -qa.rhs) matched = true;
                }
                if (!matched) continue;
                // the matched inequality pair is forced tight on the facet
                // hyperplane and must not count against the margin
                RatMat rows;
                RatVec rhs;
                for (const auto& q : cells[a].ineqs) {
                    if (q.normal == qa.normal && q.rhs == qa.rhs) continue;
                    rows.push_back(to_rat_vec(q.normal));
                    rhs.push_back(q.rhs);
                }
                for (const auto& q : cells[b].ineqs) {
                    if (q.normal == negate(qa.normal) && q.rhs == -qa.rhs) continue;
                    rows.push_back(to_rat_vec(q.normal));
                    rhs.push_back(q.rhs);
                }
                RatMat eq{to_rat_vec(qa.normal)};
                RatVec eqr{qa.rhs};
                auto ip = relative_interior_point(eq, eqr, rows, rhs);
                if (!ip || ip->margin <= 0) continue;
                Facet f;
                f.plane = Hyperplane::canonical(qa.normal, qa.rhs);
                bool same_orientation = f.plane.normal == qa.normal;
                f.pos_cell = same_orientation ? cells[a].id : cells[b].id;
                f.neg_cell = same_orientation ? cells[b].id : cells[a].id;
                f.id = static_cast<int>(facets.size());
                facets.push_back(std::move(f));
            }
        }
    }
    return facets;
}

RefineResult refine(const Complex& c, std::vector<Hyperplane> hyperplanes, const Caps& caps) {
    std::vector<Hyperplane> hs = dedupe_canonical(std::move(hyperplanes));
    if (static_cast<int>(hs.size()) > caps.hyperplanes)
        fail(ErrorCode::CapExceeded, "refinement hyperplane cap exceeded");
    std::vector<Cell> new_cells;
    std::vector<int> ancestry;
    for (std::size_t ci = 0; ci < c.cells().size(); ++ci) {
        std::vector<SignRegion> regions;
        std::vector<int> signs;
        std::vector<Inequality> acc;
        if (hs.empty()) {
            SignRegion whole;
            whole.ineqs = c.cells()[ci].ineqs;
            whole.ineq_hyperplane.assign(whole.ineqs.size(), -1);
            regions.push_back(whole);
        } else {
            sign_dfs(hs, c.cells()[ci].ineqs, signs, acc, regions);
        }
        for (auto& region : regions) {
            Cell cell;
            cell.id = static_cast<int>(new_cells.size());
            cell.ineqs = region.ineqs;
            new_cells.push_back(std::move(cell));
            ancestry.push_back(static_cast<int>(ci));
        }
    }
    std::vector<Facet> facets = facets_from_cells(new_cells, c.dim());
    RefineResult result;
    result.complex = std::make_shared<Complex>(c.dim(), std::move(new_cells), std::move(facets));
    result.ancestry = std::move(ancestry);
    return result;
}

int locate(const Complex& c, const RatVec& x) {
    if (static_cast<int>(x.size()) != c.dim())
        fail(ErrorCode::DimMismatch, "locate: point dimension mismatch");
    int best = -1;
    for (std::size_t i = 0; i < c.cells().size(); ++i) {
        if (!c.cell_contains(i, x)) continue;
        int id = c.cells()[i].id;
        if (best < 0 || id < best) best = id;
    }
    if (best < 0)
        fail(ErrorCode::InvalidInput, "locate: point not covered (complex incomplete?)");
    return best;
}

std::vector<std::vector<std::pair<IntVec, Rat>>> canonical_cells(const Complex& c) {
    std::vector<std::vector<std::pair<IntVec, Rat>>> out;
    for (const auto& cell : c.cells()) {
        std::vector<std::pair<IntVec, Rat>> rows;
        for (const auto& q : cell.ineqs) rows.push_back({q.normal, q.rhs});
        std::sort(rows.begin(), rows.end());
        out.push_back(std::move(rows));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dcsplit
