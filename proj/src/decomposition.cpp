#include "dcsplit/decomposition.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dcsplit/error.hpp"
#include "dcsplit/linalg.hpp"

namespace dcsplit {

namespace {

// rows of the balancing system, one n-block per codim-2 face
RatMat balance_matrix(const Complex& c) {
    RatMat rows;
    const int m = static_cast<int>(c.facets().size());
    for (const auto& face : c.codim2()) {
        const int s = static_cast<int>(face.star_facets.size());
        RatMat block(c.dim(), RatVec(m, Rat(0)));
        for (int k = 0; k < s; ++k) {
            int fk = face.star_facets[(k + 1) % s];
            int to = face.star_cells[(k + 1) % s];
            const Facet& facet = c.facets()[fk];
            Rat sign = (to == c.cell_index(facet.pos_cell)) ? Rat(1) : Rat(-1);
            for (int j = 0; j < c.dim(); ++j)
                block[j][fk] += sign * Rat(facet.plane.normal[j]);
        }
        for (auto& row : block) rows.push_back(std::move(row));
    }
    return rows;
}

int lowest_cell_id(const Complex& c) {
    int best = c.cells().front().id;
    for (const auto& cell : c.cells()) best = std::min(best, cell.id);
    return best;
}

}  // namespace

DecompPolyhedron::DecompPolyhedron(CPWL f) : f_(std::move(f)) {
    const Complex& c = f_.complex();
    wf_ = weights(f_);
    gauge_id_ = lowest_cell_id(c);
    const int n = c.dim();
    const int m = static_cast<int>(c.facets().size());
    const int ncells = static_cast<int>(c.cells().size());
    const int gauge_idx = c.cell_index(gauge_id_);

    // official H-rep: variables [λ | (a_P, b_P) per non-gauge cell]
    std::vector<int> var_of_cell(ncells, -1);
    int next = m;
    for (int ci = 0; ci < ncells; ++ci) {
        if (ci == gauge_idx) continue;
        var_of_cell[ci] = next;
        next += n + 1;
    }
    hrep_.vars = next;
    for (int k = 0; k < m; ++k) {
        const Facet& facet = c.facets()[k];
        int pi = c.cell_index(facet.pos_cell), ni = c.cell_index(facet.neg_cell);
        for (int j = 0; j <= n; ++j) {
            RatVec row(hrep_.vars, Rat(0));
            if (j < n) {
                // a_pos[j] - a_neg[j] - λ ν[j] = 0
                if (var_of_cell[pi] >= 0) row[var_of_cell[pi] + j] = 1;
                if (var_of_cell[ni] >= 0) row[var_of_cell[ni] + j] = -1;
                row[k] = -Rat(facet.plane.normal[j]);
            } else {
                // b_pos - b_neg + λ c = 0
                if (var_of_cell[pi] >= 0) row[var_of_cell[pi] + n] = 1;
                if (var_of_cell[ni] >= 0) row[var_of_cell[ni] + n] = -1;
                row[k] = facet.plane.offset;
            }
            hrep_.eq_rows.push_back(std::move(row));
            hrep_.eq_rhs.push_back(Rat(0));
        }
    }
    for (int k = 0; k < m; ++k) {
        RatVec row(hrep_.vars, Rat(0));
        row[k] = 1;
        hrep_.ineq_rows.push_back(row);
        hrep_.ineq_rhs.push_back(Rat(0));
        hrep_.ineq_rows.push_back(std::move(row));
        hrep_.ineq_rhs.push_back(wf_.omega[k]);
    }

    // λ-space H-rep and the balanced-subspace parameterization
    lambda_hrep_.vars = m;
    RatMat bal = balance_matrix(c);
    for (const auto& row : bal) {
        lambda_hrep_.eq_rows.push_back(row);
        lambda_hrep_.eq_rhs.push_back(Rat(0));
    }
    for (int k = 0; k < m; ++k) {
        RatVec row(m, Rat(0));
        row[k] = 1;
        lambda_hrep_.ineq_rows.push_back(row);
        lambda_hrep_.ineq_rhs.push_back(Rat(0));
        lambda_hrep_.ineq_rows.push_back(std::move(row));
        lambda_hrep_.ineq_rhs.push_back(wf_.omega[k]);
    }
    basis_ = nullspace(bal, m);
    bound_.assign(m, Rat(0));
    for (int k = 0; k < m; ++k) bound_[k] = wf_.omega[k] > 0 ? wf_.omega[k] : Rat(0);
}

RatVec DecompPolyhedron::weights_of(const RatVec& z) const {
    const int m = static_cast<int>(bound_.size());
    RatVec w(m, Rat(0));
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        if (z[j] == 0) continue;
        for (int k = 0; k < m; ++k) w[k] += z[j] * basis_[j][k];
    }
    return w;
}

DecompPoint DecompPolyhedron::lift(const Weights& wg) const {
    CPWL g = from_weights(wg, f_.complex_ptr(), gauge_id_);
    CPWL h = linear_combination(Rat(1), g, Rat(-1), f_);
    Weights wh;
    wh.omega = wg.omega - wf_.omega;
    return DecompPoint{std::move(g), std::move(h), wg, std::move(wh)};
}

DecompPolyhedron build_decomposition_polyhedron(const CPWL& f) {
    return DecompPolyhedron(f);
}

DecompPoint solve_reduced(const CPWL& f, const RatVec* objective) {
    DecompPolyhedron poly(f);
    const int m = static_cast<int>(poly.bound().size());
    const int d = poly.w_dim();
    RatVec c(m, Rat(1));
    if (objective) {
        if (static_cast<int>(objective->size()) != m)
            fail(ErrorCode::InvalidInput, "objective must give one weight per facet");
        for (const auto& v : *objective)
            if (v <= 0) fail(ErrorCode::InvalidInput, "objective weights must be positive");
        c = *objective;
    }
    LinearProgram lp;
    lp.vars = d;
    lp.objective.assign(d, Rat(0));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < m; ++k) lp.objective[j] += c[k] * poly.w_basis()[j][k];
    }
    for (int k = 0; k < m; ++k) {
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = poly.w_basis()[j][k];
        lp.ineq_rows.push_back(std::move(row));
        lp.ineq_rhs.push_back(poly.bound()[k]);
    }
    LPResult res = lp_solve(lp);
    if (res.status == LPStatus::Infeasible)
        fail(ErrorCode::Infeasible, "decomposition polyhedron is empty on this complex");
    if (res.status != LPStatus::Optimal)
        fail(ErrorCode::Internal, "positive functional unbounded on the decomposition polyhedron");
    Weights wg;
    wg.omega = poly.weights_of(res.point);
    return poly.lift(wg);
}

namespace {

void decomposition_dfs(const std::vector<RatVec>& rows, const RatVec& bound, int next,
                       int needed, Echelon& ech, std::set<RatVec>& found) {
    if (needed == 0) {
        RatVec z = ech.solve();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (dot(rows[k], z) < bound[k]) return;
        }
        found.insert(std::move(z));
        return;
    }
    const int m = static_cast<int>(rows.size());
    for (int k = next; k + needed <= m; ++k) {
        if (!ech.push(rows[k], bound[k])) continue;
        decomposition_dfs(rows, bound, k + 1, needed - 1, ech, found);
        ech.pop();
    }
}

}  // namespace

std::vector<DecompPoint> enumerate_decompositions(const CPWL& f, const Caps& caps) {
    DecompPolyhedron poly(f);
    const int m = static_cast<int>(poly.bound().size());
    const int d = poly.w_dim();
    if (d > caps.enum_dim)
        fail(ErrorCode::CapExceeded, "decomposition enumeration dimension cap exceeded");
    if (2 * m > caps.enum_ineqs)
        fail(ErrorCode::CapExceeded, "decomposition enumeration inequality cap exceeded");

    std::vector<RatVec> rows(m);  // constraint rows over z, one per facet
    for (int k = 0; k < m; ++k) {
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = poly.w_basis()[j][k];
        rows[k] = std::move(row);
    }
    std::set<RatVec> found;
    if (d == 0) {
        bool feasible = true;
        for (int k = 0; k < m; ++k) feasible = feasible && poly.bound()[k] <= 0;
        if (feasible) found.insert(RatVec());
    } else {
        Echelon ech(d);
        decomposition_dfs(rows, poly.bound(), 0, d, ech, found);
    }
    if (found.empty()) {
        // a nonempty region here always has a vertex (pointed recession cone)
        LinearProgram feas;
        feas.vars = d;
        feas.objective.assign(d, Rat(0));
        for (int k = 0; k < m; ++k) {
            RatVec row = rows[k];
            feas.ineq_rows.push_back(std::move(row));
            feas.ineq_rhs.push_back(poly.bound()[k]);
        }
        if (d == 0 || lp_solve(feas).status == LPStatus::Infeasible)
            fail(ErrorCode::Infeasible, "decomposition polyhedron is empty on this complex");
        fail(ErrorCode::Internal, "feasible decomposition polyhedron without vertices");
    }
    std::set<RatVec> weight_vectors;
    for (const auto& z : found) weight_vectors.insert(poly.weights_of(z));
    std::vector<DecompPoint> out;
    for (const auto& w : weight_vectors) {
        Weights wg;
        wg.omega = w;
        out.push_back(poly.lift(wg));
    }
    return out;
}

bool is_vertex(const DecompPoint& p) {
    const Complex& c = p.g.complex();
    const int m = static_cast<int>(c.facets().size());
    for (int k = 0; k < m; ++k) {
        if (p.wg.omega[k] < 0 || p.wh.omega[k] < 0)
            fail(ErrorCode::Infeasible, "decomposition point is not feasible");
    }
    RatMat bal = balance_matrix(c);
    std::vector<RatVec> basis = nullspace(bal, m);
    const int d = static_cast<int>(basis.size());
    RatMat tight_rows;
    for (int k = 0; k < m; ++k) {
        if (p.wg.omega[k] != 0 && p.wh.omega[k] != 0) continue;
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = basis[j][k];
        tight_rows.push_back(std::move(row));
    }
    return rank_of(tight_rows) == d;
}

bool is_reduced(const DecompPoint& p) {
    const Complex& c = p.g.complex();
    const int m = static_cast<int>(c.facets().size());
    RatMat bal = balance_matrix(c);
    std::vector<RatVec> basis = nullspace(bal, m);
    const int d = static_cast<int>(basis.size());
    // find ω_φ = N z with ω_φ ≥ 0, Σ ω_φ = 1, ω_g - ω_φ ≥ 0, ω_h - ω_φ ≥ 0
    LinearProgram lp;
    lp.vars = d;
    lp.objective.assign(d, Rat(0));
    RatVec sum_row(d, Rat(0));
    for (int k = 0; k < m; ++k) {
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = basis[j][k];
        for (int j = 0; j < d; ++j) sum_row[j] += row[j];
        RatVec neg(d);
        for (int j = 0; j < d; ++j) neg[j] = -row[j];
        lp.ineq_rows.push_back(std::move(row));
        lp.ineq_rhs.push_back(Rat(0));
        RatVec neg_g = neg, neg_h = neg;
        lp.ineq_rows.push_back(std::move(neg_g));
        lp.ineq_rhs.push_back(-p.wg.omega[k]);
        lp.ineq_rows.push_back(std::move(neg_h));
        lp.ineq_rhs.push_back(-p.wh.omega[k]);
    }
    lp.eq_rows.push_back(std::move(sum_row));
    lp.eq_rhs.push_back(Rat(1));
    return lp_solve(lp).status == LPStatus::Infeasible;
}

std::vector<MinimalEntry> minimal_set(const CPWL& f, const Caps& caps) {
    std::vector<DecompPoint> vertices = enumerate_decompositions(f, caps);
    std::vector<MinimalEntry> entries;
    for (auto& v : vertices) {
        int pg = coarsen(v.g).piece_count;
        int ph = coarsen(v.h).piece_count;
        entries.push_back(MinimalEntry{std::move(v), pg, ph});
    }
    std::vector<MinimalEntry> minimal;
    for (const auto& e : entries) {
        bool dominated = false;
        for (const auto& other : entries) {
            if (other.pieces_g <= e.pieces_g && other.pieces_h <= e.pieces_h &&
                (other.pieces_g < e.pieces_g || other.pieces_h < e.pieces_h))
                dominated = true;
        }
        if (!dominated) minimal.push_back(e);
    }
    std::sort(minimal.begin(), minimal.end(), [](const MinimalEntry& a, const MinimalEntry& b) {
        if (a.pieces_g != b.pieces_g) return a.pieces_g < b.pieces_g;
        if (a.pieces_h != b.pieces_h) return a.pieces_h < b.pieces_h;
        return a.point.wg.omega < b.point.wg.omega;
    });
    return minimal;
}

bool unique_vertex_certificate(const CPWL& f, const CPWL& g, const CPWL& h) {
    if (!complexes_equal(f.complex(), g.complex()) || !complexes_equal(f.complex(), h.complex()))
        fail(ErrorCode::ComplexMismatch, "certificate requires a shared complex");
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        if (!(g.piece(i).a - h.piece(i).a == f.piece(i).a) ||
            g.piece(i).b - h.piece(i).b != f.piece(i).b)
            fail(ErrorCode::DecompositionMismatch, "g - h does not equal f");
    }
    SupportSets sf = supports(f);
    SupportSets sg = supports(g);
    SupportSets sh = supports(h);
    return sg.all == sf.plus && sh.all == sf.minus;
}

bool is_regular(const Complex& c) {
    const int m = static_cast<int>(c.facets().size());
    if (m == 0) return true;
    RatMat bal = balance_matrix(c);
    std::vector<RatVec> basis = nullspace(bal, m);
    const int d = static_cast<int>(basis.size());
    LinearProgram lp;
    lp.vars = d;
    lp.objective.assign(d, Rat(0));
    for (int k = 0; k < m; ++k) {
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = basis[j][k];
        lp.ineq_rows.push_back(std::move(row));
        lp.ineq_rhs.push_back(Rat(1));
    }
    return lp_solve(lp).status != LPStatus::Infeasible;
}

std::optional<CPWL> regular_witness(const ComplexPtr& c) {
    const int m = static_cast<int>(c->facets().size());
    RatMat bal = balance_matrix(*c);
    std::vector<RatVec> basis = nullspace(bal, m);
    const int d = static_cast<int>(basis.size());
    LinearProgram lp;
    lp.vars = d;
    lp.objective.assign(d, Rat(0));
    for (int k = 0; k < m; ++k) {
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = basis[j][k];
        lp.ineq_rows.push_back(std::move(row));
        lp.ineq_rhs.push_back(Rat(1));
    }
    LPResult res = lp_solve(lp);
    if (res.status == LPStatus::Infeasible) return std::nullopt;
    if (res.status != LPStatus::Optimal) fail(ErrorCode::Internal, "witness LP unbounded");
    Weights w;
    w.omega.assign(m, Rat(0));
    for (int j = 0; j < d; ++j) {
        if (res.point[j] == 0) continue;
        for (int k = 0; k < m; ++k) w.omega[k] += res.point[j] * basis[j][k];
    }
    int gauge = lowest_cell_id(*c);
    return from_weights(w, c, gauge);
}

DecompPoint decompose_via_regular(const CPWL& f) {
    auto witness = regular_witness(f.complex_ptr());
    if (!witness) fail(ErrorCode::NotRegular, "complex admits no strictly positive weights");
    Weights wf = weights(f);
    Weights wg0 = weights(*witness);
    Rat lambda = 0;
    for (std::size_t k = 0; k < wf.omega.size(); ++k) {
        Rat need = -wf.omega[k] / wg0.omega[k];
        if (need > lambda) lambda = need;
    }
    CPWL big = linear_combination(Rat(1), f, lambda, *witness);
    CPWL part = linear_combination(lambda, *witness, Rat(0), f);
    Weights wbig = weights(big);
    Weights wpart = weights(part);
    return DecompPoint{std::move(big), std::move(part), std::move(wbig), std::move(wpart)};
}

}  // namespace dcsplit
