#include "dcsplit/lp.hpp"

#include <algorithm>
#include <set>

#include "dcsplit/error.hpp"
#include "dcsplit/linalg.hpp"

namespace dcsplit {

namespace {

// Dense tableau simplex over the rationals. Column layout of the standard
// form: x = u - v (free variable split), one surplus per inequality, one
// artificial per row.
class Simplex {
  public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) {
        n_ = lp.vars;
        ne_ = static_cast<int>(lp.eq_rows.size());
        ni_ = static_cast<int>(lp.ineq_rows.size());
        m_ = ne_ + ni_;
        su_ = 2 * n_;
        art_ = su_ + ni_;
        cols_ = art_ + m_;
        flip_.assign(m_, Rat(1));
        tab_.assign(m_, RatVec(cols_ + 1, Rat(0)));
        basis_.assign(m_, 0);
        for (int i = 0; i < m_; ++i) {
            const RatVec& row = i < ne_ ? lp.eq_rows[i] : lp.ineq_rows[i - ne_];
            const Rat& rhs = i < ne_ ? lp.eq_rhs[i] : lp.ineq_rhs[i - ne_];
            Rat f = rhs < 0 ? Rat(-1) : Rat(1);
            flip_[i] = f;
            for (int j = 0; j < n_; ++j) {
                tab_[i][j] = f * row[j];
                tab_[i][n_ + j] = -f * row[j];
            }
            if (i >= ne_) tab_[i][su_ + (i - ne_)] = -f;
            tab_[i][art_ + i] = 1;
            tab_[i][cols_] = f * rhs;
            basis_[i] = art_ + i;
        }
    }

    LPResult run() {
        // Phase 1: minimize the sum of artificials.
        RatVec phase1(cols_, Rat(0));
        for (int i = 0; i < m_; ++i) phase1[art_ + i] = 1;
        load_costs(phase1);
        iterate(/*allow_artificials=*/true);
        Rat infeas = current_objective(phase1);
        if (infeas > 0) return infeasible_result();
        drive_out_artificials();

        // Phase 2 on the structural columns only.
        RatVec costs(cols_, Rat(0));
        for (int j = 0; j < n_; ++j) {
            costs[j] = lp_.objective[j];
            costs[n_ + j] = -lp_.objective[j];
        }
        load_costs(costs);
        int unbounded_col = iterate(/*allow_artificials=*/false);
        if (unbounded_col >= 0) return unbounded_result(unbounded_col);
        return optimal_result();
    }

  private:
    void load_costs(const RatVec& c) {
        cost_.assign(cols_ + 1, Rat(0));
        for (int j = 0; j < cols_; ++j) cost_[j] = c[j];
        for (int i = 0; i < m_; ++i) {
            const Rat& cb = c[basis_[i]];
            if (cb == 0) continue;
            for (int j = 0; j <= cols_; ++j) cost_[j] -= cb * tab_[i][j];
        }
    }

    Rat current_objective(const RatVec& c) const {
        Rat v = 0;
        for (int i = 0; i < m_; ++i) v += c[basis_[i]] * tab_[i][cols_];
        return v;
    }

    void pivot(int row, int col) {
        RatVec& pr = tab_[row];
        const Rat lead = pr[col];
        for (int j = 0; j <= cols_; ++j) pr[j] /= lead;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            const Rat f = tab_[i][col];
            if (f == 0) continue;
            for (int j = 0; j <= cols_; ++j) tab_[i][j] -= f * pr[j];
        }
        const Rat fc = cost_[col];
        if (fc != 0) {
            for (int j = 0; j <= cols_; ++j) cost_[j] -= fc * pr[j];
        }
        basis_[row] = col;
    }

    // Returns -1 on optimality, otherwise the entering column proving
    // unboundedness. Largest-coefficient rule with a permanent switch to
    // Bland's rule after a degenerate stall keeps this finite.
    int iterate(bool allow_artificials) {
        const int limit = allow_artificials ? art_ + m_ : art_;
        bool bland = false;
        int stall = 0;
        for (long iter = 0; iter < 1000000; ++iter) {
            int enter = -1;
            if (bland) {
                for (int j = 0; j < limit; ++j) {
                    if (cost_[j] < 0) { enter = j; break; }
                }
            } else {
                const Rat* best = nullptr;
                for (int j = 0; j < limit; ++j) {
                    if (cost_[j] < 0 && (best == nullptr || cost_[j] < *best)) {
                        best = &cost_[j];
                        enter = j;
                    }
                }
            }
            if (enter < 0) return -1;
            int leave = -1;
            Rat best_ratio = 0;
            for (int i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rat ratio = tab_[i][cols_] / tab_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return enter;
            if (best_ratio == 0) {
                if (++stall > 40) bland = true;
            } else {
                stall = 0;
            }
            pivot(leave, enter);
        }
        fail(ErrorCode::Internal, "simplex iteration limit exceeded");
    }

    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_) continue;
            int col = -1;
            for (int j = 0; j < art_; ++j) {
                if (tab_[i][j] != 0) { col = j; break; }
            }
            if (col >= 0) pivot(i, col);
            // otherwise the row is redundant; its artificial stays basic at 0
        }
    }

    LPResult infeasible_result() const {
        LPResult r;
        r.status = LPStatus::Infeasible;
        r.farkas_eq.assign(ne_, Rat(0));
        r.farkas_ineq.assign(ni_, Rat(0));
        for (int i = 0; i < m_; ++i) {
            Rat pi = Rat(1) - cost_[art_ + i];
            Rat mult = flip_[i] * pi;
            if (i < ne_) r.farkas_eq[i] = mult;
            else r.farkas_ineq[i - ne_] = mult;
        }
        // exact verification of the certificate
        RatVec combo(n_, Rat(0));
        Rat rhs = 0;
        for (int i = 0; i < ne_; ++i) {
            for (int j = 0; j < n_; ++j) combo[j] += r.farkas_eq[i] * lp_.eq_rows[i][j];
            rhs += r.farkas_eq[i] * lp_.eq_rhs[i];
        }
        for (int i = 0; i < ni_; ++i) {
            if (r.farkas_ineq[i] < 0) fail(ErrorCode::Internal, "negative Farkas multiplier");
            for (int j = 0; j < n_; ++j) combo[j] += r.farkas_ineq[i] * lp_.ineq_rows[i][j];
            rhs += r.farkas_ineq[i] * lp_.ineq_rhs[i];
        }
        if (!is_zero(combo) || rhs <= 0) fail(ErrorCode::Internal, "Farkas certificate failed to verify");
        return r;
    }

    LPResult unbounded_result(int enter) const {
        RatVec dy(cols_, Rat(0));
        dy[enter] = 1;
        for (int i = 0; i < m_; ++i) dy[basis_[i]] = -tab_[i][enter];
        LPResult r;
        r.status = LPStatus::Unbounded;
        r.direction.assign(n_, Rat(0));
        for (int j = 0; j < n_; ++j) r.direction[j] = dy[j] - dy[n_ + j];
        for (int i = 0; i < ne_; ++i) {
            if (dot(lp_.eq_rows[i], r.direction) != 0)
                fail(ErrorCode::Internal, "unbounded direction leaves equality");
        }
        for (int i = 0; i < ni_; ++i) {
            if (dot(lp_.ineq_rows[i], r.direction) < 0)
                fail(ErrorCode::Internal, "unbounded direction leaves inequality");
        }
        if (dot(lp_.objective, r.direction) >= 0)
            fail(ErrorCode::Internal, "unbounded direction does not improve");
        return r;
    }

    LPResult optimal_result() const {
        RatVec values(cols_, Rat(0));
        for (int i = 0; i < m_; ++i) values[basis_[i]] = tab_[i][cols_];
        LPResult r;
        r.status = LPStatus::Optimal;
        r.point.assign(n_, Rat(0));
        for (int j = 0; j < n_; ++j) r.point[j] = values[j] - values[n_ + j];
        for (int i = 0; i < ne_; ++i) {
            if (dot(lp_.eq_rows[i], r.point) != lp_.eq_rhs[i])
                fail(ErrorCode::Internal, "optimal point violates equality");
        }
        for (int i = 0; i < ni_; ++i) {
            Rat lhs = dot(lp_.ineq_rows[i], r.point);
            if (lhs < lp_.ineq_rhs[i])
                fail(ErrorCode::Internal, "optimal point violates inequality");
            if (lhs == lp_.ineq_rhs[i]) r.tight_set.push_back(i);
        }
        r.objective_value = dot(lp_.objective, r.point);
        return r;
    }

    const LinearProgram& lp_;
    int n_, ne_, ni_, m_, su_, art_, cols_;
    RatVec flip_;
    RatMat tab_;
    RatVec cost_;
    std::vector<int> basis_;
};

}  // namespace

LPResult lp_solve(const LinearProgram& lp) {
    for (const auto& row : lp.eq_rows)
        if (static_cast<int>(row.size()) != lp.vars) fail(ErrorCode::InvalidInput, "bad equality row length");
    for (const auto& row : lp.ineq_rows)
        if (static_cast<int>(row.size()) != lp.vars) fail(ErrorCode::InvalidInput, "bad inequality row length");
    if (static_cast<int>(lp.objective.size()) != lp.vars) fail(ErrorCode::InvalidInput, "bad objective length");
    Simplex simplex(lp);
    return simplex.run();
}

std::optional<InteriorPoint> relative_interior_point(const RatMat& eq_rows,
                                                     const RatVec& eq_rhs,
                                                     const RatMat& ineq_rows,
                                                     const RatVec& ineq_rhs) {
    const int n = eq_rows.empty() ? (ineq_rows.empty() ? 0 : static_cast<int>(ineq_rows[0].size()))
                                  : static_cast<int>(eq_rows[0].size());
    LinearProgram lp;
    lp.vars = n + 1;
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
        RatVec row = eq_rows[i];
        row.push_back(Rat(0));
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(eq_rhs[i]);
    }
    for (std::size_t i = 0; i < ineq_rows.size(); ++i) {
        RatVec row = ineq_rows[i];
        row.push_back(Rat(-1));
        lp.ineq_rows.push_back(std::move(row));
        lp.ineq_rhs.push_back(ineq_rhs[i]);
    }
    RatVec cap(n + 1, Rat(0));
    cap[n] = -1;
    lp.ineq_rows.push_back(cap);
    lp.ineq_rhs.push_back(Rat(-1));  // t ≤ 1
    lp.objective.assign(n + 1, Rat(0));
    lp.objective[n] = -1;  // maximize t
    LPResult res = lp_solve(lp);
    if (res.status != LPStatus::Optimal) return std::nullopt;
    InteriorPoint ip;
    ip.x.assign(res.point.begin(), res.point.begin() + n);
    ip.margin = res.point[n];
    return ip;
}

bool implied_inequality(const RatMat& ineq_rows, const RatVec& ineq_rhs,
                        const RatVec& row, const Rat& rhs) {
    LinearProgram lp;
    lp.vars = static_cast<int>(row.size());
    lp.ineq_rows = ineq_rows;
    lp.ineq_rhs = ineq_rhs;
    lp.objective = row;
    LPResult res = lp_solve(lp);
    if (res.status == LPStatus::Infeasible) return true;
    if (res.status == LPStatus::Unbounded) return false;
    return res.objective_value >= rhs;
}

namespace {

struct Reduced {
    bool empty = false;
    RatVec x0;                 // particular solution of the equalities
    std::vector<RatVec> basis; // nullspace basis, x = x0 + basis·z
    RatMat rows;               // substituted inequality rows over z
    RatVec rhs;
};

Reduced eliminate_equalities(const HPolyhedron& p) {
    Reduced red;
    LinearSolve sol = solve_linear_system(p.eq_rows, p.eq_rhs);
    if (!sol.consistent) {
        red.empty = true;
        return red;
    }
    red.x0 = sol.solution.empty() ? RatVec(p.vars, Rat(0)) : sol.solution;
    red.basis = nullspace(p.eq_rows, p.vars);
    if (p.eq_rows.empty()) {
        red.basis.clear();
        for (int j = 0; j < p.vars; ++j) {
            RatVec e(p.vars, Rat(0));
            e[j] = 1;
            red.basis.push_back(std::move(e));
        }
        red.x0.assign(p.vars, Rat(0));
    }
    const int d = static_cast<int>(red.basis.size());
    for (std::size_t i = 0; i < p.ineq_rows.size(); ++i) {
        RatVec row(d, Rat(0));
        for (int j = 0; j < d; ++j) row[j] = dot(p.ineq_rows[i], red.basis[j]);
        Rat r = p.ineq_rhs[i] - dot(p.ineq_rows[i], red.x0);
        if (is_zero(row)) {
            if (r > 0) { red.empty = true; return red; }
            continue;  // redundant
        }
        red.rows.push_back(std::move(row));
        red.rhs.push_back(std::move(r));
    }
    return red;
}

void vertex_dfs(const RatMat& rows, const RatVec& rhs, int next, int needed,
                Echelon& ech, std::set<RatVec>& found) {
    if (needed == 0) {
        RatVec z = ech.solve();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (dot(rows[i], z) < rhs[i]) return;
        }
        found.insert(std::move(z));
        return;
    }
    const int m = static_cast<int>(rows.size());
    for (int i = next; i + needed <= m; ++i) {
        if (!ech.push(rows[i], rhs[i])) continue;
        vertex_dfs(rows, rhs, i + 1, needed - 1, ech, found);
        ech.pop();
    }
}

}  // namespace

std::vector<RatVec> enumerate_vertices(const HPolyhedron& p, const Caps& caps) {
    Reduced red = eliminate_equalities(p);
    if (red.empty) return {};
    const int d = static_cast<int>(red.basis.size());
    if (d > caps.enum_dim)
        fail(ErrorCode::CapExceeded, "enumerate_vertices: dimension cap exceeded");
    if (static_cast<int>(red.rows.size()) > caps.enum_ineqs)
        fail(ErrorCode::CapExceeded, "enumerate_vertices: inequality cap exceeded");
    std::set<RatVec> found;
    if (d == 0) {
        found.insert(RatVec());
    } else {
        Echelon ech(d);
        vertex_dfs(red.rows, red.rhs, 0, d, ech, found);
    }
    std::vector<RatVec> out;
    for (const auto& z : found) {
        RatVec x = red.x0;
        for (int j = 0; j < d; ++j) {
            if (z[j] == 0) continue;
            for (int k = 0; k < p.vars; ++k) x[k] += z[j] * red.basis[j][k];
        }
        out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int rank_of_tight_set(const HPolyhedron& p, const RatVec& x) {
    RatMat tight = p.eq_rows;
    for (std::size_t i = 0; i < p.eq_rows.size(); ++i) {
        if (dot(p.eq_rows[i], x) != p.eq_rhs[i])
            fail(ErrorCode::Infeasible, "rank_of_tight_set: point violates an equality");
    }
    for (std::size_t i = 0; i < p.ineq_rows.size(); ++i) {
        Rat lhs = dot(p.ineq_rows[i], x);
        if (lhs < p.ineq_rhs[i])
            fail(ErrorCode::Infeasible, "rank_of_tight_set: point violates an inequality");
        if (lhs == p.ineq_rhs[i]) tight.push_back(p.ineq_rows[i]);
    }
    return rank_of(tight);
}

}  // namespace dcsplit
