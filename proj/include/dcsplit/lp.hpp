#ifndef DCSPLIT_LP_HPP
#define DCSPLIT_LP_HPP

#include <optional>
#include <vector>

#include "dcsplit/caps.hpp"
#include "dcsplit/rational.hpp"

namespace dcsplit {

/// min objective·x  s.t.  eq_rows·x = eq_rhs,  ineq_rows·x ≥ ineq_rhs.
struct LinearProgram {
    int vars = 0;
    RatMat eq_rows;
    RatVec eq_rhs;
    RatMat ineq_rows;
    RatVec ineq_rhs;
    RatVec objective;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    RatVec point;               // Optimal
    Rat objective_value = 0;    // Optimal
    std::vector<int> tight_set; // indices of inequalities active at point
    RatVec farkas_eq;           // Infeasible: multipliers, free sign
    RatVec farkas_ineq;         // Infeasible: multipliers, ≥ 0
    RatVec direction;           // Unbounded: feasible ray with obj·d < 0
};

struct HPolyhedron {
    int vars = 0;
    RatMat eq_rows;
    RatVec eq_rhs;
    RatMat ineq_rows;
    RatVec ineq_rhs;
};

/// Exact two-phase dense simplex. Deterministic: largest-coefficient rule
/// with a permanent switch to Bland's rule after a degenerate stall, so the
/// method terminates on every input and returns identical results across
/// runs and platforms.
LPResult lp_solve(const LinearProgram& lp);

/// All vertices of the polyhedron, lexicographically sorted, deduplicated.
/// Empty when the polyhedron is empty or has no vertices (contains a line).
std::vector<RatVec> enumerate_vertices(const HPolyhedron& p, const Caps& caps = Caps());

/// Rank of all equalities plus the inequalities tight at x.
/// Throws Error(Infeasible) if x violates a constraint.
int rank_of_tight_set(const HPolyhedron& p, const RatVec& x);

/// A point maximizing the minimum inequality slack (capped at 1), with the
/// equalities pinned. margin > 0 means the polyhedron has a relative
/// interior point (relative to the equality subspace); margin < 0 means it
/// is empty. nullopt when the equality system alone is inconsistent.
struct InteriorPoint {
    RatVec x;
    Rat margin;
};
std::optional<InteriorPoint> relative_interior_point(const RatMat& eq_rows,
                                                     const RatVec& eq_rhs,
                                                     const RatMat& ineq_rows,
                                                     const RatVec& ineq_rhs);

/// Does row·x ≥ rhs hold for every x in {ineq_rows·x ≥ ineq_rhs}?
/// (Vacuously true for an empty polyhedron.)
bool implied_inequality(const RatMat& ineq_rows, const RatVec& ineq_rhs,
                        const RatVec& row, const Rat& rhs);

}  // namespace dcsplit

#endif
