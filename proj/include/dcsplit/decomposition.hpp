#ifndef DCSPLIT_DECOMPOSITION_HPP
#define DCSPLIT_DECOMPOSITION_HPP

#include <optional>
#include <vector>

#include "dcsplit/cpwl.hpp"
#include "dcsplit/lp.hpp"

namespace dcsplit {

/// A decomposition f = g - h with both parts convex and compatible with
/// the same complex. g - h = f holds exactly, not just modulo affine maps.
struct DecompPoint {
    CPWL g;
    CPWL h;
    Weights wg;
    Weights wh;
};

/// The projected decomposition polyhedron π(D_P(f)) = {ω_g ∈ W_P :
/// ω_g ≥ 0, ω_g ≥ ω_f}. The official H-representation uses one λ per facet
/// plus gauge-fixed affine-piece variables tied together by continuity
/// equalities; the reduced form parameterizes the balanced subspace W_P by
/// a nullspace basis.
class DecompPolyhedron {
  public:
    explicit DecompPolyhedron(CPWL f);

    const CPWL& f() const { return f_; }
    const Weights& wf() const { return wf_; }
    int gauge_cell_id() const { return gauge_id_; }

    /// Official H-representation: variables [λ_σ | (a_P, b_P) for P ≠ gauge].
    const HPolyhedron& hrep() const { return hrep_; }

    /// λ-space H-representation: balancing equalities plus λ ≥ 0, λ ≥ ω_f.
    const HPolyhedron& lambda_hrep() const { return lambda_hrep_; }

    /// Nullspace basis of the balancing system: ω = Σ z_j basis[j].
    const std::vector<RatVec>& w_basis() const { return basis_; }
    int w_dim() const { return static_cast<int>(basis_.size()); }

    /// Per-facet lower bound max(0, ω_f) of the feasible region.
    const RatVec& bound() const { return bound_; }

    /// Value of the basis combination z as a weight vector.
    RatVec weights_of(const RatVec& z) const;

    /// Lift a feasible weight vector to (g, h) with h = g - f.
    DecompPoint lift(const Weights& wg) const;

  private:
    CPWL f_;
    Weights wf_;
    int gauge_id_;
    HPolyhedron hrep_;
    HPolyhedron lambda_hrep_;
    std::vector<RatVec> basis_;
    RatVec bound_;
};

DecompPolyhedron build_decomposition_polyhedron(const CPWL& f);

/// Minimize a strictly positive facet functional (all-ones by default) over
/// the decomposition polyhedron; the result is always reduced.
/// Throws Error(Infeasible) when D_P(f) is empty.
DecompPoint solve_reduced(const CPWL& f, const RatVec* objective = nullptr);

/// All vertices of π(D_P(f)), lifted, ordered by weight vector.
std::vector<DecompPoint> enumerate_decompositions(const CPWL& f, const Caps& caps = Caps());

/// Vertex test: the tight constraints span the balanced subspace.
bool is_vertex(const DecompPoint& p);

/// Reduced test: no convex φ ≠ 0 can be subtracted from both parts.
bool is_reduced(const DecompPoint& p);

struct MinimalEntry {
    DecompPoint point;
    int pieces_g = 0;
    int pieces_h = 0;
};

/// Pareto-minimal vertices under (pieces of g, pieces of h); ties kept.
std::vector<MinimalEntry> minimal_set(const CPWL& f, const Caps& caps = Caps());

/// Support certificate of Prop.-style uniqueness: supp(g) = supp⁺(f) and
/// supp(h) = supp⁻(f). Throws Error(DecompositionMismatch) if g - h ≠ f.
bool unique_vertex_certificate(const CPWL& f, const CPWL& g, const CPWL& h);

/// Does the complex carry a strictly positive balanced weight function?
bool is_regular(const Complex& c);

/// A strictly compatible convex witness, when one exists.
std::optional<CPWL> regular_witness(const ComplexPtr& c);

/// (f + λg, λg) for a strictly compatible witness g and the smallest
/// λ ≥ 0 making f + λg convex. Throws Error(NotRegular).
DecompPoint decompose_via_regular(const CPWL& f);

}  // namespace dcsplit

#endif
