#ifndef DCSPLIT_CPWL_HPP
#define DCSPLIT_CPWL_HPP

#include <set>
#include <vector>

#include "dcsplit/geometry.hpp"

namespace dcsplit {

struct AffineMap {
    RatVec a;
    Rat b = 0;

    Rat operator()(const RatVec& x) const { return dot(a, x) + b; }
    bool operator==(const AffineMap& o) const { return a == o.a && b == o.b; }
    bool operator<(const AffineMap& o) const {
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
};

/// A CPWL function compatible with a complex: one affine map per maximal
/// cell, indexed by cell position.
class CPWL {
  public:
    CPWL(ComplexPtr complex, std::vector<AffineMap> pieces);

    const Complex& complex() const { return *complex_; }
    const ComplexPtr& complex_ptr() const { return complex_; }
    const AffineMap& piece(int cell_idx) const { return pieces_[cell_idx]; }
    const std::vector<AffineMap>& pieces() const { return pieces_; }

    Rat evaluate(const RatVec& x) const;

  private:
    ComplexPtr complex_;
    std::vector<AffineMap> pieces_;
};

/// Scaled weight function: ω(σ) = λ with a_pos − a_neg = λ·ν_σ. Same sign
/// as the Euclidean weight; magnitude differs by the factor ‖ν_σ‖.
struct Weights {
    RatVec omega;  // by facet index

    bool nonnegative() const {
        for (const auto& w : omega) if (w < 0) return false;
        return true;
    }
    bool strictly_positive() const {
        for (const auto& w : omega) if (w <= 0) return false;
        return true;
    }
    Weights positive_part() const {
        Weights p;
        p.omega.reserve(omega.size());
        for (const auto& w : omega) p.omega.push_back(w > 0 ? w : Rat(0));
        return p;
    }
};

struct SupportSets {
    std::set<int> plus, minus, all;  // facet indices
};

ValidationReport validate_continuity(const CPWL& f);

/// Requires a continuity-valid function.
Weights weights(const CPWL& f);

/// Reconstruct a function from balanced weights, gauge-fixing the given
/// cell's affine map to zero. Throws Error(NotBalanced) naming a violating
/// codim-2 face when the weights are not realizable.
CPWL from_weights(const Weights& w, const ComplexPtr& complex, int gauge_cell_id);

bool is_convex(const CPWL& f);
SupportSets supports(const CPWL& f);
bool is_strictly_compatible(const CPWL& f);

struct CoarsenResult {
    std::vector<int> block_of_cell;  // block index per cell
    int piece_count = 0;             // number of blocks
    int component_count = 0;         // number of distinct affine maps
};

/// Connected components of the dual graph across zero-weight facets.
/// Exact piece count for convex inputs only; throws Error(NotConvex).
CoarsenResult coarsen(const CPWL& g);

struct CoarseningCheck {
    bool is_coarsening = false;
    bool nontrivial = false;
};

/// Is g' a coarsening of g (both convex, same complex)?
CoarseningCheck is_coarsening(const CPWL& g_prime, const CPWL& g);

bool complexes_equal(const Complex& a, const Complex& b);
bool equal_mod_affine(const CPWL& f, const CPWL& g);

/// alpha*f + beta*g on a shared complex.
CPWL linear_combination(const Rat& alpha, const CPWL& f, const Rat& beta, const CPWL& g);

/// Carry a function onto a refinement of its complex.
CPWL restrict_to_refinement(const CPWL& f, const ComplexPtr& refined,
                            const std::vector<int>& ancestry);

/// Number of distinct affine maps.
int component_count(const CPWL& f);

}  // namespace dcsplit

#endif
