#ifndef DCSPLIT_CONSTRUCTIONS_HPP
#define DCSPLIT_CONSTRUCTIONS_HPP

#include <optional>

#include "dcsplit/decomposition.hpp"

namespace dcsplit {

/// A complete 2D fan with scaled ray weights. Rays are primitive integer
/// vectors in counterclockwise order; balancing reads
/// Σ ω(ρ_i)·rot90(v_i) = 0 with rot90(x, y) = (-y, x).
struct WeightedFan2D {
    std::vector<IntVec> rays;
    RatVec weights;
};

IntVec rot90(const IntVec& v);

bool fan2d_balanced(const WeightedFan2D& fan);

/// Sort rays counterclockwise and insert zero-weight fill rays until every
/// consecutive gap is strictly less than π.
WeightedFan2D complete_fan2d(WeightedFan2D fan);

struct Fan2DComplex {
    ComplexPtr complex;
    std::vector<int> facet_of_ray;  // ray index -> facet index
};
Fan2DComplex fan2d_to_complex(const WeightedFan2D& fan);

/// Weights of a CPWL function on a 2D fan complex in ray order.
WeightedFan2D fan2d_of_cpwl(const CPWL& f);

struct Tran2DResult {
    WeightedFan2D fan;            // completed input fan (with fill rays)
    WeightedFan2D augmented;      // fan plus the closing ray, weights = ω_f
    RatVec wg, wh;                // per augmented ray
    std::optional<IntVec> new_ray;
    Rat closing_weight = 0;       // scaled weight placed on the closing ray
};

/// The 2D minimal-balancing construction: close the Newton polygon of the
/// positive part with a single edge.
Tran2DResult tran2d_minimal(const WeightedFan2D& input);

struct ExtensionResult {
    DecompPoint decomposition;  // on the refined complex
    CPWL f_refined;
    ComplexPtr refined;
    std::vector<int> ancestry;
};

/// Extend every positive breakpoint hyperplane globally and sum the
/// resulting convex pieces.
ExtensionResult hyperplane_extension(const CPWL& f, const Caps& caps = Caps());

struct LocalMaximaResult {
    DecompPoint decomposition;  // on the arrangement of all piece differences
    CPWL f_on_arrangement;
    ComplexPtr arrangement;
};

/// g = Σ_i max_{j ∈ M_i} f_j with M_i the maps dominated by f_i on cell i;
/// h = max_i (g - g_i).
LocalMaximaResult local_maxima_decomposition(const CPWL& f, const Caps& caps = Caps());

/// One term λ·max(⟨a,x⟩+b, ⟨c,x⟩+d).
struct HyperplaneTerm {
    Rat lambda;
    RatVec a;
    Rat b;
    RatVec c;
    Rat d;
};

struct SignSplitResult {
    CPWL f;
    DecompPoint decomposition;
    ComplexPtr complex;
};

/// Split a hyperplane function by the signs of its coefficients on the
/// arrangement of its term hyperplanes.
SignSplitResult sign_split(const std::vector<HyperplaneTerm>& terms, int dim,
                           const Caps& caps = Caps());

struct OrderStatisticResult {
    ComplexPtr complex;
    CPWL f;  // k-th largest coordinate
    CPWL g;  // max over k-subsets of coordinate sums
    CPWL h;  // max over (k-1)-subsets
};

OrderStatisticResult order_statistic(int n, int k, const Caps& caps = Caps());

/// Star data for the polygon-gluing feasibility system. One entry per
/// codim-2 ray of a 3D fan; arms list the positive-weight facets around it.
struct GluingStar {
    IntVec ray;  // primitive generator
    struct Arm {
        int facet_id;
        IntVec other;  // the facet's second ray
        Rat weight;    // scaled, > 0
    };
    std::vector<Arm> arms;
};

struct GluingInput {
    std::vector<GluingStar> stars;
};

/// Extract the stars of every ray of a complete 3D fan, keeping only
/// positive-weight facets.
GluingInput gluing_input_from_complex(const Complex& fan, const Weights& w);

struct GluingPolygon {
    IntVec ray;
    // facet id (-1 for the closing edge) with the traversed edge vector
    std::vector<std::pair<int, RatVec>> edges;
};

struct GluingResult {
    bool feasible = false;
    std::vector<GluingPolygon> polygons;
    std::vector<std::pair<IntVec, RatVec>> placements;  // per star, when feasible
    RatVec certificate;  // y with yᵀA = 0, yᵀb ≠ 0 otherwise
    RatMat system_rows;  // the identification system A x = b
    RatVec system_rhs;
};

/// Build the per-ray polygons of the positive part and solve the placement
/// identification system exactly.
GluingResult polygon_gluing(const GluingInput& input);

}  // namespace dcsplit

#endif
