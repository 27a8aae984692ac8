#ifndef DCSPLIT_SUBMODULAR_HPP
#define DCSPLIT_SUBMODULAR_HPP

#include <vector>

#include "dcsplit/decomposition.hpp"

namespace dcsplit {

/// A set function on 2^[n]. Values are normalized so F(∅) = 0 on ingestion;
/// the subtracted constant (a modular function) is kept as empty_shift.
class SetFunction {
  public:
    SetFunction(int n, RatVec raw_values);

    int n() const { return n_; }
    unsigned table_size() const { return 1u << n_; }

    /// Original (un-normalized) value.
    Rat value(unsigned mask) const { return values_[mask] + empty_shift_; }
    /// Normalized value with F(∅) = 0.
    const Rat& normalized(unsigned mask) const { return values_[mask]; }
    const Rat& empty_shift() const { return empty_shift_; }

    bool operator==(const SetFunction& o) const {
        return n_ == o.n_ && values_ == o.values_ && empty_shift_ == o.empty_shift_;
    }

  private:
    int n_;
    RatVec values_;  // normalized table
    Rat empty_shift_;
};

struct WeightedGraph {
    int n = 0;
    struct Edge {
        int u, v;  // 1-based, u < v
        Rat weight;
    };
    std::vector<Edge> edges;
};

/// Braid fan: n! chambers x_{π(1)} ≤ … ≤ x_{π(n)} with the adjacent
/// transposition facets.
ComplexPtr braid_complex(int n, const Caps& caps = Caps());

/// Φ⁻¹: the Lovász extension as a CPWL function on the braid fan.
CPWL lovasz(const SetFunction& F, const Caps& caps = Caps());

/// Sort-based evaluation of the Lovász extension; never builds the fan.
Rat lovasz_value(const SetFunction& F, const RatVec& x, const Caps& caps = Caps());

/// Φ: restrict a braid-fan function to the subset indicator vectors.
/// Throws Error(ComplexMismatch) when f does not live on the braid fan.
SetFunction to_set_function(const CPWL& f, const Caps& caps = Caps());

bool is_submodular(const SetFunction& F, const Caps& caps = Caps());
bool is_modular(const SetFunction& F, const Caps& caps = Caps());

/// Canonical representative modulo modular functions: F(∅) = 0 and
/// F({i}) = 0 for every i.
SetFunction canonical_mod_modular(const SetFunction& F);

struct SetDecomposition {
    SetFunction G;
    SetFunction H;
    bool vertex = false;
    bool reduced = false;
};

/// Reduced difference-of-submodular decomposition via the decomposition
/// polyhedron of the Lovász extension over the braid fan.
SetDecomposition decompose_set_function(const SetFunction& F, const Caps& caps = Caps());

SetFunction cut_function(const WeightedGraph& g);

/// Distinct greedy vertices of the base polytope, one per permutation,
/// deduplicated and sorted. Throws Error(NotSubmodular).
std::vector<RatVec> greedy_vertices(const SetFunction& G, const Caps& caps = Caps());

}  // namespace dcsplit

#endif
