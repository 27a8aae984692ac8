#ifndef DCSPLIT_GEOMETRY_HPP
#define DCSPLIT_GEOMETRY_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcsplit/caps.hpp"
#include "dcsplit/rational.hpp"

namespace dcsplit {

/// {x : ⟨normal, x⟩ = offset} with primitive integer normal whose first
/// nonzero entry is positive.
struct Hyperplane {
    IntVec normal;
    Rat offset;

    static Hyperplane canonical(const RatVec& nu, const Rat& c);
    static Hyperplane canonical(const IntVec& nu, const Rat& c);
    bool operator==(const Hyperplane& o) const {
        return normal == o.normal && offset == o.offset;
    }
    bool operator<(const Hyperplane& o) const {
        if (normal != o.normal) return normal < o.normal;
        return offset < o.offset;
    }
};

/// ⟨normal, x⟩ ≥ rhs with primitive integer normal (sign meaningful: the
/// normal points into the cell).
struct Inequality {
    IntVec normal;
    Rat rhs;

    static Inequality normalized(const RatVec& nu, const Rat& c);
    bool operator==(const Inequality& o) const {
        return normal == o.normal && rhs == o.rhs;
    }
};

struct Cell {
    int id = -1;
    std::vector<Inequality> ineqs;
};

/// σ = pos ∩ neg; the plane normal points from the neg cell into the pos cell.
struct Facet {
    int id = -1;
    Hyperplane plane;
    int pos_cell = -1;
    int neg_cell = -1;
};

/// Codimension-2 face with its star listed cyclically: star_cells[k] is the
/// cell wedged between star_facets[k] and star_facets[k+1 mod m].
struct Codim2Face {
    RatVec point;  // relative interior witness
    IntVec normal_a, normal_b;  // independent normals spanning the quotient plane
    std::vector<int> star_facets;  // facet indices
    std::vector<int> star_cells;   // cell indices
};

struct ValidationIssue {
    std::string kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
    void add(const std::string& kind, const std::string& detail) {
        issues.push_back({kind, detail});
    }
};

/// A complete rational polyhedral complex: full-dimensional cells plus
/// oriented facet adjacency. Codim-2 stars and interior points are computed
/// once at construction; instances are immutable afterwards and safe to
/// share across threads.
class Complex {
  public:
    Complex(int dim, std::vector<Cell> cells, std::vector<Facet> facets);

    int dim() const { return dim_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<Codim2Face>& codim2() const { return codim2_; }

    int cell_index(int id) const;
    int facet_index(int id) const;

    /// Relative interior point of a cell index; empty optional when the cell
    /// has no interior (an invalid complex).
    const std::optional<RatVec>& interior_point(int cell_idx) const {
        return cell_interior_[cell_idx];
    }
    const std::optional<RatVec>& facet_point(int facet_idx) const {
        return facet_interior_[facet_idx];
    }

    const std::vector<int>& facets_of_cell(int cell_idx) const {
        return cell_facets_[cell_idx];
    }

    bool cell_contains(int cell_idx, const RatVec& x) const;

    /// Diagnostics collected while computing the codim-2 stars; empty for a
    /// well-formed complex.
    const std::vector<std::string>& codim2_diagnostics() const {
        return codim2_diagnostics_;
    }

  private:
    void compute_interiors();
    void compute_codim2();

    int dim_;
    std::vector<Cell> cells_;
    std::vector<Facet> facets_;
    std::vector<Codim2Face> codim2_;
    std::map<int, int> cell_by_id_;
    std::map<int, int> facet_by_id_;
    std::vector<std::optional<RatVec>> cell_interior_;
    std::vector<std::optional<RatVec>> facet_interior_;
    std::vector<std::vector<int>> cell_facets_;
    std::vector<std::string> codim2_diagnostics_;
};

using ComplexPtr = std::shared_ptr<const Complex>;

ValidationReport validate_complex(const Complex& c, const Caps& caps = Caps());

/// Complex induced by a hyperplane arrangement: maximal cells are the
/// closures of the nonempty open sign regions.
Complex arrangement_complex(std::vector<Hyperplane> hyperplanes, int dim,
                            const Caps& caps = Caps());

struct RefineResult {
    ComplexPtr complex;
    std::vector<int> ancestry;  // new cell index -> old cell index
};

/// Common refinement of a complex with a set of hyperplanes.
RefineResult refine(const Complex& c, std::vector<Hyperplane> hyperplanes,
                    const Caps& caps = Caps());

/// Lowest-id cell containing x (ties on shared boundaries break to the
/// lowest id). Returns the cell id.
int locate(const Complex& c, const RatVec& x);

/// Assemble facet records for a set of cells that are believed to tile
/// space; every (n-1)-dimensional pairwise intersection becomes a facet.
std::vector<Facet> facets_from_cells(const std::vector<Cell>& cells, int dim);

/// Canonical cell multiset for structural comparison of complexes up to
/// relabeling.
std::vector<std::vector<std::pair<IntVec, Rat>>> canonical_cells(const Complex& c);

/// Exact counterclockwise comparison of nonzero 2D rational points by angle
/// from the positive x-axis.
bool angle_less(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b);

}  // namespace dcsplit

#endif
