#include "dcsplit/cpwl.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dcsplit/error.hpp"

namespace dcsplit {

namespace {

// a_pos - a_neg = lambda * nu, or nullopt if not collinear
std::optional<Rat> collinear_factor(const RatVec& d, const IntVec& nu) {
    int k = 0;
    while (k < static_cast<int>(nu.size()) && nu[k] == 0) ++k;
    if (k == static_cast<int>(nu.size())) return std::nullopt;
    Rat lambda = d[k] / Rat(nu[k]);
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] != lambda * Rat(nu[j])) return std::nullopt;
    }
    return lambda;
}

}  // namespace

CPWL::CPWL(ComplexPtr complex, std::vector<AffineMap> pieces)
    : complex_(std::move(complex)), pieces_(std::move(pieces)) {
    if (pieces_.size() != complex_->cells().size())
        fail(ErrorCode::InvalidInput, "one affine map per maximal cell required");
    for (const auto& p : pieces_) {
        if (static_cast<int>(p.a.size()) != complex_->dim())
            fail(ErrorCode::InvalidInput, "affine map dimension mismatch");
    }
}

Rat CPWL::evaluate(const RatVec& x) const {
    int id = locate(*complex_, x);
    return pieces_[complex_->cell_index(id)](x);
}

ValidationReport validate_continuity(const CPWL& f) {
    ValidationReport report;
    const Complex& c = f.complex();
    for (const auto& facet : c.facets()) {
        int pi = c.cell_index(facet.pos_cell), ni = c.cell_index(facet.neg_cell);
        if (pi < 0 || ni < 0) {
            report.add("facet-bad-cells", "facet " + std::to_string(facet.id));
            continue;
        }
        RatVec d = f.piece(pi).a - f.piece(ni).a;
        auto lambda = collinear_factor(d, facet.plane.normal);
        if (!lambda) {
            report.add("gradient-jump-off-normal", "facet " + std::to_string(facet.id));
            continue;
        }
        if (f.piece(pi).b - f.piece(ni).b != -(*lambda) * facet.plane.offset)
            report.add("offset-discontinuity", "facet " + std::to_string(facet.id));
    }
    return report;
}

Weights weights(const CPWL& f) {
    const Complex& c = f.complex();
    Weights w;
    w.omega.assign(c.facets().size(), Rat(0));
    for (std::size_t k = 0; k < c.facets().size(); ++k) {
        const Facet& facet = c.facets()[k];
        int pi = c.cell_index(facet.pos_cell), ni = c.cell_index(facet.neg_cell);
        RatVec d = f.piece(pi).a - f.piece(ni).a;
        auto lambda = collinear_factor(d, facet.plane.normal);
        if (!lambda) fail(ErrorCode::InvalidInput, "weights: function is not continuous");
        w.omega[k] = *lambda;
    }
    return w;
}

CPWL from_weights(const Weights& w, const ComplexPtr& complex, int gauge_cell_id) {
    const Complex& c = *complex;
    if (w.omega.size() != c.facets().size())
        fail(ErrorCode::InvalidInput, "from_weights: one weight per facet required");
    // balancing: at every codim-2 face the oriented gradient jumps close up
    for (std::size_t t = 0; t < c.codim2().size(); ++t) {
        const auto& face = c.codim2()[t];
        const int m = static_cast<int>(face.star_facets.size());
        RatVec sum(c.dim(), Rat(0));
        for (int k = 0; k < m; ++k) {
            int fk = face.star_facets[(k + 1) % m];
            int to = face.star_cells[(k + 1) % m];
            const Facet& facet = c.facets()[fk];
            Rat s = (to == c.cell_index(facet.pos_cell)) ? Rat(1) : Rat(-1);
            for (int j = 0; j < c.dim(); ++j)
                sum[j] += s * w.omega[fk] * Rat(facet.plane.normal[j]);
        }
        if (!is_zero(sum)) {
            std::ostringstream os;
            os << "weights are not balanced at codim-2 face " << t << " (witness point";
            for (const auto& v : face.point) os << " " << v.str();
            os << ")";
            fail(ErrorCode::NotBalanced, os.str());
        }
    }
    int start = c.cell_index(gauge_cell_id);
    if (start < 0) fail(ErrorCode::InvalidInput, "from_weights: unknown gauge cell");
    std::vector<AffineMap> pieces(c.cells().size());
    std::vector<bool> done(c.cells().size(), false);
    pieces[start] = AffineMap{RatVec(c.dim(), Rat(0)), Rat(0)};
    done[start] = true;
    std::deque<int> queue{start};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (int fk : c.facets_of_cell(cur)) {
            const Facet& facet = c.facets()[fk];
            int pi = c.cell_index(facet.pos_cell), ni = c.cell_index(facet.neg_cell);
            int other = (cur == pi) ? ni : pi;
            if (other < 0 || done[other]) continue;
            const Rat& lam = w.omega[fk];
            RatVec step(c.dim());
            for (int j = 0; j < c.dim(); ++j) step[j] = lam * Rat(facet.plane.normal[j]);
            if (other == pi) {
                pieces[other].a = pieces[cur].a + step;
                pieces[other].b = pieces[cur].b - lam * facet.plane.offset;
            } else {
                pieces[other].a = pieces[cur].a - step;
                pieces[other].b = pieces[cur].b + lam * facet.plane.offset;
            }
            done[other] = true;
            queue.push_back(other);
        }
    }
    for (bool d : done)
        if (!d) fail(ErrorCode::InvalidInput, "from_weights: dual graph is not connected");
    // non-tree facet equations must close as well; on a complete complex this
    // follows from the star balancing
    for (std::size_t k = 0; k < c.facets().size(); ++k) {
        const Facet& facet = c.facets()[k];
        int pi = c.cell_index(facet.pos_cell), ni = c.cell_index(facet.neg_cell);
        RatVec d = pieces[pi].a - pieces[ni].a;
        auto lambda = collinear_factor(d, facet.plane.normal);
        if (!lambda || *lambda != w.omega[k] ||
            pieces[pi].b - pieces[ni].b != -w.omega[k] * facet.plane.offset)
            fail(ErrorCode::NotBalanced,
                 "weights fail to close around facet " + std::to_string(facet.id));
    }
    return CPWL(complex, std::move(pieces));
}

bool is_convex(const CPWL& f) { return weights(f).nonnegative(); }

SupportSets supports(const CPWL& f) {
    Weights w = weights(f);
    SupportSets s;
    for (int k = 0; k < static_cast<int>(w.omega.size()); ++k) {
        if (w.omega[k] > 0) { s.plus.insert(k); s.all.insert(k); }
        if (w.omega[k] < 0) { s.minus.insert(k); s.all.insert(k); }
    }
    return s;
}

bool is_strictly_compatible(const CPWL& f) { return weights(f).strictly_positive(); }

CoarsenResult coarsen(const CPWL& g) {
    Weights w = weights(g);
    if (!w.nonnegative()) fail(ErrorCode::NotConvex, "coarsen requires a convex function");
    const Complex& c = g.complex();
    std::vector<int> parent(c.cells().size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (std::size_t k = 0; k < c.facets().size(); ++k) {
        if (w.omega[k] != 0) continue;
        int a = c.cell_index(c.facets()[k].pos_cell);
        int b = c.cell_index(c.facets()[k].neg_cell);
        if (a >= 0 && b >= 0) parent[find(a)] = find(b);
    }
    CoarsenResult result;
    result.block_of_cell.assign(parent.size(), -1);
    std::map<int, int> block_ids;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        int root = find(static_cast<int>(i));
        auto it = block_ids.find(root);
        if (it == block_ids.end())
            it = block_ids.emplace(root, static_cast<int>(block_ids.size())).first;
        result.block_of_cell[i] = it->second;
    }
    result.piece_count = static_cast<int>(block_ids.size());
    result.component_count = component_count(g);
    return result;
}

CoarseningCheck is_coarsening(const CPWL& g_prime, const CPWL& g) {
    if (!complexes_equal(g_prime.complex(), g.complex()))
        fail(ErrorCode::ComplexMismatch, "is_coarsening requires a shared complex");
    Weights wp = weights(g_prime), wg = weights(g);
    if (!wp.nonnegative() || !wg.nonnegative())
        fail(ErrorCode::NotConvex, "is_coarsening requires convex functions");
    CoarseningCheck check;
    check.is_coarsening = true;
    bool strict = false;
    for (std::size_t k = 0; k < wp.omega.size(); ++k) {
        bool in_p = wp.omega[k] != 0, in_g = wg.omega[k] != 0;
        if (in_p && !in_g) check.is_coarsening = false;
        if (in_g && !in_p) strict = true;
    }
    check.nontrivial = check.is_coarsening && strict;
    return check;
}

bool complexes_equal(const Complex& a, const Complex& b) {
    if (&a == &b) return true;
    if (a.dim() != b.dim()) return false;
    return canonical_cells(a) == canonical_cells(b);
}

bool equal_mod_affine(const CPWL& f, const CPWL& g) {
    if (!complexes_equal(f.complex(), g.complex())) return false;
    RatVec da = f.piece(0).a - g.piece(0).a;
    Rat db = f.piece(0).b - g.piece(0).b;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        if (f.piece(i).a - g.piece(i).a != da) return false;
        if (f.piece(i).b - g.piece(i).b != db) return false;
    }
    return true;
}

CPWL linear_combination(const Rat& alpha, const CPWL& f, const Rat& beta, const CPWL& g) {
    if (!complexes_equal(f.complex(), g.complex()))
        fail(ErrorCode::ComplexMismatch, "linear_combination requires a shared complex");
    std::vector<AffineMap> pieces(f.pieces().size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        pieces[i].a = alpha * f.piece(i).a + beta * g.piece(i).a;
        pieces[i].b = alpha * f.piece(i).b + beta * g.piece(i).b;
    }
    return CPWL(f.complex_ptr(), std::move(pieces));
}

CPWL restrict_to_refinement(const CPWL& f, const ComplexPtr& refined,
                            const std::vector<int>& ancestry) {
    std::vector<AffineMap> pieces(refined->cells().size());
    if (ancestry.size() != pieces.size())
        fail(ErrorCode::InvalidInput, "ancestry size mismatch");
    for (std::size_t i = 0; i < pieces.size(); ++i) pieces[i] = f.piece(ancestry[i]);
    return CPWL(refined, std::move(pieces));
}

int component_count(const CPWL& f) {
    std::set<std::pair<RatVec, Rat>> maps;
    for (const auto& p : f.pieces()) maps.insert({p.a, p.b});
    return static_cast<int>(maps.size());
}

}  // namespace dcsplit
