#include "dcsplit/submodular.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "dcsplit/error.hpp"

namespace dcsplit {

SetFunction::SetFunction(int n, RatVec raw_values) : n_(n) {
    if (n < 1 || n > 30) fail(ErrorCode::InvalidInput, "set function ground size out of range");
    if (raw_values.size() != (1u << n))
        fail(ErrorCode::InvalidInput, "set function table must have 2^n entries");
    empty_shift_ = raw_values[0];
    values_ = std::move(raw_values);
    for (auto& v : values_) v -= empty_shift_;
}

ComplexPtr braid_complex(int n, const Caps& caps) {
    if (n < 1) fail(ErrorCode::InvalidInput, "braid fan needs n >= 1");
    if (n > caps.braid_n) fail(ErrorCode::CapExceeded, "braid fan ground-set cap");
    std::vector<std::vector<int>> perms;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::map<std::vector<int>, int> index_of;
    std::vector<Cell> cells;
    for (int i = 0; i < static_cast<int>(perms.size()); ++i) {
        index_of[perms[i]] = i;
        Cell cell;
        cell.id = i;
        for (int t = 0; t + 1 < n; ++t) {
            IntVec nu(n, Int(0));
            nu[perms[i][t + 1]] = 1;  // x_{π(t+1)} ≥ x_{π(t)}
            nu[perms[i][t]] = -1;
            cell.ineqs.push_back(Inequality{std::move(nu), Rat(0)});
        }
        cells.push_back(std::move(cell));
    }
    std::vector<Facet> facets;
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < static_cast<int>(perms.size()); ++i) {
        for (int t = 0; t + 1 < n; ++t) {
            std::vector<int> swapped = perms[i];
            std::swap(swapped[t], swapped[t + 1]);
            int j = index_of.at(swapped);
            auto key = std::minmax(i, j);
            if (!seen.insert(key).second) continue;
            int a = perms[i][t], b = perms[i][t + 1];
            int lo = std::min(a, b), hi = std::max(a, b);
            IntVec nu(n, Int(0));
            nu[lo] = 1;
            nu[hi] = -1;  // canonical: x_lo - x_hi = 0
            Facet f;
            f.id = static_cast<int>(facets.size());
            f.plane = Hyperplane{std::move(nu), Rat(0)};
            // the cell with x_lo ≥ x_hi sits on the positive side; in cell i
            // we have x_a ≤ x_b
            bool i_positive = (b == lo);
            f.pos_cell = i_positive ? i : j;
            f.neg_cell = i_positive ? j : i;
            facets.push_back(std::move(f));
        }
    }
    return std::make_shared<Complex>(n, std::move(cells), std::move(facets));
}

CPWL lovasz(const SetFunction& F, const Caps& caps) {
    const int n = F.n();
    ComplexPtr fan = braid_complex(n, caps);
    std::vector<AffineMap> pieces(fan->cells().size());
    // cell ids follow the lexicographic permutation enumeration of
    // braid_complex; recover π from the cell inequalities instead of
    // depending on that, using an interior point
    for (std::size_t ci = 0; ci < fan->cells().size(); ++ci) {
        const RatVec& x = *fan->interior_point(ci);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
        // descending top-i sets T_i; coefficient of the i-th largest is
        // F(T_i) - F(T_{i-1})
        RatVec a(n, Rat(0));
        unsigned mask = 0;
        Rat prev = F.value(0);
        for (int i = n - 1; i >= 0; --i) {
            mask |= 1u << order[i];
            Rat cur = F.value(mask);
            a[order[i]] = cur - prev;
            prev = cur;
        }
        pieces[ci] = AffineMap{std::move(a), F.value(0)};
    }
    return CPWL(fan, std::move(pieces));
}

Rat lovasz_value(const SetFunction& F, const RatVec& x, const Caps& caps) {
    const int n = F.n();
    if (n > caps.lovasz_n) fail(ErrorCode::CapExceeded, "Lovász evaluation ground-set cap");
    if (static_cast<int>(x.size()) != n) fail(ErrorCode::DimMismatch, "point dimension");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
    Rat value = F.value(0);
    unsigned mask = 0;
    Rat prev = F.value(0);
    for (int i = n - 1; i >= 0; --i) {
        mask |= 1u << order[i];
        Rat cur = F.value(mask);
        value += x[order[i]] * (cur - prev);
        prev = cur;
    }
    return value;
}

SetFunction to_set_function(const CPWL& f, const Caps& caps) {
    const int n = f.complex().dim();
    ComplexPtr fan = braid_complex(n, caps);
    if (!complexes_equal(f.complex(), *fan))
        fail(ErrorCode::ComplexMismatch, "function does not live on the braid fan");
    RatVec values(1u << n, Rat(0));
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        RatVec indicator(n, Rat(0));
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) indicator[i] = 1;
        values[mask] = f.evaluate(indicator);
    }
    return SetFunction(n, std::move(values));
}

bool is_submodular(const SetFunction& F, const Caps& caps) {
    const int n = F.n();
    if (n > caps.lovasz_n) fail(ErrorCode::CapExceeded, "submodularity check ground-set cap");
    for (unsigned a = 0; a < F.table_size(); ++a) {
        for (int i = 0; i < n; ++i) {
            if (a & (1u << i)) continue;
            for (int j = i + 1; j < n; ++j) {
                if (a & (1u << j)) continue;
                // F(A∪{i}) + F(A∪{j}) ≥ F(A∪{i,j}) + F(A)
                if (F.normalized(a | (1u << i)) + F.normalized(a | (1u << j)) <
                    F.normalized(a | (1u << i) | (1u << j)) + F.normalized(a))
                    return false;
            }
        }
    }
    return true;
}

bool is_modular(const SetFunction& F, const Caps& caps) {
    SetFunction neg(F.n(), [&] {
        RatVec v(F.table_size());
        for (unsigned m = 0; m < F.table_size(); ++m) v[m] = -F.value(m);
        return v;
    }());
    return is_submodular(F, caps) && is_submodular(neg, caps);
}

SetFunction canonical_mod_modular(const SetFunction& F) {
    RatVec values(F.table_size());
    for (unsigned mask = 0; mask < F.table_size(); ++mask) {
        Rat v = F.normalized(mask);
        for (int i = 0; i < F.n(); ++i)
            if (mask & (1u << i)) v -= F.normalized(1u << i);
        values[mask] = v;
    }
    return SetFunction(F.n(), std::move(values));
}

SetDecomposition decompose_set_function(const SetFunction& F, const Caps& caps) {
    CPWL f = lovasz(F, caps);
    DecompPoint dec = solve_reduced(f);
    const int n = F.n();
    RatVec gv(1u << n), hv(1u << n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        RatVec indicator(n, Rat(0));
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) indicator[i] = 1;
        gv[mask] = dec.g.evaluate(indicator);
        hv[mask] = dec.h.evaluate(indicator);
    }
    SetDecomposition out{SetFunction(n, std::move(gv)), SetFunction(n, std::move(hv)),
                         is_vertex(dec), is_reduced(dec)};
    return out;
}

SetFunction cut_function(const WeightedGraph& g) {
    if (g.n < 1) fail(ErrorCode::InvalidInput, "graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        if (e.u < 1 || e.v < 1 || e.u > g.n || e.v > g.n || e.u >= e.v)
            fail(ErrorCode::InvalidInput, "edges must satisfy 1 <= u < v <= n");
        if (!seen.insert({e.u, e.v}).second)
            fail(ErrorCode::InvalidInput, "duplicate edge");
    }
    RatVec values(1u << g.n, Rat(0));
    for (unsigned mask = 0; mask < values.size(); ++mask) {
        Rat total = 0;
        for (const auto& e : g.edges) {
            bool in_u = mask & (1u << (e.u - 1));
            bool in_v = mask & (1u << (e.v - 1));
            if (in_u != in_v) total += e.weight;
        }
        values[mask] = total;
    }
    return SetFunction(g.n, std::move(values));
}

std::vector<RatVec> greedy_vertices(const SetFunction& G, const Caps& caps) {
    const int n = G.n();
    if (n > caps.braid_n) fail(ErrorCode::CapExceeded, "greedy enumeration ground-set cap");
    if (!is_submodular(G, caps))
        fail(ErrorCode::NotSubmodular, "greedy vertices require a submodular function");
    std::set<RatVec> vertices;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        RatVec x(n, Rat(0));
        unsigned mask = 0;
        Rat prev = 0;
        for (int i = 0; i < n; ++i) {
            mask |= 1u << perm[i];
            Rat cur = G.normalized(mask);
            x[perm[i]] = cur - prev;
            prev = cur;
        }
        vertices.insert(std::move(x));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {vertices.begin(), vertices.end()};
}

}  // namespace dcsplit
