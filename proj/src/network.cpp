#include "dcsplit/network.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "dcsplit/error.hpp"

namespace dcsplit {

int ceil_log2(int k) {
    int t = 0;
    int reach = 1;
    while (reach < k) {
        reach *= 2;
        ++t;
    }
    return t;
}

NetworkStats stats(const ReluNetwork& net) {
    NetworkStats s;
    s.depth = static_cast<int>(net.layers.size());
    for (std::size_t i = 0; i + 1 < net.layers.size(); ++i) {
        int units = static_cast<int>(net.layers[i].weight.size());
        s.width = std::max(s.width, units);
        s.size += units;
    }
    return s;
}

namespace {

// Incrementally builds hidden layers while tracking "virtual values":
// affine combinations of the current top layer's outputs (or of the raw
// inputs before any layer exists).
class Builder {
  public:
    Builder(int input_dim, std::vector<AffineMap> initial) : input_dim_(input_dim) {
        for (auto& m : initial) {
            rows_.push_back(std::move(m.a));
            bias_.push_back(m.b);
        }
    }

    int value_count() const { return static_cast<int>(rows_.size()); }

    // one round of pairwise maxima within each contiguous block; blocks of
    // size one are passed through
    void max_round(const std::vector<int>& block_of_value) {
        RatMat units;
        RatVec unit_bias;
        RatMat new_rows;
        RatVec new_bias;
        std::vector<int> new_blocks;
        int i = 0;
        const int p = value_count();
        while (i < p) {
            int block = block_of_value[i];
            if (i + 1 < p && block_of_value[i + 1] == block) {
                // max(x, y) = ReLU(x - y) + ReLU(y) - ReLU(-y)
                int u1 = push_unit(units, unit_bias, diff(i, i + 1));
                int u2 = push_unit(units, unit_bias, {rows_[i + 1], bias_[i + 1]});
                int u3 = push_unit(units, unit_bias, neg(i + 1));
                new_rows.push_back({});
                new_bias.push_back(Rat(0));
                pending_.push_back({static_cast<int>(new_rows.size()) - 1, {u1, u2, u3}});
                new_blocks.push_back(block);
                i += 2;
            } else {
                int u1 = push_unit(units, unit_bias, {rows_[i], bias_[i]});
                int u2 = push_unit(units, unit_bias, neg(i));
                new_rows.push_back({});
                new_bias.push_back(Rat(0));
                pending_.push_back({static_cast<int>(new_rows.size()) - 1, {u1, -1, u2}});
                new_blocks.push_back(block);
                i += 1;
            }
        }
        const int width = static_cast<int>(units.size());
        for (auto& entry : pending_) {
            RatVec combo(width, Rat(0));
            combo[entry.units[0]] = 1;
            if (entry.units[1] >= 0) combo[entry.units[1]] = 1;
            combo[entry.units[2]] = -1;
            new_rows[entry.value] = std::move(combo);
        }
        pending_.clear();
        layers_.push_back(Layer{std::move(units), std::move(unit_bias), true});
        rows_ = std::move(new_rows);
        bias_ = std::move(new_bias);
    }

    // replace the values by the provided layer + combinations
    void custom_layer(RatMat units, RatVec unit_bias, RatMat combos, RatVec combo_bias) {
        layers_.push_back(Layer{std::move(units), std::move(unit_bias), true});
        rows_ = std::move(combos);
        bias_ = std::move(combo_bias);
    }

    ReluNetwork finish() {
        if (value_count() != 1) fail(ErrorCode::Internal, "network builder did not converge");
        ReluNetwork net;
        net.input_dim = input_dim_;
        net.layers = std::move(layers_);
        net.layers.push_back(Layer{{rows_[0]}, {bias_[0]}, false});
        return net;
    }

    const RatMat& rows() const { return rows_; }
    const RatVec& bias() const { return bias_; }

  private:
    std::pair<RatVec, Rat> diff(int i, int j) const {
        return {rows_[i] - rows_[j], bias_[i] - bias_[j]};
    }
    std::pair<RatVec, Rat> neg(int i) const {
        RatVec r(rows_[i].size());
        for (std::size_t t = 0; t < r.size(); ++t) r[t] = -rows_[i][t];
        return {std::move(r), -bias_[i]};
    }
    static int push_unit(RatMat& units, RatVec& unit_bias, std::pair<RatVec, Rat> u) {
        units.push_back(std::move(u.first));
        unit_bias.push_back(std::move(u.second));
        return static_cast<int>(units.size()) - 1;
    }

    int input_dim_;
    std::vector<Layer> layers_;
    RatMat rows_;
    RatVec bias_;
    struct Pending {
        int value;
        int units[3];
    };
    std::vector<Pending> pending_;
};

std::vector<AffineMap> distinct_components(const CPWL& f) {
    std::set<std::pair<RatVec, Rat>> seen;
    std::vector<AffineMap> out;
    for (const auto& p : f.pieces()) {
        if (seen.insert({p.a, p.b}).second) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// upper envelope of 1D affine maps: kept maps by increasing slope with the
// breakpoints between consecutive kept maps
struct Envelope {
    std::vector<AffineMap> maps;
    RatVec breakpoints;
};

Envelope upper_envelope(std::vector<AffineMap> maps) {
    std::sort(maps.begin(), maps.end(), [](const AffineMap& x, const AffineMap& y) {
        if (x.a[0] != y.a[0]) return x.a[0] < y.a[0];
        return x.b < y.b;
    });
    // for equal slopes only the largest intercept survives
    std::vector<AffineMap> lines;
    for (auto& m : maps) {
        if (!lines.empty() && lines.back().a[0] == m.a[0]) lines.pop_back();
        lines.push_back(m);
    }
    auto meet = [](const AffineMap& x, const AffineMap& y) {
        return (x.b - y.b) / (y.a[0] - x.a[0]);
    };
    std::vector<AffineMap> hull;
    RatVec breaks;
    for (const auto& m : lines) {
        while (!breaks.empty() && meet(hull.back(), m) <= breaks.back()) {
            hull.pop_back();
            breaks.pop_back();
        }
        if (!hull.empty()) breaks.push_back(meet(hull.back(), m));
        hull.push_back(m);
    }
    return Envelope{std::move(hull), std::move(breaks)};
}

// hidden units and the value row of the breakpoint form
// f(x) = a_L x + b_L + Σ δ_i ReLU(x - t_i)
struct BreakpointForm {
    RatMat units;       // rows over the single input coordinate
    RatVec unit_bias;
    RatVec combo;       // over the units
    Rat combo_bias = 0;
};

BreakpointForm breakpoint_form(const Envelope& env) {
    BreakpointForm form;
    const AffineMap& left = env.maps.front();
    if (env.breakpoints.empty()) {
        // affine: pass through as ReLU(v) - ReLU(-v)
        form.units = {{left.a[0]}, {-left.a[0]}};
        form.unit_bias = {left.b, -left.b};
        form.combo = {Rat(1), Rat(-1)};
        return form;
    }
    const Rat& t1 = env.breakpoints.front();
    for (const auto& t : env.breakpoints) {
        form.units.push_back({Rat(1)});
        form.unit_bias.push_back(-t);
    }
    RatVec combo(env.breakpoints.size(), Rat(0));
    for (std::size_t i = 0; i < env.breakpoints.size(); ++i)
        combo[i] = env.maps[i + 1].a[0] - env.maps[i].a[0];
    // rewrite the leftmost affine map against the first breakpoint:
    // a x + b = a·ReLU(x - t1) - a·ReLU(t1 - x) + (a t1 + b)
    form.combo_bias = left.a[0] * t1 + left.b;
    if (left.a[0] != 0) {
        combo[0] += left.a[0];
        form.units.push_back({Rat(-1)});
        form.unit_bias.push_back(t1);
        combo.push_back(-left.a[0]);
    }
    form.combo = std::move(combo);
    return form;
}

ReluNetwork grouped_build(const std::vector<AffineMap>& components, int input_dim, int r,
                          int s) {
    const int k = static_cast<int>(components.size());
    if (k == 0) fail(ErrorCode::EmptyList, "no affine components");
    if (static_cast<long>(r) * s < k)
        fail(ErrorCode::ParamsTooSmall, "need r*s >= number of affine components");
    const int group_size = (k + r - 1) / r;
    std::vector<int> block_of_value(k);
    for (int i = 0; i < k; ++i) block_of_value[i] = i / group_size;
    const int groups = (k + group_size - 1) / group_size;

    if (input_dim == 1) {
        // inner stage: one joint breakpoint layer for all group envelopes
        RatMat units;
        RatVec unit_bias;
        RatMat combos;
        RatVec combo_bias;
        for (int gidx = 0; gidx < groups; ++gidx) {
            std::vector<AffineMap> group;
            for (int i = 0; i < k; ++i)
                if (block_of_value[i] == gidx) group.push_back(components[i]);
            BreakpointForm form = breakpoint_form(upper_envelope(std::move(group)));
            const int base = static_cast<int>(units.size());
            for (std::size_t u = 0; u < form.units.size(); ++u) {
                units.push_back(form.units[u]);
                unit_bias.push_back(form.unit_bias[u]);
            }
            combos.push_back({});
            combo_bias.push_back(form.combo_bias);
            combos.back().assign(base, Rat(0));
            for (const auto& cv : form.combo) combos.back().push_back(cv);
        }
        const int width = static_cast<int>(units.size());
        for (auto& row : combos) row.resize(width, Rat(0));
        Builder builder(input_dim, components);  // values replaced by custom layer
        builder.custom_layer(std::move(units), std::move(unit_bias), std::move(combos),
                             std::move(combo_bias));
        std::vector<int> single_block(builder.value_count(), 0);
        const int outer = ceil_log2(r);
        for (int t = 0; t < outer; ++t) builder.max_round(single_block);
        return builder.finish();
    }

    Builder builder(input_dim, components);
    const int inner = ceil_log2(s);
    std::vector<int> blocks = block_of_value;
    for (int t = 0; t < inner; ++t) {
        builder.max_round(blocks);
        // recompute block labels after pairing
        std::vector<int> next;
        for (std::size_t i = 0; i < blocks.size();) {
            if (i + 1 < blocks.size() && blocks[i + 1] == blocks[i]) {
                next.push_back(blocks[i]);
                i += 2;
            } else {
                next.push_back(blocks[i]);
                i += 1;
            }
        }
        blocks = std::move(next);
    }
    if (static_cast<int>(blocks.size()) != groups)
        fail(ErrorCode::Internal, "inner max stage did not reduce each group");
    std::vector<int> single_block(builder.value_count(), 0);
    const int outer = ceil_log2(r);
    for (int t = 0; t < outer; ++t) {
        builder.max_round(single_block);
        single_block.assign(builder.value_count(), 0);
    }
    return builder.finish();
}

}  // namespace

ReluNetwork max_tree(const std::vector<AffineMap>& components, int input_dim) {
    if (components.empty()) fail(ErrorCode::EmptyList, "max of an empty list");
    for (const auto& m : components) {
        if (static_cast<int>(m.a.size()) != input_dim)
            fail(ErrorCode::DimMismatch, "component dimension mismatch");
    }
    Builder builder(input_dim, components);
    std::vector<int> single(components.size(), 0);
    const int rounds = ceil_log2(static_cast<int>(components.size()));
    for (int t = 0; t < rounds; ++t) {
        builder.max_round(single);
        single.assign(builder.value_count(), 0);
    }
    return builder.finish();
}

ReluNetwork convex_1d(const CPWL& f) {
    if (f.complex().dim() != 1) fail(ErrorCode::WrongDim, "convex_1d expects a 1D function");
    if (!is_convex(f)) fail(ErrorCode::NotConvex, "convex_1d expects a convex function");
    BreakpointForm form = breakpoint_form(upper_envelope(distinct_components(f)));
    ReluNetwork net;
    net.input_dim = 1;
    net.layers.push_back(Layer{form.units, form.unit_bias, true});
    net.layers.push_back(Layer{{form.combo}, {form.combo_bias}, false});
    return net;
}

ReluNetwork grouped_convex(const CPWL& f, int r, int s) {
    if (r < 1 || s < 1) fail(ErrorCode::ParamsTooSmall, "need r, s >= 1");
    if (!is_convex(f)) fail(ErrorCode::NotConvex, "grouped_convex expects a convex function");
    return grouped_build(distinct_components(f), f.complex().dim(), r, s);
}

ReluNetwork dc_network(const CPWL& f, const DecompPoint& decomposition, int r, int s) {
    if (!decomposition.wg.nonnegative() || !decomposition.wh.nonnegative())
        fail(ErrorCode::NotConvex, "decomposition parts must be convex");
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        if (!(decomposition.g.piece(i).a - decomposition.h.piece(i).a == f.piece(i).a) ||
            decomposition.g.piece(i).b - decomposition.h.piece(i).b != f.piece(i).b)
            fail(ErrorCode::DecompositionMismatch, "decomposition does not reproduce f");
    }
    const int n = f.complex().dim();
    ReluNetwork gn = grouped_build(distinct_components(decomposition.g), n, r, s);
    ReluNetwork hn = grouped_build(distinct_components(decomposition.h), n, r, s);
    if (gn.layers.size() != hn.layers.size())
        fail(ErrorCode::Internal, "branch depth mismatch");
    ReluNetwork net;
    net.input_dim = n;
    const int depth = static_cast<int>(gn.layers.size());
    for (int l = 0; l < depth - 1; ++l) {
        const Layer& a = gn.layers[l];
        const Layer& b = hn.layers[l];
        const int wa = static_cast<int>(a.weight.size());
        const int wb = static_cast<int>(b.weight.size());
        const int prev_a = static_cast<int>(a.weight.empty() ? 0 : a.weight[0].size());
        const int prev_b = static_cast<int>(b.weight.empty() ? 0 : b.weight[0].size());
        Layer merged;
        merged.relu = true;
        for (int u = 0; u < wa; ++u) {
            RatVec row = a.weight[u];
            if (l > 0) row.resize(prev_a + prev_b, Rat(0));
            merged.weight.push_back(std::move(row));
            merged.bias.push_back(a.bias[u]);
        }
        for (int u = 0; u < wb; ++u) {
            RatVec row;
            if (l > 0) {
                row.assign(prev_a, Rat(0));
                row.insert(row.end(), b.weight[u].begin(), b.weight[u].end());
            } else {
                row = b.weight[u];
            }
            merged.weight.push_back(std::move(row));
            merged.bias.push_back(b.bias[u]);
        }
        net.layers.push_back(std::move(merged));
    }
    const Layer& fa = gn.layers.back();
    const Layer& fb = hn.layers.back();
    Layer final_layer;
    final_layer.relu = false;
    RatVec row = fa.weight[0];
    if (depth > 1) {
        for (const auto& cv : fb.weight[0]) row.push_back(-cv);
    } else {
        for (std::size_t j = 0; j < row.size(); ++j) row[j] -= fb.weight[0][j];
    }
    final_layer.weight.push_back(std::move(row));
    final_layer.bias.push_back(fa.bias[0] - fb.bias[0]);
    net.layers.push_back(std::move(final_layer));
    return net;
}

Rat evaluate_network(const ReluNetwork& net, const RatVec& x) {
    if (static_cast<int>(x.size()) != net.input_dim)
        fail(ErrorCode::DimMismatch, "network input dimension mismatch");
    RatVec cur = x;
    for (const auto& layer : net.layers) {
        RatVec next(layer.weight.size());
        for (std::size_t u = 0; u < layer.weight.size(); ++u) {
            next[u] = dot(layer.weight[u], cur) + layer.bias[u];
            if (layer.relu && next[u] < 0) next[u] = 0;
        }
        cur = std::move(next);
    }
    if (cur.size() != 1) fail(ErrorCode::Internal, "network must produce one output");
    return cur[0];
}

double evaluate_network_float(const ReluNetwork& net, const std::vector<double>& x) {
    std::vector<double> cur = x;
    for (const auto& layer : net.layers) {
        std::vector<double> next(layer.weight.size(), 0.0);
        for (std::size_t u = 0; u < layer.weight.size(); ++u) {
            double acc = layer.bias[u].convert_to<double>();
            for (std::size_t j = 0; j < cur.size(); ++j)
                acc += layer.weight[u][j].convert_to<double>() * cur[j];
            next[u] = (layer.relu && acc < 0) ? 0.0 : acc;
        }
        cur = std::move(next);
    }
    return cur[0];
}

std::vector<RatVec> sample_points(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<RatVec> points;
    points.reserve(count);
    for (int t = 0; t < count; ++t) {
        RatVec x(dim);
        for (int j = 0; j < dim; ++j) {
            long num = static_cast<long>(rng() % 801) - 400;
            long den = static_cast<long>(rng() % 20) + 1;
            x[j] = make_rat(Int(num), Int(den));
        }
        points.push_back(std::move(x));
    }
    return points;
}

VerifyReport verify_network(const ReluNetwork& net, const CPWL& f, int sample_count,
                            std::uint64_t seed) {
    VerifyReport report;
    for (const auto& x : sample_points(f.complex().dim(), sample_count, seed)) {
        ++report.samples_checked;
        if (evaluate_network(net, x) != f.evaluate(x)) ++report.failures;
    }
    for (std::size_t ci = 0; ci < f.complex().cells().size(); ++ci) {
        const auto& ip = f.complex().interior_point(ci);
        if (!ip) continue;
        ++report.samples_checked;
        if (evaluate_network(net, *ip) != f.piece(ci)(*ip)) ++report.failures;
    }
    return report;
}

}  // namespace dcsplit
