#ifndef DCSPLIT_NETWORK_HPP
#define DCSPLIT_NETWORK_HPP

#include <cstdint>
#include <vector>

#include "dcsplit/decomposition.hpp"

namespace dcsplit {

/// One affine transformation, followed by a componentwise ReLU unless it is
/// the output layer.
struct Layer {
    RatMat weight;  // rows = units
    RatVec bias;
    bool relu = true;
};

struct ReluNetwork {
    int input_dim = 0;
    std::vector<Layer> layers;  // final layer has relu = false, one output
};

struct NetworkStats {
    int depth = 0;   // number of affine layers
    int width = 0;   // max hidden layer size
    long size = 0;   // total hidden units
};

NetworkStats stats(const ReluNetwork& net);

/// Exact maximum of k affine maps: depth ⌈log₂ k⌉ + 1,
/// size ≤ 3(k-1) + 2⌈log₂ k⌉.
ReluNetwork max_tree(const std::vector<AffineMap>& components, int input_dim);

/// Breakpoint form of a convex function on the line: depth exactly 2.
ReluNetwork convex_1d(const CPWL& f);

/// r parallel group maxima (inner: breakpoint form for n = 1, binary max
/// tree otherwise) followed by a max-of-r tree. Depth is exactly
/// inner_depth + ⌈log₂ r⌉ with inner_depth(1D) = 2 and
/// inner_depth(n≥2) = ⌈log₂ s⌉ + 1.
ReluNetwork grouped_convex(const CPWL& f, int r, int s);

/// Parallel grouped networks for the two convex parts, subtracted in the
/// final layer.
ReluNetwork dc_network(const CPWL& f, const DecompPoint& decomposition, int r, int s);

Rat evaluate_network(const ReluNetwork& net, const RatVec& x);
double evaluate_network_float(const ReluNetwork& net, const std::vector<double>& x);

struct VerifyReport {
    int samples_checked = 0;
    int failures = 0;
    bool all_exact() const { return failures == 0; }
};

/// Exact comparison of net against f at seeded pseudo-random rational
/// points plus one interior point per cell of f's complex.
VerifyReport verify_network(const ReluNetwork& net, const CPWL& f, int sample_count,
                            std::uint64_t seed);

/// Deterministic rational sample points used by verify_network.
std::vector<RatVec> sample_points(int dim, int count, std::uint64_t seed);

int ceil_log2(int k);

}  // namespace dcsplit

#endif
