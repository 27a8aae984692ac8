#ifndef DCSPLIT_SVG_HPP
#define DCSPLIT_SVG_HPP

#include <string>

#include "dcsplit/constructions.hpp"

namespace dcsplit {

/// Static SVG of a weighted 2D fan: positive rays solid, negative rays
/// dashed, zero-weight rays dotted, each labeled with its Euclidean weight
/// (kept symbolic: ω or ω*sqrt(‖ν‖²)).
std::string render_fan_svg(const WeightedFan2D& fan);

/// Euclidean weight label for a ray: the scaled weight times the length of
/// the primitive normal, printed symbolically.
std::string euclidean_weight_label(const Rat& omega, const IntVec& ray);

}  // namespace dcsplit

#endif
