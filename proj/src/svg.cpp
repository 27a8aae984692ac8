#include "dcsplit/svg.hpp"

#include <cmath>
#include <sstream>

namespace dcsplit {

std::string euclidean_weight_label(const Rat& omega, const IntVec& ray) {
    IntVec nu = primitive_normal(rot90(ray));
    Rat nsq = norm_sq(nu);
    if (nsq == 1 || omega == 0) return omega.str();
    return omega.str() + "*sqrt(" + nsq.str() + ")";
}

std::string render_fan_svg(const WeightedFan2D& fan) {
    const double cx = 220, cy = 220, len = 170;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" "
           "viewBox=\"0 0 440 440\">\n";
    svg << "  <rect width=\"440\" height=\"440\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        double x = fan.rays[i][0].convert_to<double>();
        double y = fan.rays[i][1].convert_to<double>();
        double norm = std::sqrt(x * x + y * y);
        double ex = cx + len * x / norm;
        double ey = cy - len * y / norm;  // SVG y-axis points down
        const Rat& w = fan.weights[i];
        std::string stroke = w > 0 ? "#004c80" : (w < 0 ? "#cc3300" : "#999999");
        std::string dash = w > 0 ? "" : (w < 0 ? " stroke-dasharray=\"8,5\""
                                               : " stroke-dasharray=\"2,4\"");
        svg << "  <line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << ex << "\" y2=\""
            << ey << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"" << dash << "/>\n";
        double lx = cx + (len + 22) * x / norm;
        double ly = cy - (len + 22) * y / norm;
        svg << "  <text x=\"" << lx << "\" y=\"" << ly
            << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"" << stroke << "\">"
            << euclidean_weight_label(w, fan.rays[i]) << "</text>\n";
        svg << "  <text x=\"" << (cx + (len - 28) * x / norm) << "\" y=\""
            << (cy - (len - 28) * y / norm + 4)
            << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#555555\">(" << fan.rays[i][0]
            << "," << fan.rays[i][1] << ")</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace dcsplit
