#ifndef DCSPLIT_CAPS_HPP
#define DCSPLIT_CAPS_HPP

#include <cstdlib>
#include <sstream>
#include <string>

namespace dcsplit {

/// Desk-scale resource caps. All of these are configuration, not constants;
/// the CLI and the DCSPLIT_CAPS environment variable may override them.
struct Caps {
    int dim = 4;             // ambient dimension for arrangement construction
    int hyperplanes = 12;    // arrangement size
    int enum_dim = 12;       // vertex enumeration dimension after elimination
    int enum_ineqs = 40;     // vertex enumeration inequality count
    int order_n = 5;         // order-statistic ground size
    int braid_n = 5;         // braid fan / full decomposition ground size
    int lovasz_n = 16;       // Lovász evaluation / submodularity checks

    /// Apply "key=value,key=value" overrides (the DCSPLIT_CAPS format).
    void apply_overrides(const std::string& spec) {
        std::istringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) continue;
            std::string key = item.substr(0, eq);
            int value = std::atoi(item.c_str() + eq + 1);
            if (value <= 0) continue;
            if (key == "dim") dim = value;
            else if (key == "hyperplanes") hyperplanes = value;
            else if (key == "enum_dim") enum_dim = value;
            else if (key == "enum_ineqs") enum_ineqs = value;
            else if (key == "order_n") order_n = value;
            else if (key == "braid_n") braid_n = value;
            else if (key == "lovasz_n") lovasz_n = value;
        }
    }

    static Caps from_env() {
        Caps caps;
        if (const char* env = std::getenv("DCSPLIT_CAPS")) caps.apply_overrides(env);
        return caps;
    }
};

}  // namespace dcsplit

#endif
