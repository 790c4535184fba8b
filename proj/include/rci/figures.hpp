#pragma once

#include <vector>

namespace rci {

// One panel of the premium-curve catalog the `figures` command emits. All
// panels use the classical model with lambda = mu = 1; theta sets the premium
// rate through c = (1 + theta) lambda / mu.
struct FigurePanel {
    const char* name;
    char sweep;  // 'm' (retention) or 't' (loading theta)
    double sweep_start;
    double sweep_stop;
    double sweep_step;
    char family; // per-curve parameter: 'q', 't', 'x' or 'm'
    std::vector<double> family_values;
    double q;     // fixed discount rate (unless family == 'q')
    double x;     // fixed initial surplus (unless family == 'x' or x_is_4c)
    double m;     // fixed retention (unless swept or family == 'm')
    double theta; // fixed loading (unless swept or family == 't')
    bool x_is_4c; // surplus read as x = 4.0 * c(theta)
};

inline const std::vector<FigurePanel>& figure_panels() {
    static const std::vector<FigurePanel> panels = {
        {"figure2a", 'm', 0.0, 3.0, 0.05, 'q', {0.01, 0.05, 0.1}, 0.0, 2.5, 0.0, 0.25, false},
        {"figure2b", 'm', 0.0, 3.0, 0.05, 't', {0.25, 0.5, 1.0}, 0.05, 4.5, 0.0, 0.0, false},
        {"figure2c", 'm', 0.0, 3.0, 0.05, 'x', {1.5, 2.5, 4.5}, 0.05, 0.0, 0.0, 0.5, false},
        {"figure3a", 't', 0.1, 1.0, 0.02, 'm', {0.0, 0.5, 1.0, 2.0}, 0.05, 0.0, 0.0, 0.0, true},
        {"figure3b", 't', 0.1, 1.0, 0.02, 'q', {0.01, 0.05, 0.1}, 0.0, 0.0, 1.0, 0.0, true},
        {"figure3c", 't', 0.1, 1.0, 0.02, 'x', {1.5, 2.5, 4.5}, 0.05, 0.0, 1.0, 0.0, false},
    };
    return panels;
}

// Number of points in a closed sweep [start, stop] with the given step.
inline int sweep_count(double start, double stop, double step) {
    return static_cast<int>((stop - start) / step + 1.5);
}

} // namespace rci
