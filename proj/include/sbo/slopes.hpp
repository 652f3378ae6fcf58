#pragma once

#include <vector>

#include "sbo/grid.hpp"

namespace sbo {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least-squares line through (x_i, y_i).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares slope of log y against log x; requires positive data.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// One probe point: a scale N and the measured ratio at that scale.
struct ProbePoint {
    double n = 0.0;
    double ratio = 0.0;
    double lhs = 0.0;  // measured norm
    double rhs = 0.0;  // normalization
};

struct ProbeReport {
    std::string label;
    std::vector<ProbePoint> points;
    double fitted_slope = 0.0;
    double predicted_exponent = 0.0;
    bool pass = false;
};

// Fits the log-log slope of the points and applies the one-sided verdict
// slope >= predicted - tolerance (growth may exceed a lower bound, only
// undershoot fails).
ProbeReport finish_report(std::string label, std::vector<ProbePoint> points, double predicted,
                          double tolerance = 0.15);

}  // namespace sbo
