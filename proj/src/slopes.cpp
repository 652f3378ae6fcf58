#include "sbo/slopes.hpp"

#include <algorithm>

namespace sbo {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw parameter_error("fit_line: need at least two matched points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw parameter_error("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw parameter_error("fit_loglog: data must be strictly positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return fit_line(lx, ly);
}

ProbeReport finish_report(std::string label, std::vector<ProbePoint> points, double predicted,
                          double tolerance) {
    if (points.size() < 5)
        throw parameter_error("probe: need at least 5 scale points, got " +
                              std::to_string(points.size()));
    std::sort(points.begin(), points.end(),
              [](const ProbePoint& a, const ProbePoint& b) { return a.n < b.n; });
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const ProbePoint& p : points) {
        xs.push_back(p.n);
        ys.push_back(p.ratio);
    }
    ProbeReport rep;
    rep.label = std::move(label);
    rep.points = std::move(points);
    rep.fitted_slope = fit_loglog(xs, ys).slope;
    rep.predicted_exponent = predicted;
    rep.pass = rep.fitted_slope >= predicted - tolerance;
    return rep;
}

}  // namespace sbo
