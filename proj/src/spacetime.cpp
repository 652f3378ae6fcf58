#include "sbo/spacetime.hpp"

namespace sbo {

SpaceTimeGrid SpaceTimeGrid::cover(double tau_lo, double tau_hi, double dtau, double xi_lo,
                                   double xi_hi, double dxi) {
    if (!(dtau > 0.0) || !(dxi > 0.0))
        throw parameter_error("SpaceTimeGrid: steps must be positive");
    if (tau_hi < tau_lo || xi_hi < xi_lo)
        throw parameter_error("SpaceTimeGrid: empty rectangle");
    SpaceTimeGrid g;
    g.dtau = dtau;
    g.dxi = dxi;
    g.itau0 = static_cast<std::int64_t>(std::floor(tau_lo / dtau));
    g.ixi0 = static_cast<std::int64_t>(std::floor(xi_lo / dxi));
    g.ntau = static_cast<int>(std::ceil(tau_hi / dtau)) - static_cast<int>(g.itau0) + 1;
    g.nxi = static_cast<int>(std::ceil(xi_hi / dxi)) - static_cast<int>(g.ixi0) + 1;
    return g;
}

double spacetime_l2(const SpaceTimeField& f) {
    double sum = 0.0;
    for (const cplx& a : f.amp) sum += std::norm(a);
    return std::sqrt(sum * f.grid.cell_area());
}

namespace {

double modulation_weight(const SobolevIndex& idx, double tau, double xi) {
    const double phase = *idx.tag == EquationTag::schrodinger
                             ? tau + xi * xi
                             : tau + idx.nu * std::abs(xi) * xi;
    return bracket_pow(phase, *idx.b);
}

}  // namespace

double bourgain_norm(const SpaceTimeField& f, const SobolevIndex& idx) {
    if (!idx.b || !idx.tag)
        throw parameter_error("bourgain_norm: index needs both b and an equation tag");
    double sum = 0.0;
    for (int a = 0; a < f.grid.ntau; ++a) {
        const double tau = f.grid.tau(a);
        for (int b = 0; b < f.grid.nxi; ++b) {
            const double xi = f.grid.xi(b);
            const double w = bracket_pow(xi, idx.s) * modulation_weight(idx, tau, xi);
            sum += w * w * std::norm(f.at(a, b));
        }
    }
    return std::sqrt(sum * f.grid.cell_area());
}

EmbeddingReport embedding_spotcheck(const std::vector<SpaceTimeField>& samples, double s,
                                    double b, int time_oversample) {
    if (!(b > 0.5)) throw parameter_error("embedding_spotcheck: requires b > 1/2");
    EmbeddingReport rep;
    for (const SpaceTimeField& f : samples) {
        SobolevIndex idx;
        idx.s = s;
        idx.b = b;
        idx.tag = EquationTag::schrodinger;
        const double denom = bourgain_norm(f, idx);
        if (denom == 0.0) {
            ++rep.skipped;
            continue;
        }
        // f(t, xi_j) = (dtau/2pi) sum_a e^{i t tau_a} F(a, j); the synthesis is
        // periodic in t with period 2pi/dtau, so one period is scanned.
        const SpaceTimeGrid& g = f.grid;
        const int nt = time_oversample * g.ntau;
        const double period = 2.0 * kPi / g.dtau;
        double sup = 0.0;
        std::vector<cplx> column(static_cast<std::size_t>(g.nxi));
        for (int it = 0; it < nt; ++it) {
            const double t = -0.5 * period + period * it / nt;
            for (int j = 0; j < g.nxi; ++j) column[static_cast<std::size_t>(j)] = cplx(0.0);
            for (int a = 0; a < g.ntau; ++a) {
                const double th = t * g.tau(a);
                const cplx e(std::cos(th), std::sin(th));
                for (int j = 0; j < g.nxi; ++j)
                    column[static_cast<std::size_t>(j)] += e * f.at(a, j);
            }
            double hs = 0.0;
            for (int j = 0; j < g.nxi; ++j) {
                const double w = bracket_pow(g.xi(j), 2.0 * s);
                hs += w * std::norm(column[static_cast<std::size_t>(j)]);
            }
            // dtau/2pi from the synthesis, sqrt(dxi) from the H^s quadrature
            sup = std::max(sup, std::sqrt(hs * g.dxi) * g.dtau / (2.0 * kPi));
        }
        rep.ratios.push_back(sup / denom);
        rep.max_ratio = std::max(rep.max_ratio, sup / denom);
    }
    return rep;
}

}  // namespace sbo
