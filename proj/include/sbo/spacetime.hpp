#pragma once

#include <cstdint>
#include <vector>

#include "sbo/norms.hpp"

// Discrete (tau, xi) rectangles for modulation-weighted space-time norms and
// for the weighted bilinear forms.  Every grid is a window of one global
// lattice tau = i*dtau, xi = j*dxi with integer indices, so windows built
// with equal steps align exactly under Minkowski sums.

namespace sbo {

struct SpaceTimeGrid {
    double dtau = 0.0;
    double dxi = 0.0;
    std::int64_t itau0 = 0;
    std::int64_t ixi0 = 0;
    int ntau = 0;
    int nxi = 0;

    double tau(int a) const { return static_cast<double>(itau0 + a) * dtau; }
    double xi(int b) const { return static_cast<double>(ixi0 + b) * dxi; }
    double cell_area() const { return dtau * dxi; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(ntau) * static_cast<std::size_t>(nxi);
    }

    // smallest window of the global lattice containing the closed rectangle
    static SpaceTimeGrid cover(double tau_lo, double tau_hi, double dtau, double xi_lo,
                               double xi_hi, double dxi);

    bool same_lattice(const SpaceTimeGrid& o) const { return dtau == o.dtau && dxi == o.dxi; }
};

struct SpaceTimeField {
    SpaceTimeGrid grid;
    std::vector<cplx> amp;  // row-major: amp[a*nxi + b]

    explicit SpaceTimeField(const SpaceTimeGrid& g)
        : grid(g), amp(g.node_count(), cplx(0.0)) {}

    cplx& at(int a, int b) { return amp[static_cast<std::size_t>(a) * grid.nxi + b]; }
    const cplx& at(int a, int b) const {
        return amp[static_cast<std::size_t>(a) * grid.nxi + b];
    }
};

// Riemann L^2 norm: sqrt( sum |amp|^2 * dtau*dxi ).
double spacetime_l2(const SpaceTimeField& f);

// Modulation-weighted norm with weight <xi>^s <tau + xi^2>^b (schrodinger tag)
// or <xi>^s <tau + nu|xi|xi>^b (benjamin_ono tag), times sqrt(cell area).
// Throws parameter_error if idx lacks b or the tag.
double bourgain_norm(const SpaceTimeField& f, const SobolevIndex& idx);

struct EmbeddingReport {
    std::vector<double> ratios;  // per sample: sup_t |f(t)|_{H^s} / |f|_{X^{s,b}}
    double max_ratio = 0.0;
    int skipped = 0;  // zero-norm samples
};

// Consistency probe for the continuous-in-time embedding of b > 1/2 spaces:
// reconstructs f(t, xi) from the (tau, xi) amplitudes, scans sup_t of the
// H^s_x norm and divides by the space-time norm.  Reports constants only.
EmbeddingReport embedding_spotcheck(const std::vector<SpaceTimeField>& samples, double s,
                                    double b, int time_oversample = 8);

}  // namespace sbo
