#pragma once

#include <optional>

#include "sbo/grid.hpp"

namespace sbo {

// Which linear evolution a modulation weight refers to.
enum class EquationTag { schrodinger, benjamin_ono };

// Regularity indices: spatial s, optional modulation b with its equation tag
// (and nu for the Benjamin-Ono bracket <tau + nu|xi|xi>).
struct SobolevIndex {
    double s = 0.0;
    std::optional<double> b;
    std::optional<EquationTag> tag;
    double nu = 0.0;
};

double l2_norm(const SpectralField& field);

// H^s norm: sqrt( sum_k <k>^{2s} |c_k|^2 ).  Fixed Parseval normalization:
// coefficients of e^{ikx}, unit weight per mode.
double sobolev_norm(const SpectralField& field, double s);

struct HomogeneousNorm {
    double value = 0.0;
    // set when the excluded k = 0 mode carries content that makes the value
    // meaningless (nonzero mean with s < 0, or a pure-mean field)
    bool zero_mode_warning = false;
};

// Hdot^s norm with weight |k|^{2s}, k = 0 excluded.
HomogeneousNorm homogeneous_norm(const SpectralField& field, double s);

// Spectral realization of the dilation x -> lambda x on a fixed torus:
// relabel modes m -> lambda*m and scale amplitudes by amp_factor.  lambda
// must be a positive integer and the active band must stay within half the
// Nyquist mode.
SpectralField rescale_spectral(const SpectralField& field, int lambda, double amp_factor);

struct ScalingCheck {
    double lambda = 1.0;
    double measured_u = 0.0;
    double predicted_u = 0.0;  // lambda^{1+s}
    double measured_v = 0.0;
    double predicted_v = 0.0;  // lambda^{3/2+s'}
    bool pass = false;         // both ratios within tol of prediction
};

// Measures Hdot^s / Hdot^{s'} ratios under the integer dilation lambda and
// compares with the dilation laws lambda^{1+s} and lambda^{3/2+s'}.
ScalingCheck scaling_check(const SpectralField& phi, const SpectralField& psi, int lambda,
                           double s, double s_prime, double tol = 1e-10);

}  // namespace sbo
