#pragma once

#include <span>

#include "sbo/grid.hpp"

// Discrete transforms, Fourier multipliers and the two linear semigroups.
//
// Conventions (fixed repo-wide):
//   * angular frequencies k = 2*pi*m/L, mode index m in [-n/2, n/2);
//   * forward transform returns the coefficients c_k of f(x) = sum c_k e^{ikx},
//     i.e. c_k = (1/n) sum_m f(x_m) e^{-ik x_m};
//   * Parseval: sum_k |c_k|^2 = (1/n) sum_m |f(x_m)|^2, and the discrete L^2
//     norm of a field is the plain l^2 norm of its coefficients.

namespace sbo {

// forward DFT of physical samples; throws size_error on length mismatch.
SpectralField forward_transform(const Grid1D& grid, std::span<const cplx> samples,
                                bool real_hint = false);
SpectralField forward_transform_real(const Grid1D& grid, std::span<const double> samples);

// inverse DFT back to physical samples.
std::vector<cplx> inverse_transform(const SpectralField& field);
// inverse transform of a real-flagged field; imaginary residue is discarded.
std::vector<double> inverse_transform_real(const SpectralField& field);

// A diagonal Fourier operator: one complex factor per FFT slot.
struct Multiplier {
    std::string name;
    std::vector<cplx> factor;
    bool real_preserving = false;
};

Multiplier derivative_multiplier(const Grid1D& grid);          // ik, Nyquist zeroed
Multiplier hilbert_multiplier(const Grid1D& grid);             // -i sgn(k), k=0 and Nyquist zeroed
Multiplier bracket_power_multiplier(const Grid1D& grid, double s);   // (1+k^2)^{s/2}
Multiplier abs_power_multiplier(const Grid1D& grid, double s);       // |k|^s, k=0 zeroed
Multiplier schrodinger_multiplier(const Grid1D& grid, double t);     // e^{-i k^2 t}
Multiplier bo_multiplier(const Grid1D& grid, double t, double nu);   // e^{-i nu |k|k t}

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& m);

SpectralField hilbert_transform(const SpectralField& field);
SpectralField schrodinger_semigroup(const SpectralField& field, double t);
SpectralField bo_semigroup(const SpectralField& field, double t, double nu);

// 2/3-rule de-aliasing: zero all modes with |m| > n/3 (Nyquist included).
SpectralField dealias_two_thirds(const SpectralField& field);

}  // namespace sbo
