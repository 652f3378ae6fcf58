#pragma once

#include <cstdint>

#include "sbo/fourier.hpp"
#include "sbo/slopes.hpp"

// Second derivatives of the data-to-solution flow at zero, evaluated in
// closed form mode-pair by mode-pair, together with the wave-packet families
// whose interaction makes those derivatives grow in the packet scale N.

namespace sbo {

// Amplitudes on a contiguous window of the uniform frequency lattice
// xi = i * dxi (integer global index i).  Decoupled from Grid1D so packet
// probes can resolve arbitrarily thin intervals.
struct LineSpectrum {
    double dxi = 0.0;
    std::int64_t i0 = 0;
    std::vector<cplx> amp;

    double xi(int idx) const { return static_cast<double>(i0 + idx) * dxi; }
    int size() const { return static_cast<int>(amp.size()); }
};

// A union of windows on one lattice (packet data may occupy widely separated
// intervals; dense storage of the gap would be wasteful).
struct SegmentedSpectrum {
    double dxi = 0.0;
    std::vector<LineSpectrum> pieces;
};

// Coalesces overlapping / adjacent pieces, adding amplitudes where windows
// intersect.
SegmentedSpectrum merge_segments(const SegmentedSpectrum& in);

double line_sobolev_norm(const LineSpectrum& f, double s);
double line_l2_norm(const LineSpectrum& f);
double segmented_sobolev_norm(const SegmentedSpectrum& f, double s);

// int_0^t e^{i w t'} dt' = t e^{iwt/2} sinc(wt/2); stable through w -> 0.
cplx duhamel_phase_integral(double omega, double t);
// composite-Simpson evaluation of the same integral (cross-check path)
cplx duhamel_phase_integral_simpson(double omega, double t, int intervals);

// frequency-pair kernels of the two second-derivative responses
// (xi2 = xi - xi1 throughout)
cplx interaction_kernel_u(double t_prime, double xi, double xi1, double s, double s_prime,
                          double alpha, double nu);
cplx interaction_kernel_v(double t_prime, double xi, double xi1, double s, double s_prime,
                          double beta, double nu);

// second derivative of the u-component at zero data in direction (phi, psi):
//   -2 i alpha e^{-i t xi^2} sum_{xi1} I(w, t) phi(xi - xi1) psi(xi1) * conv_weight
// with w = xi^2 - (xi - xi1)^2 - nu |xi1| xi1.  conv_weight is the lattice
// measure dxi for transform-sampled data and 1 for torus coefficients.
LineSpectrum flow_second_derivative_u(const LineSpectrum& phi, const LineSpectrum& psi, double t,
                                      double alpha, double nu, double conv_weight);

// second derivative of the v-component in direction (phi, 0); quadratic form
//   2 beta (i xi) e^{-i nu |xi| xi t} sum I(w, t) phi(xi2) conj(phi(-xi1))
// with w = nu |xi| xi - xi2^2 + xi1^2.
SegmentedSpectrum flow_second_derivative_v(const SegmentedSpectrum& phi, double t, double beta,
                                           double nu, double conv_weight);

// Grid-coupled versions (torus coefficients; used to cross-check against
// finite differences of the solver flow).
SpectralField flow_second_derivative_u(const SpectralField& phi, const SpectralField& psi,
                                       double t, double alpha, double nu);
SpectralField flow_second_derivative_v(const SpectralField& phi, double t, double beta,
                                       double nu);

// ---------------------------------------------------------------------------
// wave packets

struct FreqInterval {
    double center = 0.0;
    double halfwidth = 0.0;
    double lo() const { return center - halfwidth; }
    double hi() const { return center + halfwidth; }
    double width() const { return 2.0 * halfwidth; }
};

enum class PacketCase {
    T12i_low,    // s' < -1/2 branch, u-response
    T12i_high,   // s' > 2s - 1/2 branch, v-response
    T12ii_low,   // s' < s - 2 branch at t_N ~ N^{-2}, u-response
    T12ii_high,  // s' > s + 1 branch at t_N ~ N^{-2}, v-response
    T13_a,       // resonant |nu| = 1, u-response, output near N
    T13_b,       // resonant, v-response
    T13_c,       // resonant, u-response, output near 0
};

const char* to_string(PacketCase c);
PacketCase packet_case_from_string(const std::string& label);

// whether the case drives the u-response (pair data on A and B) or the
// v-response (quadratic data on -A union B)
enum class ResponseKind { u_pair, v_quadratic };

struct PacketSpec {
    PacketCase c = PacketCase::T13_a;
    int scale = 8;  // N
    double t = 1.0;
    double nu = 1.0;
};

struct PacketGeometry {
    FreqInterval a, b, r;
    ResponseKind kind = ResponseKind::u_pair;
    double min_scale = 2.0;       // admissibility floor on N
    double probe_time = 1.0;      // t (or t_N for the fixed-time families)
    bool inclusion_ok = false;    // r - b inside a, exact interval arithmetic
    double inclusion_margin = 0.0;
};

PacketGeometry packet_geometry(const PacketSpec& spec);

// predicted log-log growth exponent of the measured ratio for a case
double predicted_growth_exponent(PacketCase c, double s, double s_prime);

struct Packets {
    double dxi = 0.0;
    LineSpectrum f;        // indicator weighted data on B (u_pair) or -A u B (v_quadratic)
    LineSpectrum g;        // indicator on A (u_pair only; empty otherwise)
    SegmentedSpectrum f_segments;  // v_quadratic data as separate pieces
    PacketGeometry geometry;
    int modes_f = 0;
    int modes_g = 0;
};

// Builds indicator spectra on the lattice of spacing dxi.  Throws
// resolution_error when the thinnest interval holds fewer than min_modes
// lattice points (message names the required spacing).
Packets build_packets(const PacketSpec& spec, double dxi, int min_modes = 8);

// lattice spacing placing target_modes points in the thinnest interval
double recommended_spacing(const PacketSpec& spec, int target_modes = 16);

struct ConvolutionBoundCheck {
    double lhs = 0.0;  // |1_R|_{L^2} |1_B|_{L^1}
    double rhs = 0.0;  // |1_A * 1_B|_{L^2}, exact piecewise-linear convolution
    bool holds = false;
};

// Checks the convolution lower bound for interval triples with R - B inside
// A; throws parameter_error when the inclusion fails.
ConvolutionBoundCheck convolution_lower_bound_check(const FreqInterval& a, const FreqInterval& b,
                                                    const FreqInterval& r);

bool interval_inclusion_holds(const FreqInterval& a, const FreqInterval& b,
                              const FreqInterval& r, double* margin = nullptr);

struct GrowthProbeSettings {
    double s = 0.0;
    double s_prime = -1.0;
    double alpha = 1.0;
    double beta = 1.0;
    double nu = 1.0;
    double t = 1.0;
    int modes_per_min_width = 16;
    double slope_tolerance = 0.15;
};

// Measures ratio(N) = |second derivative|_{H^s or H^{s'}} / normalization on
// the case's packets over the given scales and fits the log-log slope.
ProbeReport run_growth_probe(PacketCase c, const GrowthProbeSettings& st,
                             const std::vector<int>& scales);

}  // namespace sbo
