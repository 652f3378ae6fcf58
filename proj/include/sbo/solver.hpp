#pragma once

#include "sbo/fourier.hpp"
#include "sbo/norms.hpp"

// Nonlinear evolution of the coupled system
//     i u_t + u_xx = alpha u v,   v_t + nu H v_xx = beta (|u|^2)_x
// by Strang splitting and by Picard iteration on the associated integral
// equations, plus the three conserved quantities tracked along a run.

namespace sbo {

struct SystemParams {
    double alpha = 1.0;
    double beta = 1.0;
    double nu = 0.5;
    Grid1D grid;
    double dt = 1e-3;
    double horizon = 0.5;

    SystemParams(double alpha_, double beta_, double nu_, const Grid1D& g, double dt_, double T)
        : alpha(alpha_), beta(beta_), nu(nu_), grid(g), dt(dt_), horizon(T) {
        if (alpha == 0.0 || beta == 0.0)
            throw parameter_error("SystemParams: alpha*beta must be nonzero");
        if (!(dt > 0.0) || !(T > 0.0))
            throw parameter_error("SystemParams: dt and horizon must be positive");
    }
};

struct SolutionState {
    double time = 0.0;
    SpectralField u;  // complex component
    SpectralField v;  // real component (real_field set)

    SolutionState(const SpectralField& u_, const SpectralField& v_, double t = 0.0)
        : time(t), u(u_), v(v_) {
        require_same_grid(u, v, "SolutionState");
        if (!v.real_field) throw parameter_error("SolutionState: v must be real-flagged");
    }
};

struct ConservedTriple {
    double mass = 0.0;           // |u|_2^2
    double momentum_like = 0.0;  // Im int u u_x-bar + (alpha/2beta) |v|_2^2
    double energy = 0.0;         // |u_x|^2 + alpha int v|u|^2 - (alpha nu/2beta) |D^{1/2}v|^2
};

// de-aliased physical-space product of two fields
SpectralField product_physical(const SpectralField& a, const SpectralField& b);
// de-aliased |u|^2 as a real-flagged field
SpectralField modulus_squared(const SpectralField& u);

// Right-hand sides of the evolution: du = -i alpha (u v), dv = beta (|u|^2)_x.
std::pair<SpectralField, SpectralField> nonlinear_terms(const SolutionState& state,
                                                        const SystemParams& params);

// One Strang step: half linear flow, explicit-midpoint nonlinear step, half
// linear flow.  Throws divergence_error when amplitudes stop being finite.
SolutionState step_splitstep(const SolutionState& state, const SystemParams& params);

struct TimeSample {
    double t = 0.0;
    ConservedTriple conserved;
    double u_hs = 0.0;
    double v_hs = 0.0;
};

struct RunResult {
    SolutionState final_state;
    std::vector<TimeSample> series;
};

// Integrates to params.horizon, sampling conserved quantities every
// sample_stride steps (and at both endpoints).  s / s_prime feed the norm
// columns of the series.
RunResult run_splitstep(const SolutionState& initial, const SystemParams& params,
                        int sample_stride = 16, double s = 0.0, double s_prime = -0.5);

struct PicardResult {
    SolutionState final_state;
    // max-over-nodes L^2 distance between successive iterates, one entry per
    // completed correction sweep (contraction diagnostics)
    std::vector<double> u_diffs;
    std::vector<double> v_diffs;
};

// Picard iteration on the integral equations, with composite-Simpson
// cumulative quadrature on quad_intervals subintervals of [0, T].  One
// iteration returns the free evolutions exactly.
PicardResult picard_iterate(const SpectralField& phi, const SpectralField& psi,
                            const SystemParams& params, int iterations, int quad_intervals);

ConservedTriple conserved_quantities(const SolutionState& state, const SystemParams& params);

// characteristic magnitudes of the three quantities (sums of the absolute
// values of their constituent terms); natural scales for relative drift
ConservedTriple conserved_scales(const SolutionState& state, const SystemParams& params);

}  // namespace sbo
