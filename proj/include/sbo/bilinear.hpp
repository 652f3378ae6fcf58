#pragma once

#include "sbo/gateaux.hpp"
#include "sbo/slopes.hpp"
#include "sbo/spacetime.hpp"

// Discrete (tau, xi)-space evaluation of the two modulation-weighted bilinear
// forms behind the contraction estimates: failure certificates on adversarial
// box families, boundedness sweeps inside the admissible parameter region,
// and quadrature oracles for the underlying calculus inequalities.

namespace sbo {

// Which product the weight belongs to: the derivative product (i xi factor,
// output measured against the Benjamin-Ono modulation bracket) or the mixed
// product (output measured against the Schrodinger bracket).
enum class FormKind { derivative_product, mixed_product };

struct BilinearWeights {
    FormKind kind = FormKind::mixed_product;
    double s = 0.0;
    double s_prime = 0.0;
    double b = 0.55;
    double b_prime = 0.55;
    double c = 0.6;
    double c_prime = 0.6;
    double nu = 0.5;
};

// weight at one lattice node; validates the associated algebraic relation
// between the three modulation variables on every evaluation.
cplx form_weight(const BilinearWeights& w, double tau, double xi, double tau1, double xi1);

// residuals of the modulation identities (exactly zero in exact arithmetic)
double derivative_relation_residual(double tau, double xi, double tau1, double xi1, double nu);
double mixed_relation_residual(double tau, double xi, double tau1, double xi1, double nu);

struct BilinearFormResult {
    SpaceTimeField out;
    double l2 = 0.0;
};

// out(tau, xi) = sum over the support of g of
//   W(tau, xi, tau1, xi1) f(tau - tau1, xi - xi1) g(tau1, xi1) * cell_area.
// All three fields live on one lattice; node budget 2^14 per field.
BilinearFormResult bilinear_form(const SpaceTimeField& f, const SpaceTimeField& g,
                                 const BilinearWeights& w);

// ---------------------------------------------------------------------------
// curved boxes  {|xi - xi0| < w, |tau - curve(xi)| < h}

struct TauCurve {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c_abs = 0.0;
    double operator()(double xi) const {
        return c0 + c1 * xi + c2 * xi * xi + c_abs * std::abs(xi) * xi;
    }
};

struct CurvedBox {
    FreqInterval xi_band;
    double tau_halfheight = 0.0;
    TauCurve curve;

    bool contains(double tau, double xi) const {
        return std::abs(xi - xi_band.center) < xi_band.halfwidth &&
               std::abs(tau - curve(xi)) < tau_halfheight;
    }
    double area() const { return xi_band.width() * 2.0 * tau_halfheight; }
};

enum class BoxCase { T42i, T42ii, T42iii, T43 };
const char* to_string(BoxCase c);
BoxCase box_case_from_string(const std::string& label);

struct BoxFamily {
    CurvedBox a, b, r;
    FormKind kind = FormKind::mixed_product;
};

BoxFamily box_family(BoxCase c, int scale, double nu);

// predicted log-log exponent of the failure ratio for each family
double predicted_failure_exponent(BoxCase c, const BilinearWeights& w);

struct BoxInclusionCheck {
    bool ok = false;
    double xi_slack = 0.0;     // xi-band room left after R - B
    double sigma_bound = 0.0;  // analytic bound on the induced modulation
    double sigma_cap = 0.0;    // box height it must stay below
};

// Verifies R - B inside A through the case's modulation identity (interval
// arithmetic on the identity terms, not sampling).
BoxInclusionCheck box_inclusion_check(BoxCase c, int scale, double nu);

// lattice window that covers a box, with steps (dtau, dxi)
SpaceTimeGrid box_window(const CurvedBox& box, double dtau, double dxi);
// indicator field of a box on a window (exact membership per node)
SpaceTimeField box_indicator(const CurvedBox& box, const SpaceTimeGrid& window);

struct BoxConvolutionCheck {
    double lhs = 0.0;  // sqrt(area R) * area B, closed form
    double rhs = 0.0;  // |1_A * 1_B|_{L^2}, lattice Riemann sum
};

// planar version of the convolution lower bound, evaluated numerically
BoxConvolutionCheck box_convolution_check(const BoxFamily& fam, int points_per_min_dim = 8);

struct FailureProbeSettings {
    BilinearWeights weights;
    int points_per_min_dim = 8;
    double slope_tolerance = 0.15;
};

// ratio(N) = |T(1_B, 1_A)| / (|1_A| |1_B|) over the family's boxes, fitted
// against the predicted exponent (one-sided verdict).
ProbeReport failure_probe(BoxCase c, const FailureProbeSettings& st,
                          const std::vector<int>& scales);

struct SweepSettings {
    BilinearWeights weights;  // kind ignored; both forms run
    int points_per_min_dim = 8;
    int trials = 4;
    std::uint64_t seed = 1;
    double slope_cap = 0.1;
};

struct SweepResult {
    std::vector<ProbeReport> reports;        // one per box family
    std::vector<std::string> hypothesis_violations;
    bool all_bounded = false;
};

// Boundedness consistency sweep: indicator and random data on the adversarial
// families must show no growth trend when the weight parameters satisfy the
// admissibility hypotheses.  Violations are reported and the sweep still runs
// (exploration mode).
SweepResult boundedness_sweep(const SweepSettings& st, const std::vector<int>& scales);

// names the admissibility hypotheses the parameter set violates
std::vector<std::string> hypothesis_violations(const BilinearWeights& w);

// ---------------------------------------------------------------------------
// calculus oracles

enum class CalculusCase { i, ii, iii };

struct CalculusParams {
    double alpha = 1.0;  // exponent in case iii
    double beta = 1.0;   // first bracket exponent, cases i/ii
    double gamma = 1.0;  // second bracket exponent, cases i/ii
    double p = 1.0;      // quadratic coefficient, case iii
    double q = 0.0;
    double r = 0.0;
};

struct CalculusResult {
    double lhs = 0.0;      // integral, adaptive quadrature + tail bound
    double rhs = 0.0;      // closed-form majorant
    double constant = 0.0; // lhs / rhs
};

CalculusResult calculus_oracle(CalculusCase which, const CalculusParams& params);

struct CalculusSweep {
    std::vector<double> abscissae;  // |q - r| or |p|
    std::vector<double> constants;
    double trend_slope = 0.0;  // log-log slope of constants vs abscissae
};

// sweeps |q - r| (cases i/ii) or |p| (case iii) and fits the trend of the
// fitted constants; a bounded constant shows no growth trend
CalculusSweep calculus_constant_sweep(CalculusCase which, CalculusParams base,
                                      const std::vector<double>& sweep_values);

}  // namespace sbo
