#include <doctest.h>

#include "sbo/bilinear.hpp"
#include "sbo/rng.hpp"

using namespace sbo;

TEST_CASE("form weights: pinned values and the origin conventions") {
    BilinearWeights wd;
    wd.kind = FormKind::derivative_product;
    wd.s = 0.0;
    wd.s_prime = 0.0;
    wd.b = 0.5;
    wd.c_prime = 0.5;
    wd.nu = 0.0;

    // the i*xi factor kills xi = 0
    CHECK(std::abs(form_weight(wd, 0.3, 0.0, 0.1, 0.05)) == 0.0);

    // hand value at tau = tau1 = xi1 = 0, xi = 1: sigma = 0, sigma1 = 0,
    // sigma2 = 1, so |W| = 1 / <1>^{1/2} = 2^{-1/4}
    CHECK(std::abs(form_weight(wd, 0.0, 1.0, 0.0, 0.0)) ==
          doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));

    BilinearWeights wm;
    wm.kind = FormKind::mixed_product;
    wm.s = 0.0;
    wm.s_prime = 0.0;
    // all arguments zero: every bracket is 1
    CHECK(std::abs(form_weight(wm, 0.0, 0.0, 0.0, 0.0) - cplx(1.0, 0.0)) < 1e-15);
    // xi1 = 0 goes through the sgn(0) = 1 convention and stays finite
    CHECK(std::isfinite(std::abs(form_weight(wm, 0.4, 1.3, 0.2, 0.0))));
}

TEST_CASE("modulation identities hold at random points") {
    Rng rng(19);
    for (int trial = 0; trial < 10000; ++trial) {
        const double tau = rng.uniform(-50, 50), xi = rng.uniform(-30, 30);
        const double tau1 = rng.uniform(-50, 50), xi1 = rng.uniform(-30, 30);
        const double nu = rng.uniform(-2, 2);
        const double scale = std::abs(tau) + std::abs(tau1) + xi * xi + xi1 * xi1 + 1.0;
        CHECK(std::abs(derivative_relation_residual(tau, xi, tau1, xi1, nu)) < 1e-9 * scale);
        CHECK(std::abs(mixed_relation_residual(tau, xi, tau1, xi1, nu)) < 1e-9 * scale);
    }
}

namespace {

SpaceTimeGrid small_grid(std::int64_t itau0, std::int64_t ixi0, int ntau, int nxi) {
    SpaceTimeGrid g;
    g.dtau = 0.5;
    g.dxi = 0.25;
    g.itau0 = itau0;
    g.ixi0 = ixi0;
    g.ntau = ntau;
    g.nxi = nxi;
    return g;
}

}  // namespace

TEST_CASE("bilinear form: zero, delta, dense brute force") {
    BilinearWeights w;
    w.kind = FormKind::mixed_product;
    w.s = 0.3;
    w.s_prime = -0.4;
    w.b = 0.55;
    w.b_prime = 0.6;
    w.c = 0.65;
    w.nu = 0.5;

    SpaceTimeField f(small_grid(-2, -1, 8, 8));
    SpaceTimeField g(small_grid(1, 2, 8, 8));

    // zero inputs
    CHECK(bilinear_form(f, g, w).l2 == 0.0);

    // single-node deltas: one output node, value = weight * amplitudes * area
    f.at(2, 3) = cplx(0.7, -0.1);
    g.at(4, 1) = cplx(-0.2, 0.5);
    const BilinearFormResult delta = bilinear_form(f, g, w);
    const double tau1 = g.grid.tau(4), xi1 = g.grid.xi(1);
    const double tau = tau1 + f.grid.tau(2), xi = xi1 + f.grid.xi(3);
    const cplx expect =
        form_weight(w, tau, xi, tau1, xi1) * f.at(2, 3) * g.at(4, 1) * f.grid.cell_area();
    int nonzero = 0;
    cplx got;
    for (const cplx& a : delta.out.amp)
        if (a != cplx(0.0)) {
            ++nonzero;
            got = a;
        }
    CHECK(nonzero == 1);
    CHECK(std::abs(got - expect) < 1e-14 * std::abs(expect));

    // dense random fields against an independent brute-force loop
    Rng rng(23);
    for (cplx& a : f.amp) a = rng.unit_disk();
    for (cplx& a : g.amp) a = rng.unit_disk();
    const BilinearFormResult formed = bilinear_form(f, g, w);
    double worst = 0.0;
    for (int a = 0; a < formed.out.grid.ntau; ++a) {
        for (int b = 0; b < formed.out.grid.nxi; ++b) {
            cplx brute(0.0);
            for (int a1 = 0; a1 < g.grid.ntau; ++a1)
                for (int b1 = 0; b1 < g.grid.nxi; ++b1) {
                    const int a2 = a - a1, b2 = b - b1;
                    if (a2 < 0 || a2 >= f.grid.ntau || b2 < 0 || b2 >= f.grid.nxi) continue;
                    const double t1 = g.grid.tau(a1), x1 = g.grid.xi(b1);
                    brute += form_weight(w, t1 + f.grid.tau(a2), x1 + f.grid.xi(b2), t1, x1) *
                             f.at(a2, b2) * g.at(a1, b1) * f.grid.cell_area();
                }
            worst = std::max(worst, std::abs(brute - formed.out.at(a, b)));
        }
    }
    CHECK(worst == 0.0);  // same arithmetic order is not required, but values agree exactly

    // lattice mismatch and node budget
    SpaceTimeField other(SpaceTimeGrid::cover(0.0, 1.0, 0.3, 0.0, 1.0, 0.25));
    CHECK_THROWS_AS(bilinear_form(f, other, w), grid_mismatch_error);
    SpaceTimeField huge(small_grid(0, 0, 256, 256));
    CHECK_THROWS_AS(bilinear_form(huge, g, w), parameter_error);
}

TEST_CASE("box families: inclusion through the modulation identities") {
    for (int n : {8, 32, 128}) {
        const BoxInclusionCheck i42i = box_inclusion_check(BoxCase::T42i, n, 0.5);
        CHECK(i42i.ok);
        CHECK(i42i.sigma_bound < i42i.sigma_cap);
        const BoxInclusionCheck i42ii = box_inclusion_check(BoxCase::T42ii, n, 0.5);
        CHECK(i42ii.ok);
        const BoxInclusionCheck i42iii = box_inclusion_check(BoxCase::T42iii, n, 0.0);
        CHECK(i42iii.ok);
        const BoxInclusionCheck i43 = box_inclusion_check(BoxCase::T43, n, 1.0);
        CHECK(i43.ok);
    }

    // sampled witness: random points of R and B, difference lands in A
    Rng rng(29);
    for (BoxCase c : {BoxCase::T42i, BoxCase::T42ii, BoxCase::T42iii, BoxCase::T43}) {
        const double nu = c == BoxCase::T43 ? 1.0 : (c == BoxCase::T42iii ? 0.0 : 0.5);
        const BoxFamily fam = box_family(c, 16, nu);
        for (int trial = 0; trial < 2000; ++trial) {
            const double xr = fam.r.xi_band.center +
                              fam.r.xi_band.halfwidth * rng.uniform(-1, 1);
            const double tr = fam.r.curve(xr) + fam.r.tau_halfheight * rng.uniform(-1, 1);
            const double xb = fam.b.xi_band.center +
                              fam.b.xi_band.halfwidth * rng.uniform(-1, 1);
            const double tb = fam.b.curve(xb) + fam.b.tau_halfheight * rng.uniform(-1, 1);
            CHECK(fam.a.contains(tr - tb, xr - xb));
        }
    }
}

TEST_CASE("planar convolution lower bound on every box family") {
    for (BoxCase c : {BoxCase::T42i, BoxCase::T42ii, BoxCase::T42iii, BoxCase::T43}) {
        const double nu = c == BoxCase::T43 ? 1.0 : (c == BoxCase::T42iii ? 0.0 : 0.5);
        for (int n : {8, 32}) {
            const BoxConvolutionCheck chk = box_convolution_check(box_family(c, n, nu), 8);
            CHECK(chk.lhs <= chk.rhs * 1.02);
        }
    }
}

TEST_CASE("failure probe: boundary case has flat slope") {
    // at the threshold exponent the predicted growth is zero
    FailureProbeSettings st;
    st.weights.nu = 1.0;
    st.weights.s = 0.0;
    st.weights.s_prime = -0.5;
    st.weights.b = 0.55;
    st.weights.b_prime = 0.55;
    st.weights.c = 0.5;
    const ProbeReport rep = failure_probe(BoxCase::T43, st, {8, 16, 32, 64, 128});
    CHECK(rep.predicted_exponent == doctest::Approx(0.0));
    CHECK(std::abs(rep.fitted_slope) <= 0.1);
}

TEST_CASE("hypothesis bookkeeping") {
    BilinearWeights ok;
    ok.s = 0.0;
    ok.s_prime = -0.5;
    ok.b = 0.55;
    ok.b_prime = 0.55;
    ok.c = 0.6;
    ok.c_prime = 0.6;
    ok.nu = 0.5;
    CHECK(hypothesis_violations(ok).empty());

    BilinearWeights bad = ok;
    bad.s_prime = 0.6;  // violates s' <= 2s - 1/2 and s' < s + 1/2
    const std::vector<std::string> v = hypothesis_violations(bad);
    CHECK(!v.empty());
    bool found = false;
    for (const std::string& msg : v) found = found || msg.find("s' < s + 1/2") != std::string::npos;
    CHECK(found);
}

TEST_CASE("calculus oracle: pinned integrals and range checks") {
    CalculusParams p;
    p.beta = 1.0;
    p.gamma = 1.0;
    p.q = 0.0;
    p.r = 0.0;
    const CalculusResult i = calculus_oracle(CalculusCase::i, p);
    CHECK(i.lhs == doctest::Approx(0.5 * kPi).epsilon(1e-8));
    CHECK(i.rhs == doctest::Approx(1.0));

    CalculusParams p3;
    p3.alpha = 1.0;
    p3.p = 1.0;
    p3.q = 0.0;
    p3.r = 0.0;
    const CalculusResult iii = calculus_oracle(CalculusCase::iii, p3);
    CHECK(iii.lhs == doctest::Approx(3.70814935).epsilon(1e-6));
    CHECK(iii.rhs == doctest::Approx(1.0));

    CalculusParams bad;
    bad.beta = 0.4;
    CHECK_THROWS_AS(calculus_oracle(CalculusCase::i, bad), parameter_error);
    CalculusParams bad3;
    bad3.alpha = 0.5;
    CHECK_THROWS_AS(calculus_oracle(CalculusCase::iii, bad3), parameter_error);
    CalculusParams zero_p;
    zero_p.alpha = 1.0;
    zero_p.p = 0.0;
    CHECK_THROWS_AS(calculus_oracle(CalculusCase::iii, zero_p), parameter_error);
}

TEST_CASE("calculus constants stay bounded across the sweeps") {
    CalculusParams base;
    base.beta = 0.75;
    base.gamma = 0.9;
    const CalculusSweep far = calculus_constant_sweep(CalculusCase::i, base,
                                                      {1.0, 10.0, 100.0, 1000.0});
    CHECK(std::abs(far.trend_slope) < 0.05);

    CalculusParams base2;
    base2.beta = 0.75;
    base2.gamma = 0.75;
    const CalculusSweep far2 = calculus_constant_sweep(CalculusCase::ii, base2,
                                                       {1.0, 10.0, 100.0, 1000.0});
    CHECK(std::abs(far2.trend_slope) < 0.05);

    // the quadratic bound is a small-coefficient statement: no growth as p -> 0
    CalculusParams base3;
    base3.alpha = 1.0;
    const CalculusSweep small_p = calculus_constant_sweep(CalculusCase::iii, base3,
                                                          {1e-3, 1e-2, 1e-1, 1.0});
    CHECK(small_p.trend_slope >= -0.05);
    for (double c : small_p.constants) CHECK(c <= small_p.constants.back() * 1.01);
}
