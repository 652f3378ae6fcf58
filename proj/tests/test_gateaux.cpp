#include <doctest.h>

#include "sbo/gateaux.hpp"
#include "sbo/rng.hpp"

using namespace sbo;

TEST_CASE("interaction kernels: pinned values") {
    // all arguments zero: brackets are 1, phase is 1
    CHECK(std::abs(interaction_kernel_u(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.5) - cplx(2.0, 0.0)) <
          1e-15);

    // phase exponent at (xi, xi1) = (k + m, m)
    const double k = 2.0, m = 3.0, nu = 0.5, tp = 0.37;
    const double omega = (k + m) * (k + m) - k * k - nu * std::abs(m) * m;
    const cplx val = interaction_kernel_u(tp, k + m, m, 0.0, 0.0, 1.0, nu);
    CHECK(std::arg(val) == doctest::Approx(std::remainder(tp * omega, 2.0 * kPi)).epsilon(1e-12));

    // unimodular phase: |K(t')| = |K(0)|
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const double xi = rng.uniform(-20, 20), xi1 = rng.uniform(-20, 20);
        const double s = rng.uniform(-1, 1), sp = rng.uniform(-1, 1);
        const double t1 = rng.uniform(-2, 2);
        CHECK(std::abs(interaction_kernel_u(t1, xi, xi1, s, sp, 1.2, nu)) ==
              doctest::Approx(std::abs(interaction_kernel_u(0.0, xi, xi1, s, sp, 1.2, nu)))
                  .epsilon(1e-12));
        CHECK(std::abs(interaction_kernel_v(t1, xi, xi1, s, sp, 0.8, nu)) ==
              doctest::Approx(std::abs(interaction_kernel_v(0.0, xi, xi1, s, sp, 0.8, nu)))
                  .epsilon(1e-12));
    }

    // the derivative factor kills xi = 0
    CHECK(std::abs(interaction_kernel_v(0.5, 0.0, 3.0, 0.3, -0.5, 1.0, 0.5)) == 0.0);
    // hand value at xi = 1, xi1 = 0, s = s' = 0
    CHECK(std::abs(interaction_kernel_v(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.5) - cplx(2.0, 0.0)) <
          1e-15);
}

TEST_CASE("duhamel phase integral: closed form vs simpson, resonant limit") {
    CHECK(std::abs(duhamel_phase_integral(0.0, 0.7) - cplx(0.7, 0.0)) < 1e-15);

    // |2 alpha| t at resonance comes from the prefactor elsewhere; here the
    // integral itself is t exactly
    Rng rng(41);
    for (double omega_t : {0.0, 1e-12, 1e-6, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
        const double t = 0.8;
        const double omega = omega_t / t;
        const cplx closed = duhamel_phase_integral(omega, t);
        const cplx quad = duhamel_phase_integral_simpson(omega, t, 1 << 17);
        CHECK(std::abs(closed - quad) / t < 1e-10);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const double t = rng.uniform(0.1, 2.0);
        const double omega = rng.uniform(-1000.0, 1000.0) / t;
        CHECK(std::abs(duhamel_phase_integral(omega, t) -
                       duhamel_phase_integral_simpson(omega, t, 1 << 17)) /
                  t <
              1e-10);
    }
}

namespace {

LineSpectrum single_node(double dxi, std::int64_t index, cplx amp) {
    LineSpectrum s;
    s.dxi = dxi;
    s.i0 = index;
    s.amp = {amp};
    return s;
}

}  // namespace

TEST_CASE("second derivative of u: single pair oracle and bilinearity") {
    const double dxi = 0.5, t = 0.9, alpha = 1.1, nu = 0.5;
    // phi concentrated at xi2 = k, psi at xi1 = m
    const double k_idx = 6, m_idx = 4;
    const double k = k_idx * dxi, m = m_idx * dxi;
    const LineSpectrum phi = single_node(dxi, static_cast<std::int64_t>(k_idx), cplx(1.0, 0.0));
    const LineSpectrum psi = single_node(dxi, static_cast<std::int64_t>(m_idx), cplx(1.0, 0.0));
    const LineSpectrum out = flow_second_derivative_u(phi, psi, t, alpha, nu, dxi);
    REQUIRE(out.size() == 1);
    CHECK(out.xi(0) == doctest::Approx(k + m));

    const double omega = (k + m) * (k + m) - k * k - nu * std::abs(m) * m;
    const double expect = 2.0 * alpha * dxi * std::abs(t * std::sin(0.5 * omega * t) /
                                                       (0.5 * omega * t));
    CHECK(std::abs(out.amp[0]) == doctest::Approx(std::abs(expect)).epsilon(1e-12));

    // resonant pair: nu chosen so omega = 0, magnitude |2 alpha| t dxi exactly
    const double nu_res = ((k + m) * (k + m) - k * k) / (std::abs(m) * m);
    const LineSpectrum res = flow_second_derivative_u(phi, psi, t, alpha, nu_res, dxi);
    CHECK(std::abs(res.amp[0]) == doctest::Approx(2.0 * alpha * t * dxi).epsilon(1e-13));

    // bilinearity
    const LineSpectrum phi_scaled = single_node(dxi, static_cast<std::int64_t>(k_idx), cplx(0.0, 2.0));
    const LineSpectrum psi_scaled = single_node(dxi, static_cast<std::int64_t>(m_idx), cplx(-1.5, 0.5));
    const LineSpectrum scaled = flow_second_derivative_u(phi_scaled, psi_scaled, t, alpha, nu, dxi);
    const cplx factor = cplx(0.0, 2.0) * cplx(-1.5, 0.5);
    CHECK(std::abs(scaled.amp[0] - factor * out.amp[0]) < 1e-12 * std::abs(scaled.amp[0]));

    // zero inputs give zero output
    const LineSpectrum zero = single_node(dxi, 0, cplx(0.0));
    CHECK(std::abs(flow_second_derivative_u(zero, psi, t, alpha, nu, dxi).amp[0]) == 0.0);
}

TEST_CASE("second derivative of v: single mode dies, two modes hit the difference") {
    Grid1D g(2.0 * kPi, 64);
    SpectralField phi(g);
    phi.at_mode(3) = cplx(0.8, 0.2);
    const SpectralField out = flow_second_derivative_v(phi, 0.7, 1.0, 0.5);
    // single carrier: |u|^2 is constant, the derivative kills it
    CHECK(max_abs(out) < 1e-14);

    SpectralField two(g);
    two.at_mode(3) = cplx(1.0, 0.0);
    two.at_mode(5) = cplx(1.0, 0.0);
    const double t = 0.7, beta = 1.2, nu = 0.5;
    const SpectralField d2 = flow_second_derivative_v(two, t, beta, nu);
    CHECK(d2.real_field);
    CHECK(conjugate_symmetry_defect(d2) < 1e-12);
    // output only at xi = +-(5-3) = +-2 (and 0, killed by the derivative)
    for (int m = -31; m < 32; ++m) {
        if (m == 2 || m == -2) continue;
        CHECK(std::abs(d2.at_mode(m)) < 1e-14);
    }
    // brute-force pair oracle at xi = 2: pairs (xi2, xi1) = (5, -3) and (3, -5)
    const double k2 = g.k_of_mode(2);
    auto term = [&](double xi2, double xi1) {
        const double omega = nu * std::abs(k2) * k2 - xi2 * xi2 + xi1 * xi1;
        return duhamel_phase_integral(omega, t);
    };
    const cplx brute = cplx(0.0, 2.0 * beta * k2) *
                       std::exp(cplx(0.0, -t * nu * std::abs(k2) * k2)) *
                       (term(g.k_of_mode(5), -g.k_of_mode(3)) +
                        term(g.k_of_mode(3), -g.k_of_mode(5)));
    CHECK(std::abs(d2.at_mode(2) - brute) < 1e-12 * std::abs(brute));
}

TEST_CASE("packet geometry: centers, widths, admissibility, inclusion") {
    // resonant family, sgn(nu) = +1: A centered at N with halfwidth 1/(2<t>N)
    PacketSpec spec{PacketCase::T13_a, 8, 1.0, 1.0};
    const PacketGeometry geo = packet_geometry(spec);
    CHECK(geo.a.center == doctest::Approx(8.0));
    CHECK(geo.a.halfwidth == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0) * 8.0)).epsilon(1e-14));
    CHECK(geo.kind == ResponseKind::u_pair);
    CHECK(geo.inclusion_ok);

    // sgn(0) = +1 convention: at nu = 0 the low branch centers A at -N
    PacketSpec zero_nu{PacketCase::T12i_low, 16, 1.0, 0.0};
    const PacketGeometry geo0 = packet_geometry(zero_nu);
    CHECK(geo0.a.center == doctest::Approx(-16.0));
    CHECK(geo0.inclusion_ok);

    for (PacketCase c : {PacketCase::T12i_low, PacketCase::T12i_high, PacketCase::T12ii_low,
                         PacketCase::T12ii_high}) {
        for (int n : {8, 16, 32, 64}) {
            const PacketGeometry g = packet_geometry({c, n, 1.0, 0.5});
            CHECK(g.inclusion_ok);
        }
    }
    for (PacketCase c : {PacketCase::T13_a, PacketCase::T13_b, PacketCase::T13_c}) {
        for (int n : {8, 16, 32, 64}) {
            const PacketGeometry g = packet_geometry({c, n, 1.0, 1.0});
            CHECK(g.inclusion_ok);
        }
        for (int n : {8, 16, 32, 64}) {
            const PacketGeometry g = packet_geometry({c, n, 1.0, -1.0});
            CHECK(g.inclusion_ok);
        }
    }

    // admissibility floor
    CHECK_THROWS_AS(packet_geometry({PacketCase::T12i_high, 2, 1.0, 0.5}), parameter_error);

    // the fixed-time family pins the probe time to 1/(6(1+|nu|)N^2)
    const PacketGeometry tn = packet_geometry({PacketCase::T12ii_low, 8, 1.0, 0.5});
    CHECK(tn.probe_time == doctest::Approx(1.0 / (6.0 * 1.5 * 64.0)).epsilon(1e-14));
}

TEST_CASE("build packets: indicators and resolution error") {
    PacketSpec spec{PacketCase::T13_a, 8, 1.0, 1.0};
    const double dxi = recommended_spacing(spec, 16);
    const Packets p = build_packets(spec, dxi);
    CHECK(p.modes_f >= 16);
    CHECK(p.modes_g >= 16);
    // indicators are 0/1 on the window
    for (const cplx& a : p.f.amp) CHECK((a == cplx(0.0) || a == cplx(1.0)));

    CHECK_THROWS_AS(build_packets(spec, 100.0 * dxi), resolution_error);
}

TEST_CASE("convolution lower bound: example, degenerate, property") {
    const FreqInterval a{0.0, 1.0}, b{0.0, 0.25}, r{0.0, 0.5};
    const ConvolutionBoundCheck chk = convolution_lower_bound_check(a, b, r);
    CHECK(chk.lhs == doctest::Approx(0.5).epsilon(1e-14));
    // exact piecewise-linear convolution norm: sqrt(2 m^3/3 + |wa-wb| m^2)
    CHECK(chk.rhs == doctest::Approx(std::sqrt(11.0 / 24.0)).epsilon(1e-14));
    CHECK(chk.holds);

    // empty B
    const ConvolutionBoundCheck empty = convolution_lower_bound_check(a, {0.0, 0.0}, {0.0, 0.5});
    CHECK(empty.lhs == 0.0);
    CHECK(empty.holds);

    // inclusion violation is a precondition error
    CHECK_THROWS_AS(convolution_lower_bound_check({0.0, 0.1}, b, r), parameter_error);

    // near-degenerate: R = A, B width -> 0 approaches equality
    const double tiny = 1e-8;
    const ConvolutionBoundCheck deg =
        convolution_lower_bound_check({0.0, 1.0 + tiny}, {0.0, tiny / 2}, {0.0, 1.0});
    CHECK(deg.holds);
    CHECK(deg.lhs / deg.rhs > 0.999);

    // property: 1000 random admissible triples
    Rng rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        FreqInterval bb{rng.uniform(-10, 10), rng.uniform(0.01, 2.0)};
        FreqInterval rr{rng.uniform(-10, 10), rng.uniform(0.01, 2.0)};
        FreqInterval aa{rr.center - bb.center,
                        rr.halfwidth + bb.halfwidth + rng.uniform(0.0, 3.0)};
        const ConvolutionBoundCheck c = convolution_lower_bound_check(aa, bb, rr);
        CHECK(c.holds);
    }
}

TEST_CASE("slope fitter sanity: synthetic power law") {
    std::vector<ProbePoint> points;
    for (int n : {8, 16, 32, 64, 128}) {
        ProbePoint p;
        p.n = n;
        p.ratio = 3.0 * n * n;
        points.push_back(p);
    }
    const ProbeReport rep = finish_report("synthetic", points, 2.0, 0.15);
    CHECK(rep.fitted_slope == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.pass);

    CHECK_THROWS_AS(finish_report("too-few", {points.begin(), points.begin() + 3}, 1.0, 0.15),
                    parameter_error);
}

TEST_CASE("growth probe: quick slopes on small scales") {
    const std::vector<int> scales{8, 16, 32, 64, 128};

    GrowthProbeSettings st;
    st.nu = 1.0;
    st.s = 0.0;
    st.s_prime = -1.0;
    const ProbeReport t13a = run_growth_probe(PacketCase::T13_a, st, scales);
    CHECK(t13a.predicted_exponent == doctest::Approx(0.5));
    CHECK(t13a.fitted_slope >= 0.35);

    GrowthProbeSettings low;
    low.nu = 0.5;
    low.s = 0.0;
    low.s_prime = -1.0;
    const ProbeReport t12 = run_growth_probe(PacketCase::T12i_low, low, scales);
    CHECK(t12.predicted_exponent == doctest::Approx(0.5));
    CHECK(t12.pass);
}

TEST_CASE("well-posed regime shows no packet growth") {
    // strictly inside the admissible region at |nu| != 1 the resonant-family
    // packets decay (the phase no longer cancels)
    GrowthProbeSettings st;
    st.nu = 0.5;
    st.s = 0.5;
    st.s_prime = 0.0;
    const std::vector<int> scales{8, 16, 32, 64, 128};
    for (PacketCase c : {PacketCase::T13_a, PacketCase::T13_b, PacketCase::T13_c}) {
        const ProbeReport rep = run_growth_probe(c, st, scales);
        CHECK(rep.fitted_slope <= 0.1);
    }
}
