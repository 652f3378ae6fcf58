#include <doctest.h>

#include "sbo/fourier.hpp"
#include "sbo/rng.hpp"
#include "sbo/slopes.hpp"
#include "sbo/spacetime.hpp"

using namespace sbo;

namespace {

SpectralField random_field(const Grid1D& g, Rng& rng, int band) {
    SpectralField f(g);
    for (int m = -band; m <= band; ++m) f.at_mode(m) = rng.unit_disk();
    return f;
}

}  // namespace

TEST_CASE("sobolev norm single mode and oracle") {
    Grid1D g(2.0 * kPi, 64);  // integer frequency lattice
    SpectralField f(g);
    f.at_mode(3) = cplx(2.0, 0.0);
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(2.0 * std::sqrt(10.0)).epsilon(1e-13));
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(2.0).epsilon(1e-13));

    // two-mode field against a hand summation
    SpectralField two(g);
    two.at_mode(1) = cplx(1.0, -2.0);
    two.at_mode(-5) = cplx(0.0, 3.0);
    const double s = 0.7;
    const double expect =
        std::sqrt(std::pow(2.0, s) * 5.0 + std::pow(26.0, s) * 9.0);  // (1+k^2)^s |c|^2 terms
    CHECK(sobolev_norm(two, s) == doctest::Approx(expect).epsilon(1e-13));

    Rng rng(2);
    const SpectralField r = random_field(g, rng, 20);
    CHECK(sobolev_norm(r, 0.0) == doctest::Approx(l2_norm(r)).epsilon(1e-12));

    // monotone in s
    CHECK(sobolev_norm(r, 0.25) <= sobolev_norm(r, 1.0));
    CHECK(sobolev_norm(r, -1.0) <= sobolev_norm(r, -0.25));

    // absolute homogeneity
    const cplx scale(0.3, -1.2);
    CHECK(sobolev_norm(scale * r, 0.8) ==
          doctest::Approx(std::abs(scale) * sobolev_norm(r, 0.8)).epsilon(1e-12));
}

TEST_CASE("homogeneous norm") {
    Grid1D g(2.0 * kPi, 64);
    SpectralField f(g);
    f.at_mode(2) = cplx(1.0, 0.0);
    CHECK(homogeneous_norm(f, 0.5).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK_FALSE(homogeneous_norm(f, 0.5).zero_mode_warning);

    Rng rng(4);
    SpectralField r = random_field(g, rng, 12);
    r.amp[0] = cplx(0.0);
    CHECK(homogeneous_norm(r, 0.0).value == doctest::Approx(l2_norm(r)).epsilon(1e-12));

    SpectralField mean_only(g);
    mean_only.amp[0] = cplx(1.0, 0.0);
    const HomogeneousNorm h = homogeneous_norm(mean_only, 1.0);
    CHECK(h.value == 0.0);
    CHECK(h.zero_mode_warning);
}

TEST_CASE("scaling check matches the dilation laws") {
    Grid1D g(2.0 * kPi, 256);
    Rng rng(6);
    SpectralField phi = random_field(g, rng, 8);
    SpectralField psi(g, true);
    for (int m = 1; m <= 8; ++m) {
        const cplx a = rng.unit_disk();
        psi.at_mode(m) = a;
        psi.at_mode(-m) = std::conj(a);
    }

    const ScalingCheck identity = scaling_check(phi, psi, 1, 0.3, -0.7);
    CHECK(identity.measured_u == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(identity.measured_v == doctest::Approx(1.0).epsilon(1e-14));

    for (int lambda : {2, 4}) {
        for (double s : {-0.5, 0.0, 1.0}) {
            for (double sp : {-1.0, -0.5, 0.0}) {
                const ScalingCheck chk = scaling_check(phi, psi, lambda, s, sp);
                CHECK(chk.pass);
                CHECK(std::abs(chk.measured_u - chk.predicted_u) <= 1e-10 * chk.predicted_u);
                CHECK(std::abs(chk.measured_v - chk.predicted_v) <= 1e-10 * chk.predicted_v);
            }
        }
    }

    // single-mode example: lambda = 2, s = 0 gives ratio exactly 2
    SpectralField one(g);
    one.at_mode(3) = cplx(1.0, 0.0);
    const ScalingCheck chk = scaling_check(one, psi, 2, 0.0, -0.5);
    CHECK(chk.measured_u == doctest::Approx(2.0).epsilon(1e-12));

    // lattice-incompatible dilation: band would pass half Nyquist
    SpectralField wide = random_field(g, rng, 40);
    CHECK_THROWS_AS(scaling_check(wide, psi, 4, 0.0, -0.5), parameter_error);
    CHECK_THROWS_AS(rescale_spectral(phi, 0, 1.0), parameter_error);
}

TEST_CASE("bourgain norm: delta node, L2 reduction, oracle") {
    SpaceTimeGrid g = SpaceTimeGrid::cover(-4.0, 4.0, 0.5, -2.0, 2.0, 0.25);
    SpaceTimeField f(g);
    f.at(3, 5) = cplx(1.0, 0.0);
    const double tau0 = g.tau(3), xi0 = g.xi(5);

    SobolevIndex idx;
    idx.s = 0.7;
    idx.b = 0.4;
    idx.tag = EquationTag::schrodinger;
    const double expect =
        bracket_pow(xi0, 0.7) * bracket_pow(tau0 + xi0 * xi0, 0.4) * std::sqrt(g.cell_area());
    CHECK(bourgain_norm(f, idx) == doctest::Approx(expect).epsilon(1e-13));

    SobolevIndex flat;
    flat.s = 0.0;
    flat.b = 0.0;
    flat.tag = EquationTag::schrodinger;
    Rng rng(9);
    SpaceTimeField r(g);
    for (cplx& a : r.amp) a = rng.unit_disk();
    CHECK(bourgain_norm(r, flat) == doctest::Approx(spacetime_l2(r)).epsilon(1e-12));

    // brute-force oracle with the benjamin-ono bracket
    SobolevIndex bo;
    bo.s = -0.5;
    bo.b = 0.55;
    bo.tag = EquationTag::benjamin_ono;
    bo.nu = 0.5;
    double brute = 0.0;
    for (int a = 0; a < g.ntau; ++a)
        for (int b = 0; b < g.nxi; ++b) {
            const double xi = g.xi(b);
            const double w =
                bracket_pow(xi, -0.5) * bracket_pow(g.tau(a) + 0.5 * std::abs(xi) * xi, 0.55);
            brute += w * w * std::norm(r.at(a, b));
        }
    CHECK(bourgain_norm(r, bo) ==
          doctest::Approx(std::sqrt(brute * g.cell_area())).epsilon(1e-12));

    SobolevIndex missing;
    missing.s = 0.0;
    CHECK_THROWS_AS(bourgain_norm(r, missing), parameter_error);

    // absolute homogeneity
    SpaceTimeField scaled = r;
    const cplx factor(1.5, -0.8);
    for (cplx& a : scaled.amp) a *= factor;
    CHECK(bourgain_norm(scaled, bo) ==
          doctest::Approx(std::abs(factor) * bourgain_norm(r, bo)).epsilon(1e-12));
}

namespace {

// windowed free evolution of a single spatial mode: amplitudes concentrated
// on the characteristic tau = -xi^2 with a gaussian profile in tau
SpaceTimeField windowed_free_mode(double xi0, double sigma_tau, double dtau, double dxi,
                                  int half_modes) {
    SpaceTimeGrid g = SpaceTimeGrid::cover(-xi0 * xi0 - 8.0 * sigma_tau,
                                           -xi0 * xi0 + 8.0 * sigma_tau, dtau,
                                           xi0 - half_modes * dxi, xi0 + half_modes * dxi, dxi);
    SpaceTimeField f(g);
    for (int a = 0; a < g.ntau; ++a) {
        for (int b = 0; b < g.nxi; ++b) {
            const double xi = g.xi(b);
            if (std::abs(xi - xi0) > 0.5 * dxi) continue;  // single column
            const double arg = (g.tau(a) + xi * xi) / sigma_tau;
            f.at(a, b) = std::exp(-0.5 * arg * arg);
        }
    }
    return f;
}

}  // namespace

TEST_CASE("embedding spotcheck") {
    CHECK_THROWS_AS(embedding_spotcheck({}, 0.0, 0.5), parameter_error);

    std::vector<SpaceTimeField> samples;
    samples.push_back(windowed_free_mode(1.0, 1.0, 0.125, 0.25, 4));
    samples.push_back(windowed_free_mode(3.0, 2.0, 0.125, 0.25, 4));
    const EmbeddingReport rep = embedding_spotcheck(samples, 0.0, 0.55);
    CHECK(rep.ratios.size() == 2);
    for (double r : rep.ratios) {
        CHECK(std::isfinite(r));
        CHECK(r > 0.0);
    }

    // zero sample is skipped, not divided by
    std::vector<SpaceTimeField> with_zero = samples;
    with_zero.push_back(SpaceTimeField(samples[0].grid));
    const EmbeddingReport rep2 = embedding_spotcheck(with_zero, 0.0, 0.55);
    CHECK(rep2.skipped == 1);
    CHECK(rep2.ratios.size() == 2);

    // refinement study: the ratio trend flattens as the lattice refines
    std::vector<double> levels, ratios;
    for (int level = 0; level < 5; ++level) {
        const double dtau = 0.5 / (1 << level);
        const EmbeddingReport r =
            embedding_spotcheck({windowed_free_mode(1.0, 1.0, dtau, 0.25, 4)}, 0.0, 0.55);
        levels.push_back(1 << level);
        ratios.push_back(r.max_ratio);
    }
    const LineFit fit = fit_loglog(levels, ratios);
    CHECK(std::abs(fit.slope) < 0.1);
}
