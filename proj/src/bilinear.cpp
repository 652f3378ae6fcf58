#include "sbo/bilinear.hpp"

#include <functional>

#include "sbo/rng.hpp"

namespace sbo {

namespace {

constexpr std::size_t kNodeBudget = std::size_t(1) << 14;

void check_budget(const SpaceTimeGrid& g, const char* what) {
    if (g.node_count() > kNodeBudget)
        throw parameter_error(std::string(what) + ": window of " +
                              std::to_string(g.node_count()) + " nodes exceeds the 2^14 budget");
}

struct ModulationTriple {
    double sigma, sigma1, sigma2;
};

ModulationTriple derivative_sigmas(double tau, double xi, double tau1, double xi1, double nu) {
    const double tau2 = tau - tau1;
    const double xi2 = xi - xi1;
    return {tau + nu * std::abs(xi) * xi, tau1 - xi1 * xi1, tau2 + xi2 * xi2};
}

ModulationTriple mixed_sigmas(double tau, double xi, double tau1, double xi1, double nu) {
    const double tau2 = tau - tau1;
    const double xi2 = xi - xi1;
    return {tau + xi * xi, tau1 + nu * std::abs(xi1) * xi1, tau2 + xi2 * xi2};
}

void check_relation(double residual, double scale, const char* what) {
    if (std::abs(residual) > 1e-9 * std::max(1.0, scale))
        throw error(std::string(what) + ": modulation identity violated (residual " +
                    std::to_string(residual) + ")");
}

}  // namespace

double derivative_relation_residual(double tau, double xi, double tau1, double xi1, double nu) {
    const ModulationTriple m = derivative_sigmas(tau, xi, tau1, xi1, nu);
    return (m.sigma - m.sigma1 - m.sigma2) -
           (2.0 * xi * xi1 - (1.0 - nu * sgn_one(xi)) * xi * xi);
}

double mixed_relation_residual(double tau, double xi, double tau1, double xi1, double nu) {
    const ModulationTriple m = mixed_sigmas(tau, xi, tau1, xi1, nu);
    return (m.sigma - m.sigma1 - m.sigma2) -
           (2.0 * xi * xi1 - (1.0 + nu * sgn_one(xi1)) * xi1 * xi1);
}

cplx form_weight(const BilinearWeights& w, double tau, double xi, double tau1, double xi1) {
    const double xi2 = xi - xi1;
    if (w.kind == FormKind::derivative_product) {
        const ModulationTriple m = derivative_sigmas(tau, xi, tau1, xi1, w.nu);
        check_relation(derivative_relation_residual(tau, xi, tau1, xi1, w.nu),
                       std::abs(m.sigma) + std::abs(m.sigma1) + std::abs(m.sigma2),
                       "derivative form weight");
        const double mag = bracket_pow(xi, w.s_prime) * bracket_pow(m.sigma, w.c_prime - 1.0) /
                           (bracket_pow(xi2, w.s) * bracket_pow(m.sigma2, w.b) *
                            bracket_pow(xi1, w.s) * bracket_pow(m.sigma1, w.b));
        return cplx(0.0, xi) * mag;
    }
    const ModulationTriple m = mixed_sigmas(tau, xi, tau1, xi1, w.nu);
    check_relation(mixed_relation_residual(tau, xi, tau1, xi1, w.nu),
                   std::abs(m.sigma) + std::abs(m.sigma1) + std::abs(m.sigma2),
                   "mixed form weight");
    const double mag = bracket_pow(xi, w.s) * bracket_pow(m.sigma, w.c - 1.0) /
                       (bracket_pow(xi2, w.s) * bracket_pow(m.sigma2, w.b) *
                        bracket_pow(xi1, w.s_prime) * bracket_pow(m.sigma1, w.b_prime));
    return cplx(mag, 0.0);
}

BilinearFormResult bilinear_form(const SpaceTimeField& f, const SpaceTimeField& g,
                                 const BilinearWeights& w) {
    if (!f.grid.same_lattice(g.grid))
        throw grid_mismatch_error("bilinear_form: fields on different lattices");
    check_budget(f.grid, "bilinear_form(f)");
    check_budget(g.grid, "bilinear_form(g)");

    SpaceTimeGrid og;
    og.dtau = f.grid.dtau;
    og.dxi = f.grid.dxi;
    og.itau0 = f.grid.itau0 + g.grid.itau0;
    og.ixi0 = f.grid.ixi0 + g.grid.ixi0;
    og.ntau = f.grid.ntau + g.grid.ntau - 1;
    og.nxi = f.grid.nxi + g.grid.nxi - 1;
    check_budget(og, "bilinear_form(out)");

    BilinearFormResult result{SpaceTimeField(og), 0.0};
    const double area = f.grid.cell_area();
    for (int a1 = 0; a1 < g.grid.ntau; ++a1) {
        for (int b1 = 0; b1 < g.grid.nxi; ++b1) {
            const cplx gv = g.at(a1, b1);
            if (gv == cplx(0.0)) continue;
            const double tau1 = g.grid.tau(a1);
            const double xi1 = g.grid.xi(b1);
            for (int a2 = 0; a2 < f.grid.ntau; ++a2) {
                for (int b2 = 0; b2 < f.grid.nxi; ++b2) {
                    const cplx fv = f.at(a2, b2);
                    if (fv == cplx(0.0)) continue;
                    const double tau = tau1 + f.grid.tau(a2);
                    const double xi = xi1 + f.grid.xi(b2);
                    result.out.at(a1 + a2, b1 + b2) +=
                        form_weight(w, tau, xi, tau1, xi1) * fv * gv * area;
                }
            }
        }
    }
    result.l2 = spacetime_l2(result.out);
    return result;
}

// ---------------------------------------------------------------------------
// box families

const char* to_string(BoxCase c) {
    switch (c) {
        case BoxCase::T42i: return "T42i";
        case BoxCase::T42ii: return "T42ii";
        case BoxCase::T42iii: return "T42iii";
        case BoxCase::T43: return "T43";
    }
    return "?";
}

BoxCase box_case_from_string(const std::string& label) {
    for (BoxCase c : {BoxCase::T42i, BoxCase::T42ii, BoxCase::T42iii, BoxCase::T43}) {
        if (label == to_string(c)) return c;
    }
    throw config_error("unknown box case label: " + label);
}

BoxFamily box_family(BoxCase c, int scale, double nu) {
    if (scale < 2) throw parameter_error("box_family: scale must be >= 2");
    const double n = static_cast<double>(scale);
    const double sg = sgn_one(nu);
    const double an = std::abs(nu);
    BoxFamily fam;
    switch (c) {
        case BoxCase::T42i:
            fam.kind = FormKind::derivative_product;
            fam.a = {{n, 1.0 / n}, 6.0, {0.0, 0.0, 1.0, 0.0}};            // sigma1 = tau - xi^2
            fam.b = {{0.0, 1.0 / (2.0 * n)}, 1.0, {0.0, 0.0, -1.0, 0.0}};  // sigma2 = tau + xi^2
            fam.r = {{n, 1.0 / (2.0 * n)}, 1.0, {0.0, 2.0 * n, -1.0, 0.0}};
            break;
        case BoxCase::T42ii:
            fam.kind = FormKind::mixed_product;
            fam.a = {{sg * n, 1.0 / n}, 7.0 * (1.0 + an), {0.0, 0.0, 0.0, -nu}};
            fam.b = {{0.0, 1.0 / (2.0 * n)}, 1.0, {0.0, 0.0, -1.0, 0.0}};
            fam.r = {{sg * n, 1.0 / (2.0 * n)}, 1.0, {0.0, -(an - 1.0) * sg * n, -1.0, 0.0}};
            break;
        case BoxCase::T42iii:
            fam.kind = FormKind::mixed_product;
            fam.a = {{n, 1.0}, 3.0, {0.0, 0.0, 0.0, -nu}};
            fam.b = {{0.0, 0.5}, 1.0, {0.0, 0.0, -1.0, 0.0}};
            fam.r = {{n, 0.5}, 1.0, {0.0, 0.0, 0.0, 0.0}};
            break;
        case BoxCase::T43:
            fam.kind = FormKind::mixed_product;
            fam.a = {{-sg * n, 0.5}, 1.0, {0.0, 0.0, 0.0, -nu}};
            fam.b = {{sg * n, 0.25}, 1.0 / 3.0, {0.0, 0.0, -1.0, 0.0}};
            fam.r = {{0.0, 0.25}, 1.0 / 3.0, {0.0, -2.0 * sg * n, -1.0, 0.0}};
            break;
    }
    return fam;
}

double predicted_failure_exponent(BoxCase c, const BilinearWeights& w) {
    switch (c) {
        case BoxCase::T42i: return w.s_prime - w.s + 2.0 * w.c_prime - 1.5;
        case BoxCase::T42ii: return w.s - w.s_prime + 2.0 * w.c - 2.5;
        case BoxCase::T42iii: return w.s - w.s_prime + 2.0 * w.c - 2.0;
        case BoxCase::T43: return w.c - 0.5;
    }
    return 0.0;
}

BoxInclusionCheck box_inclusion_check(BoxCase c, int scale, double nu) {
    const BoxFamily fam = box_family(c, scale, nu);
    BoxInclusionCheck chk;
    chk.xi_slack = fam.a.xi_band.halfwidth -
                   (fam.r.xi_band.halfwidth + fam.b.xi_band.halfwidth) -
                   std::abs((fam.r.xi_band.center - fam.b.xi_band.center) - fam.a.xi_band.center);
    chk.sigma_cap = fam.a.tau_halfheight;

    const double n = static_cast<double>(scale);
    const double an = std::abs(nu);
    const double hr = fam.r.tau_halfheight;
    const double hb = fam.b.tau_halfheight;
    const double xi_max = std::abs(fam.r.xi_band.center) + fam.r.xi_band.halfwidth;
    const double xi2_max = std::abs(fam.b.xi_band.center) + fam.b.xi_band.halfwidth;
    const double xi1_dev = fam.r.xi_band.halfwidth + fam.b.xi_band.halfwidth;

    switch (c) {
        case BoxCase::T42i:
            // sigma1 = [tau + xi^2 - 2 xi N] + 2 xi (N - xi1) - sigma2
            chk.sigma_bound = hr + 2.0 * xi_max * xi1_dev + hb;
            break;
        case BoxCase::T42ii: {
            // sigma1 = [tau + xi^2 + (|nu|-1) sgn(nu) N xi]
            //          + (1+|nu|) xi1 (xi1 - xi) + (|nu|-1)(xi1 - sgn(nu) N) xi - sigma2
            const double xi1_max = std::abs(fam.a.xi_band.center) + fam.a.xi_band.halfwidth;
            chk.sigma_bound = hr + (1.0 + an) * xi1_max * xi2_max +
                              std::abs(an - 1.0) * xi1_dev * xi_max + hb;
            break;
        }
        case BoxCase::T42iii:
            // sigma1 = tau - tau2 = tau - sigma2 + xi2^2 (nu = 0)
            chk.sigma_bound = hr + hb + xi2_max * xi2_max;
            break;
        case BoxCase::T43:
            // sigma1 = [sigma + 2 sgn(nu) N xi] - sigma2 - 2 xi^2 + 2 xi (xi2 - sgn(nu) N)
            chk.sigma_bound = hr + hb + 2.0 * xi_max * xi_max + 2.0 * xi_max * xi1_dev;
            break;
    }
    chk.ok = chk.xi_slack >= -1e-9 * (1.0 + n) && chk.sigma_bound < chk.sigma_cap;
    return chk;
}

SpaceTimeGrid box_window(const CurvedBox& box, double dtau, double dxi) {
    const int scan = 1024;
    double lo = box.curve(box.xi_band.lo());
    double hi = lo;
    for (int i = 0; i <= scan; ++i) {
        const double xi = box.xi_band.lo() + box.xi_band.width() * i / scan;
        const double v = box.curve(xi);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // curvature pad for scan gaps
    const double step = box.xi_band.width() / scan;
    const double pad = (std::abs(box.curve.c2) + std::abs(box.curve.c_abs)) * step * step + dtau;
    return SpaceTimeGrid::cover(lo - box.tau_halfheight - pad, hi + box.tau_halfheight + pad,
                                dtau, box.xi_band.lo(), box.xi_band.hi(), dxi);
}

SpaceTimeField box_indicator(const CurvedBox& box, const SpaceTimeGrid& window) {
    SpaceTimeField f(window);
    for (int a = 0; a < window.ntau; ++a) {
        const double tau = window.tau(a);
        for (int b = 0; b < window.nxi; ++b) {
            if (box.contains(tau, window.xi(b))) f.at(a, b) = cplx(1.0, 0.0);
        }
    }
    return f;
}

namespace {

struct FamilyGrids {
    SpaceTimeField fa;  // indicator of A
    SpaceTimeField fb;  // indicator of B
    double dtau, dxi;
};

FamilyGrids family_indicators(const BoxFamily& fam, int points_per_min_dim) {
    const double min_h = std::min({fam.a.tau_halfheight, fam.b.tau_halfheight,
                                   fam.r.tau_halfheight});
    const double min_w = std::min({fam.a.xi_band.halfwidth, fam.b.xi_band.halfwidth,
                                   fam.r.xi_band.halfwidth});
    const double dtau = 2.0 * min_h / points_per_min_dim;
    const double dxi = 2.0 * min_w / points_per_min_dim;
    SpaceTimeGrid wa = box_window(fam.a, dtau, dxi);
    SpaceTimeGrid wb = box_window(fam.b, dtau, dxi);
    return {box_indicator(fam.a, wa), box_indicator(fam.b, wb), dtau, dxi};
}

}  // namespace

BoxConvolutionCheck box_convolution_check(const BoxFamily& fam, int points_per_min_dim) {
    const FamilyGrids grids = family_indicators(fam, points_per_min_dim);
    BoxConvolutionCheck chk;
    chk.lhs = std::sqrt(fam.r.area()) * fam.b.area();

    const SpaceTimeGrid& ga = grids.fa.grid;
    const SpaceTimeGrid& gb = grids.fb.grid;
    SpaceTimeGrid og;
    og.dtau = ga.dtau;
    og.dxi = ga.dxi;
    og.itau0 = ga.itau0 + gb.itau0;
    og.ixi0 = ga.ixi0 + gb.ixi0;
    og.ntau = ga.ntau + gb.ntau - 1;
    og.nxi = ga.nxi + gb.nxi - 1;
    SpaceTimeField conv(og);
    for (int a1 = 0; a1 < ga.ntau; ++a1)
        for (int b1 = 0; b1 < ga.nxi; ++b1) {
            if (grids.fa.at(a1, b1) == cplx(0.0)) continue;
            for (int a2 = 0; a2 < gb.ntau; ++a2)
                for (int b2 = 0; b2 < gb.nxi; ++b2) {
                    if (grids.fb.at(a2, b2) == cplx(0.0)) continue;
                    conv.at(a1 + a2, b1 + b2) += ga.cell_area();
                }
        }
    chk.rhs = spacetime_l2(conv);
    return chk;
}

ProbeReport failure_probe(BoxCase c, const FailureProbeSettings& st,
                          const std::vector<int>& scales) {
    BilinearWeights w = st.weights;
    w.kind = box_family(c, scales.empty() ? 8 : scales.front(), w.nu).kind;
    std::vector<ProbePoint> points;
    for (int n : scales) {
        const BoxFamily fam = box_family(c, n, w.nu);
        const FamilyGrids grids = family_indicators(fam, st.points_per_min_dim);
        const BilinearFormResult formed = bilinear_form(grids.fb, grids.fa, w);
        ProbePoint pt;
        pt.n = static_cast<double>(n);
        pt.lhs = formed.l2;
        pt.rhs = spacetime_l2(grids.fa) * spacetime_l2(grids.fb);
        if (pt.rhs == 0.0) throw resolution_error("failure_probe: empty box rasterization");
        pt.ratio = pt.lhs / pt.rhs;
        points.push_back(pt);
    }
    return finish_report(to_string(c), std::move(points), predicted_failure_exponent(c, w),
                         st.slope_tolerance);
}

std::vector<std::string> hypothesis_violations(const BilinearWeights& w) {
    std::vector<std::string> v;
    const double ds = w.s_prime - w.s;
    if (!(w.s >= 0.0)) v.push_back("s >= 0");
    if (!(w.s_prime <= 2.0 * w.s - 0.5)) v.push_back("s' <= 2s - 1/2");
    if (!(w.s_prime < w.s + 0.5)) v.push_back("s' < s + 1/2");
    if (!(w.b > std::max(0.5, 0.5 * ds + 0.5))) v.push_back("b > max(1/2, (s'-s)/2 + 1/2)");
    if (!(w.c_prime > 0.5 && w.c_prime < std::min(0.75 - 0.5 * ds, 0.75)))
        v.push_back("1/2 < c' < min(3/4 - (s'-s)/2, 3/4)");
    if (!(w.s_prime >= -0.5)) v.push_back("s' >= -1/2");
    if (!(w.s_prime > w.s - 1.0)) v.push_back("s' > s - 1");
    if (!(w.b_prime > 0.5)) v.push_back("b' > 1/2");
    if (!(w.c > 0.5 && w.c < std::min(0.75, 0.5 * ds + 1.0)))
        v.push_back("1/2 < c < min(3/4, (s'-s)/2 + 1)");
    return v;
}

SweepResult boundedness_sweep(const SweepSettings& st, const std::vector<int>& scales) {
    SweepResult result;
    result.hypothesis_violations = hypothesis_violations(st.weights);

    int family_index = 0;
    for (BoxCase c : {BoxCase::T42i, BoxCase::T42ii, BoxCase::T42iii, BoxCase::T43}) {
        BilinearWeights w = st.weights;
        w.kind = box_family(c, scales.empty() ? 8 : scales.front(), w.nu).kind;
        std::vector<ProbePoint> points;
        for (std::size_t si = 0; si < scales.size(); ++si) {
            const int n = scales[si];
            const BoxFamily fam = box_family(c, n, w.nu);
            const FamilyGrids grids = family_indicators(fam, st.points_per_min_dim);
            double best = 0.0, lhs_at_best = 0.0, rhs_at_best = 1.0;
            // indicator data first, then seeded random amplitudes on the boxes
            for (int trial = 0; trial <= st.trials; ++trial) {
                SpaceTimeField fa = grids.fa;
                SpaceTimeField fb = grids.fb;
                if (trial > 0) {
                    Rng rng(Rng::derive(st.seed, (static_cast<std::uint64_t>(family_index) << 24) ^
                                                     (static_cast<std::uint64_t>(si) << 12) ^
                                                     static_cast<std::uint64_t>(trial)));
                    for (cplx& a : fa.amp)
                        if (a != cplx(0.0)) a = rng.unit_disk();
                    for (cplx& a : fb.amp)
                        if (a != cplx(0.0)) a = rng.unit_disk();
                }
                const double denom = spacetime_l2(fa) * spacetime_l2(fb);
                if (denom == 0.0) continue;
                const double lhs = bilinear_form(fb, fa, w).l2;
                if (lhs / denom > best) {
                    best = lhs / denom;
                    lhs_at_best = lhs;
                    rhs_at_best = denom;
                }
            }
            ProbePoint pt;
            pt.n = static_cast<double>(n);
            pt.ratio = best;
            pt.lhs = lhs_at_best;
            pt.rhs = rhs_at_best;
            points.push_back(pt);
        }
        ProbeReport rep = finish_report(to_string(c), std::move(points), 0.0, 0.0);
        rep.predicted_exponent = 0.0;
        rep.pass = rep.fitted_slope <= st.slope_cap;
        result.reports.push_back(std::move(rep));
        ++family_index;
    }
    result.all_bounded = true;
    for (const ProbeReport& r : result.reports) result.all_bounded = result.all_bounded && r.pass;
    return result;
}

// ---------------------------------------------------------------------------
// calculus oracles

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

CalculusResult calculus_oracle(CalculusCase which, const CalculusParams& p) {
    std::function<double(double)> f;
    double decay = 0.0;    // power-law decay exponent of the integrand
    double center = 0.0;   // where the mass sits
    double spread = 1.0;

    switch (which) {
        case CalculusCase::i:
            if (!(p.beta > 0.5 && p.beta <= 1.0 && p.gamma > 0.5 && p.gamma <= 1.0))
                throw parameter_error("calculus_oracle(i): needs 1/2 < beta, gamma <= 1");
            f = [&p](double x) {
                return bracket_pow(x - p.q, -2.0 * p.beta) * bracket_pow(x - p.r, -2.0 * p.gamma);
            };
            decay = 2.0 * (p.beta + p.gamma);
            center = 0.5 * (p.q + p.r);
            spread = 1.0 + std::abs(p.q - p.r);
            break;
        case CalculusCase::ii:
            if (!(p.beta > 0.5 && p.beta <= 1.0 && p.gamma > 0.5 && p.gamma <= 1.0))
                throw parameter_error("calculus_oracle(ii): needs 1/2 < beta, gamma <= 1");
            f = [&p](double x) {
                return bracket_pow(x - p.q, -2.0 * p.beta) *
                       bracket_pow(x - p.r, -2.0 * (1.0 - p.gamma));
            };
            decay = 2.0 * (p.beta + 1.0 - p.gamma);
            center = 0.5 * (p.q + p.r);
            spread = 1.0 + std::abs(p.q - p.r);
            break;
        case CalculusCase::iii:
            if (!(p.alpha > 0.5)) throw parameter_error("calculus_oracle(iii): needs alpha > 1/2");
            if (p.p == 0.0) throw parameter_error("calculus_oracle(iii): needs p != 0");
            f = [&p](double x) {
                return bracket_pow(p.p * x * x + p.q * x + p.r, -p.alpha);
            };
            decay = 2.0 * p.alpha;
            center = -p.q / (2.0 * p.p);
            spread = 1.0 + std::sqrt((std::abs(p.r) + 1.0) / std::abs(p.p)) + std::abs(center);
            break;
    }
    if (decay <= 1.0) throw parameter_error("calculus_oracle: integrand is not integrable");

    // expand the window until the power-law tail bound drops below 1e-8 of
    // the running value
    double half = 8.0 * spread;
    double value = 0.0;
    for (int round = 0; round < 40; ++round) {
        value = integrate(f, center - half, center + half, 1e-12 * std::max(1.0, half));
        const double tail =
            (f(center - half) + f(center + half)) * half / (decay - 1.0);
        if (tail <= 1e-8 * std::max(value, 1e-30)) break;
        half *= 2.0;
    }

    CalculusResult res;
    res.lhs = value;
    switch (which) {
        case CalculusCase::i:
            res.rhs = bracket_pow(p.q - p.r, -2.0 * std::min(p.beta, p.gamma));
            break;
        case CalculusCase::ii:
            res.rhs = bracket_pow(p.q - p.r, -2.0 * (1.0 - p.gamma));
            break;
        case CalculusCase::iii:
            res.rhs = 1.0 / std::abs(p.p);
            break;
    }
    res.constant = res.lhs / res.rhs;
    return res;
}

CalculusSweep calculus_constant_sweep(CalculusCase which, CalculusParams base,
                                      const std::vector<double>& sweep_values) {
    CalculusSweep sweep;
    for (double v : sweep_values) {
        CalculusParams p = base;
        if (which == CalculusCase::iii) {
            p.p = v;
        } else {
            p.q = 0.0;
            p.r = v;
        }
        sweep.abscissae.push_back(v);
        sweep.constants.push_back(calculus_oracle(which, p).constant);
    }
    sweep.trend_slope = fit_loglog(sweep.abscissae, sweep.constants).slope;
    return sweep;
}

}  // namespace sbo
