#include "sbo/solver.hpp"

namespace sbo {

namespace {

bool all_finite(const SpectralField& f) {
    for (const cplx& a : f.amp) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    }
    return true;
}

// mean over the grid of v * |u|^2, evaluated pointwise in physical space;
// exact for band-limited factors (cubic products stay below the sampling
// band after 2/3-rule de-aliasing)
double coupling_mean(const SpectralField& v, const SpectralField& u) {
    const std::vector<cplx> us = inverse_transform(u);
    const std::vector<double> vs = inverse_transform_real(v);
    double sum = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) sum += vs[i] * std::norm(us[i]);
    return sum / static_cast<double>(us.size());
}

}  // namespace

SpectralField product_physical(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b, "product_physical");
    const std::vector<cplx> as = inverse_transform(a);
    const std::vector<cplx> bs = inverse_transform(b);
    std::vector<cplx> prod(as.size());
    for (std::size_t i = 0; i < as.size(); ++i) prod[i] = as[i] * bs[i];
    return dealias_two_thirds(forward_transform(a.grid, prod, a.real_field && b.real_field));
}

SpectralField modulus_squared(const SpectralField& u) {
    const std::vector<cplx> us = inverse_transform(u);
    std::vector<cplx> sq(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) sq[i] = cplx(std::norm(us[i]), 0.0);
    return dealias_two_thirds(forward_transform(u.grid, sq, /*real_hint=*/true));
}

std::pair<SpectralField, SpectralField> nonlinear_terms(const SolutionState& state,
                                                        const SystemParams& params) {
    SpectralField du = cplx(0.0, -params.alpha) * product_physical(state.u, state.v);
    SpectralField dv = apply_multiplier(modulus_squared(state.u), derivative_multiplier(params.grid));
    dv = cplx(params.beta, 0.0) * dv;
    dv.real_field = true;
    return {du, dv};
}

SolutionState step_splitstep(const SolutionState& state, const SystemParams& params) {
    const double h = params.dt;
    SolutionState s = state;

    s.u = schrodinger_semigroup(s.u, 0.5 * h);
    s.v = bo_semigroup(s.v, 0.5 * h, params.nu);

    // explicit midpoint on the nonlinear vector field
    auto [du1, dv1] = nonlinear_terms(s, params);
    SolutionState mid = s;
    axpy(mid.u, cplx(0.5 * h, 0.0), du1);
    axpy(mid.v, cplx(0.5 * h, 0.0), dv1);
    auto [du2, dv2] = nonlinear_terms(mid, params);
    axpy(s.u, cplx(h, 0.0), du2);
    axpy(s.v, cplx(h, 0.0), dv2);

    s.u = schrodinger_semigroup(s.u, 0.5 * h);
    s.v = bo_semigroup(s.v, 0.5 * h, params.nu);
    s.v.real_field = true;
    s.time = state.time + h;

    if (!all_finite(s.u) || !all_finite(s.v))
        throw divergence_error("split step diverged at t = " + std::to_string(s.time));
    return s;
}

RunResult run_splitstep(const SolutionState& initial, const SystemParams& params,
                        int sample_stride, double s, double s_prime) {
    const int steps = static_cast<int>(std::llround(params.horizon / params.dt));
    if (steps < 1) throw parameter_error("run_splitstep: horizon shorter than one step");
    RunResult out{initial, {}};
    auto sample = [&](const SolutionState& st) {
        TimeSample row;
        row.t = st.time;
        row.conserved = conserved_quantities(st, params);
        row.u_hs = sobolev_norm(st.u, s);
        row.v_hs = sobolev_norm(st.v, s_prime);
        out.series.push_back(row);
    };
    sample(out.final_state);
    for (int i = 0; i < steps; ++i) {
        try {
            out.final_state = step_splitstep(out.final_state, params);
        } catch (const divergence_error&) {
            throw divergence_error("split step diverged at step " + std::to_string(i + 1) +
                                   " of " + std::to_string(steps));
        }
        if ((i + 1) % sample_stride == 0 || i + 1 == steps) sample(out.final_state);
    }
    return out;
}

namespace {

// cumulative composite Simpson over equispaced nodes; odd prefixes close with
// the quadratic through the last three nodes, keeping O(h^4) at every node
std::vector<SpectralField> cumulative_simpson(const std::vector<SpectralField>& w, double h) {
    const std::size_t n = w.size();
    std::vector<SpectralField> out;
    out.reserve(n);
    out.emplace_back(w[0].grid, w[0].real_field);  // zero
    for (std::size_t j = 1; j < n; ++j) {
        SpectralField acc(w[0].grid, true);
        if (j % 2 == 0) {
            acc = out[j - 2];
            axpy(acc, cplx(h / 3.0, 0.0), w[j - 2]);
            axpy(acc, cplx(4.0 * h / 3.0, 0.0), w[j - 1]);
            axpy(acc, cplx(h / 3.0, 0.0), w[j]);
        } else if (j == 1) {
            acc = out[0];
            axpy(acc, cplx(5.0 * h / 12.0, 0.0), w[0]);
            axpy(acc, cplx(8.0 * h / 12.0, 0.0), w[1]);
            axpy(acc, cplx(-h / 12.0, 0.0), w[2]);
        } else {
            acc = out[j - 1];
            axpy(acc, cplx(-h / 12.0, 0.0), w[j - 2]);
            axpy(acc, cplx(8.0 * h / 12.0, 0.0), w[j - 1]);
            axpy(acc, cplx(5.0 * h / 12.0, 0.0), w[j]);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

double max_l2_diff(const std::vector<SpectralField>& a, const std::vector<SpectralField>& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, l2_norm(a[j] - b[j]));
    return worst;
}

}  // namespace

PicardResult picard_iterate(const SpectralField& phi, const SpectralField& psi,
                            const SystemParams& params, int iterations, int quad_intervals) {
    require_same_grid(phi, psi, "picard_iterate");
    if (iterations < 1) throw parameter_error("picard_iterate: iterations must be >= 1");
    if (quad_intervals < 4 || quad_intervals % 2 != 0)
        throw parameter_error("picard_iterate: quadrature intervals must be even and >= 4");

    const int q = quad_intervals;
    const double h = params.horizon / q;
    const double init_scale = l2_norm(phi) + l2_norm(psi);

    std::vector<double> times(static_cast<std::size_t>(q) + 1);
    for (int j = 0; j <= q; ++j) times[static_cast<std::size_t>(j)] = h * j;

    // first iterate: free evolutions at every node
    std::vector<SpectralField> u_nodes, v_nodes;
    u_nodes.reserve(times.size());
    v_nodes.reserve(times.size());
    for (double t : times) {
        u_nodes.push_back(schrodinger_semigroup(phi, t));
        v_nodes.push_back(bo_semigroup(psi, t, params.nu));
    }

    PicardResult result{SolutionState(u_nodes.back(), v_nodes.back(), params.horizon), {}, {}};

    const Multiplier ddx = derivative_multiplier(params.grid);
    for (int m = 1; m < iterations; ++m) {
        // twisted integrands: w_u = e^{-it'dxx}(uv), w_v = e^{+nu t'H dxx}(|u|^2)_x
        std::vector<SpectralField> wu, wv;
        wu.reserve(times.size());
        wv.reserve(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) {
            SpectralField uv = product_physical(u_nodes[j], v_nodes[j]);
            wu.push_back(schrodinger_semigroup(uv, -times[j]));
            SpectralField flux = apply_multiplier(modulus_squared(u_nodes[j]), ddx);
            wv.push_back(bo_semigroup(flux, -times[j], params.nu));
        }
        const std::vector<SpectralField> iu = cumulative_simpson(wu, h);
        const std::vector<SpectralField> iv = cumulative_simpson(wv, h);

        std::vector<SpectralField> u_next, v_next;
        u_next.reserve(times.size());
        v_next.reserve(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) {
            SpectralField cu = phi;
            axpy(cu, cplx(0.0, -params.alpha), iu[j]);
            u_next.push_back(schrodinger_semigroup(cu, times[j]));
            SpectralField cv = psi;
            axpy(cv, cplx(params.beta, 0.0), iv[j]);
            SpectralField vn = bo_semigroup(cv, times[j], params.nu);
            vn.real_field = true;
            v_next.push_back(std::move(vn));
        }

        result.u_diffs.push_back(max_l2_diff(u_next, u_nodes));
        result.v_diffs.push_back(max_l2_diff(v_next, v_nodes));
        u_nodes = std::move(u_next);
        v_nodes = std::move(v_next);

        const double scale = l2_norm(u_nodes.back()) + l2_norm(v_nodes.back());
        if (init_scale > 0.0 && scale > 1e6 * init_scale)
            throw divergence_error("picard_iterate: iterate norm exceeded 1e6 x initial "
                                   "(horizon too long for this data)");
    }

    result.final_state = SolutionState(u_nodes.back(), v_nodes.back(), params.horizon);
    return result;
}

ConservedTriple conserved_quantities(const SolutionState& state, const SystemParams& params) {
    ConservedTriple q;
    const Grid1D& g = state.u.grid;
    double mass = 0.0, cross = 0.0, kinetic = 0.0, v_l2 = 0.0, v_half = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        const double k = g.k(j);
        const double uu = std::norm(state.u.amp[static_cast<std::size_t>(j)]);
        const double vv = std::norm(state.v.amp[static_cast<std::size_t>(j)]);
        mass += uu;
        cross += -k * uu;  // Im sum c conj(ik c) = -k |c|^2 per mode
        kinetic += k * k * uu;
        v_l2 += vv;
        v_half += std::abs(k) * vv;
    }
    q.mass = mass;
    q.momentum_like = cross + 0.5 * params.alpha / params.beta * v_l2;
    q.energy = kinetic + params.alpha * coupling_mean(state.v, state.u) -
               0.5 * params.alpha * params.nu / params.beta * v_half;
    return q;
}

ConservedTriple conserved_scales(const SolutionState& state, const SystemParams& params) {
    ConservedTriple s;
    const Grid1D& g = state.u.grid;
    double mass = 0.0, cross = 0.0, kinetic = 0.0, v_l2 = 0.0, v_half = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        const double k = g.k(j);
        const double uu = std::norm(state.u.amp[static_cast<std::size_t>(j)]);
        const double vv = std::norm(state.v.amp[static_cast<std::size_t>(j)]);
        mass += uu;
        cross += std::abs(k) * uu;
        kinetic += k * k * uu;
        v_l2 += vv;
        v_half += std::abs(k) * vv;
    }
    s.mass = mass;
    s.momentum_like = cross + std::abs(0.5 * params.alpha / params.beta) * v_l2;
    s.energy = kinetic + std::abs(params.alpha * coupling_mean(state.v, state.u)) +
               std::abs(0.5 * params.alpha * params.nu / params.beta) * v_half;
    return s;
}

}  // namespace sbo
