#include "sbo/gateaux.hpp"

#include <algorithm>

namespace sbo {

namespace {

cplx polar_unit(double theta) { return cplx(std::cos(theta), std::sin(theta)); }

int count_interior_modes(const FreqInterval& iv, double dxi) {
    const std::int64_t lo = static_cast<std::int64_t>(std::floor(iv.lo() / dxi));
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(iv.hi() / dxi));
    int count = 0;
    for (std::int64_t i = lo; i <= hi; ++i) {
        const double xi = static_cast<double>(i) * dxi;
        if (xi > iv.lo() && xi < iv.hi()) ++count;
    }
    return count;
}

LineSpectrum indicator_spectrum(const FreqInterval& iv, double dxi) {
    const std::int64_t lo = static_cast<std::int64_t>(std::floor(iv.lo() / dxi));
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(iv.hi() / dxi));
    LineSpectrum out;
    out.dxi = dxi;
    out.i0 = lo;
    out.amp.assign(static_cast<std::size_t>(hi - lo + 1), cplx(0.0));
    for (std::int64_t i = lo; i <= hi; ++i) {
        const double xi = static_cast<double>(i) * dxi;
        if (xi > iv.lo() && xi < iv.hi())
            out.amp[static_cast<std::size_t>(i - lo)] = cplx(1.0, 0.0);
    }
    return out;
}

void weight_by_inverse_bracket(LineSpectrum& f, double power) {
    for (int i = 0; i < f.size(); ++i)
        f.amp[static_cast<std::size_t>(i)] *= bracket_pow(f.xi(i), -power);
}

}  // namespace

SegmentedSpectrum merge_segments(const SegmentedSpectrum& in) {
    SegmentedSpectrum out;
    out.dxi = in.dxi;
    std::vector<const LineSpectrum*> sorted;
    for (const LineSpectrum& p : in.pieces)
        if (!p.amp.empty()) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const LineSpectrum* a, const LineSpectrum* b) { return a->i0 < b->i0; });
    std::size_t idx = 0;
    while (idx < sorted.size()) {
        std::int64_t lo = sorted[idx]->i0;
        std::int64_t hi = lo + sorted[idx]->size();
        std::size_t last = idx;
        while (last + 1 < sorted.size() && sorted[last + 1]->i0 <= hi) {
            ++last;
            hi = std::max(hi, sorted[last]->i0 + sorted[last]->size());
        }
        LineSpectrum merged;
        merged.dxi = in.dxi;
        merged.i0 = lo;
        merged.amp.assign(static_cast<std::size_t>(hi - lo), cplx(0.0));
        for (std::size_t p = idx; p <= last; ++p) {
            const LineSpectrum& piece = *sorted[p];
            for (int i = 0; i < piece.size(); ++i)
                merged.amp[static_cast<std::size_t>(piece.i0 - lo + i)] +=
                    piece.amp[static_cast<std::size_t>(i)];
        }
        out.pieces.push_back(std::move(merged));
        idx = last + 1;
    }
    return out;
}

double line_sobolev_norm(const LineSpectrum& f, double s) {
    double sum = 0.0;
    for (int i = 0; i < f.size(); ++i)
        sum += bracket_pow(f.xi(i), 2.0 * s) * std::norm(f.amp[static_cast<std::size_t>(i)]);
    return std::sqrt(sum * f.dxi);
}

double line_l2_norm(const LineSpectrum& f) { return line_sobolev_norm(f, 0.0); }

double segmented_sobolev_norm(const SegmentedSpectrum& f, double s) {
    const SegmentedSpectrum m = merge_segments(f);
    double sum = 0.0;
    for (const LineSpectrum& p : m.pieces) {
        const double v = line_sobolev_norm(p, s);
        sum += v * v;
    }
    return std::sqrt(sum);
}

cplx duhamel_phase_integral(double omega, double t) {
    const double x = 0.5 * omega * t;
    const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return t * polar_unit(x) * sinc;
}

cplx duhamel_phase_integral_simpson(double omega, double t, int intervals) {
    if (intervals < 2 || intervals % 2 != 0)
        throw parameter_error("duhamel_phase_integral_simpson: intervals must be even >= 2");
    const double h = t / intervals;
    cplx acc = polar_unit(0.0) + polar_unit(omega * t);
    for (int j = 1; j < intervals; ++j)
        acc += polar_unit(omega * h * j) * (j % 2 == 1 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

cplx interaction_kernel_u(double t_prime, double xi, double xi1, double s, double s_prime,
                          double alpha, double nu) {
    const double xi2 = xi - xi1;
    const double omega = xi * xi - xi2 * xi2 - nu * std::abs(xi1) * xi1;
    const double mag =
        2.0 * std::abs(alpha) * bracket_pow(xi, s) / (bracket_pow(xi2, s) * bracket_pow(xi1, s_prime));
    return mag * polar_unit(t_prime * omega);
}

cplx interaction_kernel_v(double t_prime, double xi, double xi1, double s, double s_prime,
                          double beta, double nu) {
    const double xi2 = xi - xi1;
    const double omega = nu * std::abs(xi) * xi - xi2 * xi2 + xi1 * xi1;
    const double mag = 2.0 * std::abs(beta) * std::abs(xi) * bracket_pow(xi, s_prime) /
                       (bracket_pow(xi2, s) * bracket_pow(xi1, s));
    return mag * polar_unit(t_prime * omega);
}

LineSpectrum flow_second_derivative_u(const LineSpectrum& phi, const LineSpectrum& psi, double t,
                                      double alpha, double nu, double conv_weight) {
    if (phi.dxi != psi.dxi)
        throw grid_mismatch_error("flow_second_derivative_u: mismatched lattice spacings");
    LineSpectrum out;
    out.dxi = phi.dxi;
    out.i0 = phi.i0 + psi.i0;
    out.amp.assign(static_cast<std::size_t>(phi.size() + psi.size() - 1), cplx(0.0));
    for (int b = 0; b < psi.size(); ++b) {
        const cplx pb = psi.amp[static_cast<std::size_t>(b)];
        if (pb == cplx(0.0)) continue;
        const double xi1 = psi.xi(b);
        const double bo_phase = nu * std::abs(xi1) * xi1;
        for (int a = 0; a < phi.size(); ++a) {
            const cplx pa = phi.amp[static_cast<std::size_t>(a)];
            if (pa == cplx(0.0)) continue;
            const double xi2 = phi.xi(a);
            const double xi = xi1 + xi2;
            const double omega = xi * xi - xi2 * xi2 - bo_phase;
            out.amp[static_cast<std::size_t>(a + b)] += duhamel_phase_integral(omega, t) * pa * pb;
        }
    }
    const cplx front = cplx(0.0, -2.0 * alpha) * conv_weight;
    for (int i = 0; i < out.size(); ++i) {
        const double xi = out.xi(i);
        out.amp[static_cast<std::size_t>(i)] *= front * polar_unit(-t * xi * xi);
    }
    return out;
}

SegmentedSpectrum flow_second_derivative_v(const SegmentedSpectrum& phi, double t, double beta,
                                           double nu, double conv_weight) {
    const SegmentedSpectrum in = merge_segments(phi);
    SegmentedSpectrum result;
    result.dxi = in.dxi;
    for (const LineSpectrum& p : in.pieces) {
        for (const LineSpectrum& q : in.pieces) {
            LineSpectrum out;
            out.dxi = in.dxi;
            out.i0 = p.i0 - (q.i0 + q.size() - 1);
            out.amp.assign(static_cast<std::size_t>(p.size() + q.size() - 1), cplx(0.0));
            for (int a = 0; a < p.size(); ++a) {
                const cplx pa = p.amp[static_cast<std::size_t>(a)];
                if (pa == cplx(0.0)) continue;
                const double xi2 = p.xi(a);
                for (int b = 0; b < q.size(); ++b) {
                    const cplx qb = q.amp[static_cast<std::size_t>(b)];
                    if (qb == cplx(0.0)) continue;
                    const double mirror = q.xi(b);  // xi1 = -mirror
                    const double xi = xi2 - mirror;
                    const double omega =
                        nu * std::abs(xi) * xi - xi2 * xi2 + mirror * mirror;
                    out.amp[static_cast<std::size_t>(a - b + q.size() - 1)] +=
                        duhamel_phase_integral(omega, t) * pa * std::conj(qb);
                }
            }
            for (int i = 0; i < out.size(); ++i) {
                const double xi = out.xi(i);
                const cplx front = cplx(0.0, 2.0 * beta * xi) * conv_weight;
                out.amp[static_cast<std::size_t>(i)] *=
                    front * polar_unit(-t * nu * std::abs(xi) * xi);
            }
            result.pieces.push_back(std::move(out));
        }
    }
    return merge_segments(result);
}

namespace {

LineSpectrum line_from_grid(const SpectralField& f) {
    const int n = f.size();
    LineSpectrum out;
    out.dxi = f.grid.dk();
    out.i0 = -n / 2;
    out.amp.assign(static_cast<std::size_t>(n), cplx(0.0));
    for (int m = -n / 2; m < n / 2; ++m)
        out.amp[static_cast<std::size_t>(m + n / 2)] = f.at_mode(m);
    return out;
}

SpectralField line_to_grid(const LineSpectrum& line, const Grid1D& grid, bool real_flag) {
    SpectralField out(grid, real_flag);
    const int n = grid.size();
    for (int i = 0; i < line.size(); ++i) {
        const cplx a = line.amp[static_cast<std::size_t>(i)];
        if (a == cplx(0.0)) continue;
        const std::int64_t m = line.i0 + i;
        if (m < -n / 2 || m >= n / 2)
            throw grid_mismatch_error(
                "flow second derivative: interaction leaves the grid band; use data deeper "
                "inside the band");
        out.at_mode(static_cast<int>(m)) += a;
    }
    return out;
}

}  // namespace

SpectralField flow_second_derivative_u(const SpectralField& phi, const SpectralField& psi,
                                       double t, double alpha, double nu) {
    require_same_grid(phi, psi, "flow_second_derivative_u");
    const LineSpectrum out =
        flow_second_derivative_u(line_from_grid(phi), line_from_grid(psi), t, alpha, nu, 1.0);
    return line_to_grid(out, phi.grid, false);
}

SpectralField flow_second_derivative_v(const SpectralField& phi, double t, double beta,
                                       double nu) {
    SegmentedSpectrum seg;
    seg.dxi = phi.grid.dk();
    seg.pieces.push_back(line_from_grid(phi));
    const SegmentedSpectrum out = flow_second_derivative_v(seg, t, beta, nu, 1.0);
    SpectralField grid_out(phi.grid, true);
    for (const LineSpectrum& p : out.pieces) {
        const SpectralField piece = line_to_grid(p, phi.grid, true);
        for (std::size_t i = 0; i < grid_out.amp.size(); ++i) grid_out.amp[i] += piece.amp[i];
    }
    return grid_out;
}

// ---------------------------------------------------------------------------
// packet families

const char* to_string(PacketCase c) {
    switch (c) {
        case PacketCase::T12i_low: return "T12i_low";
        case PacketCase::T12i_high: return "T12i_high";
        case PacketCase::T12ii_low: return "T12ii_low";
        case PacketCase::T12ii_high: return "T12ii_high";
        case PacketCase::T13_a: return "T13_a";
        case PacketCase::T13_b: return "T13_b";
        case PacketCase::T13_c: return "T13_c";
    }
    return "?";
}

PacketCase packet_case_from_string(const std::string& label) {
    for (PacketCase c : {PacketCase::T12i_low, PacketCase::T12i_high, PacketCase::T12ii_low,
                         PacketCase::T12ii_high, PacketCase::T13_a, PacketCase::T13_b,
                         PacketCase::T13_c}) {
        if (label == to_string(c)) return c;
    }
    throw config_error("unknown packet case label: " + label);
}

double predicted_growth_exponent(PacketCase c, double s, double s_prime) {
    switch (c) {
        case PacketCase::T12i_low: return -0.5 - s_prime;
        case PacketCase::T12i_high: return s_prime - 2.0 * s + 0.5;
        case PacketCase::T12ii_low: return s - 2.0 - s_prime;
        case PacketCase::T12ii_high: return s_prime - s - 1.0;
        case PacketCase::T13_a: return s - 0.5 - s_prime;
        case PacketCase::T13_b: return s_prime - s + 0.5;
        case PacketCase::T13_c: return -0.5 - s_prime - s;
    }
    return 0.0;
}

bool interval_inclusion_holds(const FreqInterval& a, const FreqInterval& b,
                              const FreqInterval& r, double* margin) {
    const double slack = a.halfwidth - r.halfwidth - b.halfwidth;
    const double defect = std::abs((r.center - b.center) - a.center);
    const double tol = 1e-9 * (1.0 + std::abs(a.center) + a.halfwidth);
    if (margin) *margin = slack - defect;
    return defect <= slack + tol;
}

PacketGeometry packet_geometry(const PacketSpec& spec) {
    const double nu = spec.nu;
    const double an = std::abs(nu);
    const double sg = sgn_one(nu);
    const double n = static_cast<double>(spec.scale);
    const double tb = bracket(spec.t);  // <t>
    PacketGeometry g;
    g.probe_time = spec.t;

    switch (spec.c) {
        case PacketCase::T12i_low: {
            g.kind = ResponseKind::u_pair;
            g.min_scale = 1.0 + an;
            g.a = {-sg * n / (1.0 + an), 1.0 / (4.0 * tb * n)};
            g.b = {sg * n / 2.0, 1.0 / (8.0 * tb * n)};
            const double b_nu = 1.0 / (1.0 + an) - 0.5;
            g.r = {-b_nu * sg * n, 1.0 / (8.0 * tb * n)};
            break;
        }
        case PacketCase::T12i_high: {
            g.kind = ResponseKind::v_quadratic;
            const double gap = std::abs(1.0 - an);
            if (gap == 0.0)
                throw parameter_error("packet_geometry: T12i_high needs |nu| != 1");
            g.min_scale = 1.0 / gap;
            const double a_nu = gap * (1.0 + an);
            const double c_t = 1.0 + 8.0 * std::abs(spec.t) / (gap * gap);
            g.a = {-sg * (1.0 + an) * n / a_nu, 1.0 / (a_nu * c_t * n)};
            g.b = {-sg * (1.0 - an) * n / a_nu, 1.0 / (2.0 * a_nu * c_t * n)};
            g.r = {-2.0 * sg * n / a_nu, 1.0 / (2.0 * a_nu * c_t * n)};
            break;
        }
        case PacketCase::T12ii_low:
        case PacketCase::T12ii_high: {
            g.kind = spec.c == PacketCase::T12ii_low ? ResponseKind::u_pair
                                                     : ResponseKind::v_quadratic;
            g.min_scale = 2.0;
            g.a = {n, 0.5};
            g.b = {0.0, 0.25};
            g.r = {n, 0.25};
            g.probe_time = 1.0 / (6.0 * (1.0 + an) * n * n);
            break;
        }
        case PacketCase::T13_a: {
            g.kind = ResponseKind::u_pair;
            g.min_scale = 2.0;
            g.a = {sg * n, 1.0 / (2.0 * tb * n)};
            g.b = {0.0, 1.0 / (4.0 * tb * n)};
            g.r = {sg * n, 1.0 / (4.0 * tb * n)};
            break;
        }
        case PacketCase::T13_b: {
            g.kind = ResponseKind::v_quadratic;
            g.min_scale = 2.0;
            g.a = {-sg * n, 1.0 / (2.0 * tb * n)};
            g.b = {0.0, 1.0 / (4.0 * tb * n)};
            g.r = {-sg * n, 1.0 / (4.0 * tb * n)};
            break;
        }
        case PacketCase::T13_c: {
            g.kind = ResponseKind::u_pair;
            g.min_scale = 2.0;
            g.a = {-sg * n, 1.0 / (8.0 * tb * n)};
            g.b = {sg * n, 1.0 / (16.0 * tb * n)};
            g.r = {0.0, 1.0 / (16.0 * tb * n)};
            break;
        }
    }
    if (n <= g.min_scale)
        throw parameter_error(std::string("packet_geometry: ") + to_string(spec.c) +
                              " needs N > " + std::to_string(g.min_scale));
    g.inclusion_ok = interval_inclusion_holds(g.a, g.b, g.r, &g.inclusion_margin);
    return g;
}

double recommended_spacing(const PacketSpec& spec, int target_modes) {
    const PacketGeometry g = packet_geometry(spec);
    const double wmin = std::min(g.a.width(), g.b.width());
    return wmin / (target_modes + 1);
}

Packets build_packets(const PacketSpec& spec, double dxi, int min_modes) {
    if (!(dxi > 0.0)) throw parameter_error("build_packets: dxi must be positive");
    Packets out;
    out.geometry = packet_geometry(spec);
    out.dxi = dxi;
    if (!out.geometry.inclusion_ok)
        throw parameter_error("build_packets: witness interval fails the inclusion check");

    const FreqInterval& a = out.geometry.a;
    const FreqInterval& b = out.geometry.b;
    const int in_a = count_interior_modes(a, dxi);
    const int in_b = count_interior_modes(b, dxi);
    if (in_a < min_modes || in_b < min_modes) {
        const double wmin = std::min(a.width(), b.width());
        throw resolution_error(
            "build_packets: thinnest interval holds " + std::to_string(std::min(in_a, in_b)) +
            " modes (< " + std::to_string(min_modes) + "); need lattice spacing <= " +
            std::to_string(wmin / (min_modes + 1)));
    }

    if (out.geometry.kind == ResponseKind::u_pair) {
        out.f = indicator_spectrum(b, dxi);
        out.g = indicator_spectrum(a, dxi);
        out.modes_f = in_b;
        out.modes_g = in_a;
    } else {
        const FreqInterval neg_a{-a.center, a.halfwidth};
        out.f_segments.dxi = dxi;
        out.f_segments.pieces.push_back(indicator_spectrum(neg_a, dxi));
        out.f_segments.pieces.push_back(indicator_spectrum(b, dxi));
        out.f_segments = merge_segments(out.f_segments);
        out.modes_f = in_a + in_b;
    }
    return out;
}

ConvolutionBoundCheck convolution_lower_bound_check(const FreqInterval& a, const FreqInterval& b,
                                                    const FreqInterval& r) {
    if (!interval_inclusion_holds(a, b, r))
        throw parameter_error("convolution_lower_bound_check: R - B is not inside A");
    ConvolutionBoundCheck c;
    c.lhs = std::sqrt(r.width()) * b.width();
    const double wa = a.width(), wb = b.width();
    const double m = std::min(wa, wb);
    // |1_A * 1_B|^2: two linear ramps of length m plus a plateau of height m
    c.rhs = std::sqrt(2.0 * m * m * m / 3.0 + std::abs(wa - wb) * m * m);
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-12);
    return c;
}

ProbeReport run_growth_probe(PacketCase c, const GrowthProbeSettings& st,
                             const std::vector<int>& scales) {
    std::vector<ProbePoint> points;
    for (int n : scales) {
        PacketSpec spec{c, n, st.t, st.nu};
        const double dxi = recommended_spacing(spec, st.modes_per_min_width);
        const Packets packets = build_packets(spec, dxi);
        const double t_probe = packets.geometry.probe_time;

        ProbePoint pt;
        pt.n = static_cast<double>(n);
        if (packets.geometry.kind == ResponseKind::u_pair) {
            LineSpectrum phi = packets.f;
            LineSpectrum psi = packets.g;
            weight_by_inverse_bracket(phi, st.s);
            weight_by_inverse_bracket(psi, st.s_prime);
            const LineSpectrum d2u =
                flow_second_derivative_u(phi, psi, t_probe, st.alpha, st.nu, dxi);
            pt.lhs = line_sobolev_norm(d2u, st.s);
            pt.rhs = line_l2_norm(packets.f) * line_l2_norm(packets.g);
        } else {
            SegmentedSpectrum phi = packets.f_segments;
            for (LineSpectrum& p : phi.pieces) weight_by_inverse_bracket(p, st.s);
            const SegmentedSpectrum d2v =
                flow_second_derivative_v(phi, t_probe, st.beta, st.nu, dxi);
            pt.lhs = segmented_sobolev_norm(d2v, st.s_prime);
            const double f_l2_sq = packets.modes_f * dxi;
            pt.rhs = f_l2_sq;
        }
        if (pt.rhs == 0.0) throw parameter_error("run_growth_probe: empty packet data");
        pt.ratio = pt.lhs / pt.rhs;
        points.push_back(pt);
    }
    return finish_report(to_string(c), std::move(points),
                         predicted_growth_exponent(c, st.s, st.s_prime), st.slope_tolerance);
}

}  // namespace sbo
