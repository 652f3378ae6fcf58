#include "sbo/fourier.hpp"

#include <fftw3.h>

#include <functional>
#include <mutex>
#include <unordered_map>

namespace sbo {

namespace {

// FFTW planning is not thread-safe; executing a plan on its own buffers is.
// Plans are cached per thread and per size, with planner calls serialized.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanEntry {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    PlanEntry() = default;
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
    PlanEntry(PlanEntry&& o) noexcept : buf(o.buf), fwd(o.fwd), bwd(o.bwd) {
        o.buf = nullptr;
        o.fwd = nullptr;
        o.bwd = nullptr;
    }
    ~PlanEntry() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

PlanEntry& plans_for(int n) {
    thread_local std::unordered_map<int, PlanEntry> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    PlanEntry e;
    e.buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        e.fwd = fftw_plan_dft_1d(n, e.buf, e.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        e.bwd = fftw_plan_dft_1d(n, e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    return cache.emplace(n, std::move(e)).first->second;
}

Multiplier make_multiplier(const Grid1D& grid, std::string name, bool real_preserving) {
    Multiplier m;
    m.name = std::move(name);
    m.factor.assign(static_cast<std::size_t>(grid.size()), cplx(0.0));
    m.real_preserving = real_preserving;
    return m;
}

// Fill a unimodular symbol e^{-i*theta(k)} from the phase on m >= 0 and
// extend by conjugate symmetry, so symbol(-k) == conj(symbol(k)) holds
// bit-exactly.  theta must be odd in k for this to be the true symbol on the
// negative modes; both semigroup phases are.
void fill_conjugate_symmetric_phase(const Grid1D& grid, Multiplier& m,
                                    const std::function<double(double)>& theta) {
    const int n = grid.size();
    for (int mm = 0; mm <= n / 2; ++mm) {
        const double th = theta(grid.k_of_mode(mm));
        const cplx val(std::cos(th), -std::sin(th));
        if (mm < n / 2) m.factor[static_cast<std::size_t>(mm)] = val;
        if (mm > 0) m.factor[static_cast<std::size_t>(grid.slot(-mm))] = std::conj(val);
    }
}

}  // namespace

SpectralField forward_transform(const Grid1D& grid, std::span<const cplx> samples, bool real_hint) {
    const int n = grid.size();
    if (static_cast<int>(samples.size()) != n)
        throw size_error("forward_transform: expected " + std::to_string(n) + " samples, got " +
                         std::to_string(samples.size()));
    PlanEntry& p = plans_for(n);
    for (int i = 0; i < n; ++i) {
        p.buf[i][0] = samples[static_cast<std::size_t>(i)].real();
        p.buf[i][1] = samples[static_cast<std::size_t>(i)].imag();
    }
    fftw_execute(p.fwd);
    SpectralField out(grid, real_hint);
    const double inv_n = 1.0 / n;
    for (int i = 0; i < n; ++i)
        out.amp[static_cast<std::size_t>(i)] = cplx(p.buf[i][0], p.buf[i][1]) * inv_n;
    return out;
}

SpectralField forward_transform_real(const Grid1D& grid, std::span<const double> samples) {
    std::vector<cplx> tmp(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) tmp[i] = cplx(samples[i], 0.0);
    return forward_transform(grid, tmp, /*real_hint=*/true);
}

std::vector<cplx> inverse_transform(const SpectralField& field) {
    const int n = field.size();
    PlanEntry& p = plans_for(n);
    for (int i = 0; i < n; ++i) {
        p.buf[i][0] = field.amp[static_cast<std::size_t>(i)].real();
        p.buf[i][1] = field.amp[static_cast<std::size_t>(i)].imag();
    }
    fftw_execute(p.bwd);
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = cplx(p.buf[i][0], p.buf[i][1]);
    return out;
}

std::vector<double> inverse_transform_real(const SpectralField& field) {
    std::vector<cplx> tmp = inverse_transform(field);
    std::vector<double> out(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
    return out;
}

Multiplier derivative_multiplier(const Grid1D& grid) {
    Multiplier m = make_multiplier(grid, "derivative", true);
    for (int j = 0; j < grid.size(); ++j)
        m.factor[static_cast<std::size_t>(j)] = cplx(0.0, grid.k(j));
    m.factor[static_cast<std::size_t>(grid.nyquist_slot())] = cplx(0.0);
    return m;
}

Multiplier hilbert_multiplier(const Grid1D& grid) {
    Multiplier m = make_multiplier(grid, "hilbert", true);
    for (int j = 0; j < grid.size(); ++j) {
        const int mode = grid.mode(j);
        if (mode == 0) continue;
        m.factor[static_cast<std::size_t>(j)] = cplx(0.0, mode > 0 ? -1.0 : 1.0);
    }
    m.factor[static_cast<std::size_t>(grid.nyquist_slot())] = cplx(0.0);
    return m;
}

Multiplier bracket_power_multiplier(const Grid1D& grid, double s) {
    Multiplier m = make_multiplier(grid, "bracket_power", true);
    for (int j = 0; j < grid.size(); ++j)
        m.factor[static_cast<std::size_t>(j)] = cplx(bracket_pow(grid.k(j), s), 0.0);
    return m;
}

Multiplier abs_power_multiplier(const Grid1D& grid, double s) {
    Multiplier m = make_multiplier(grid, "abs_power", true);
    for (int j = 0; j < grid.size(); ++j) {
        const double k = grid.k(j);
        m.factor[static_cast<std::size_t>(j)] = cplx(k == 0.0 ? 0.0 : std::pow(std::abs(k), s), 0.0);
    }
    return m;
}

Multiplier schrodinger_multiplier(const Grid1D& grid, double t) {
    Multiplier m = make_multiplier(grid, "schrodinger", false);
    for (int j = 0; j < grid.size(); ++j) {
        const double th = grid.k(j) * grid.k(j) * t;
        m.factor[static_cast<std::size_t>(j)] = cplx(std::cos(th), -std::sin(th));
    }
    return m;
}

Multiplier bo_multiplier(const Grid1D& grid, double t, double nu) {
    Multiplier m = make_multiplier(grid, "benjamin_ono", true);
    fill_conjugate_symmetric_phase(grid, m,
                                   [t, nu](double k) { return nu * std::abs(k) * k * t; });
    return m;
}

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& m) {
    if (m.factor.size() != field.amp.size())
        throw grid_mismatch_error("apply_multiplier: symbol built for a different grid");
    SpectralField out(field.grid, field.real_field && m.real_preserving);
    for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] = m.factor[i] * field.amp[i];
    return out;
}

SpectralField hilbert_transform(const SpectralField& field) {
    return apply_multiplier(field, hilbert_multiplier(field.grid));
}

SpectralField schrodinger_semigroup(const SpectralField& field, double t) {
    return apply_multiplier(field, schrodinger_multiplier(field.grid, t));
}

SpectralField bo_semigroup(const SpectralField& field, double t, double nu) {
    return apply_multiplier(field, bo_multiplier(field.grid, t, nu));
}

SpectralField dealias_two_thirds(const SpectralField& field) {
    SpectralField out = field;
    const int cut = field.grid.size() / 3;
    for (int j = 0; j < field.size(); ++j) {
        if (std::abs(field.grid.mode(j)) > cut) out.amp[static_cast<std::size_t>(j)] = cplx(0.0);
    }
    return out;
}

}  // namespace sbo
