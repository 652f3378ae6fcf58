#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbo {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct size_error : error {
    using error::error;
};

struct grid_mismatch_error : error {
    using error::error;
};

struct parameter_error : error {
    using error::error;
};

struct resolution_error : error {
    using error::error;
};

struct divergence_error : error {
    using error::error;
};

struct config_error : error {
    using error::error;
};

// sgn with sgn(0) := 1. Used wherever a sign convention at the origin is
// needed for bookkeeping; all production multipliers are built from the
// continuous combinations |k|k and -i*sgn(k) with the k = 0 mode zeroed,
// so results never depend on this choice.
inline double sgn_one(double x) { return x < 0.0 ? -1.0 : 1.0; }

// <x> = sqrt(1 + x^2)
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }
inline double bracket_pow(double x, double p) {
    return std::pow(1.0 + x * x, 0.5 * p);
}

// Uniform periodic spatial grid on [0, L). Mode index m in [-n/2, n/2)
// carries the angular frequency k = 2*pi*m/L; amplitude storage follows the
// FFT slot layout j = m mod n.
class Grid1D {
  public:
    Grid1D(double length, int n) : length_(length), n_(n) {
        if (!(length > 0.0)) throw parameter_error("Grid1D: length must be positive");
        if (n < 8 || (n & (n - 1)) != 0)
            throw parameter_error("Grid1D: n must be a power of two >= 8, got " + std::to_string(n));
    }

    double length() const { return length_; }
    int size() const { return n_; }
    double dx() const { return length_ / n_; }
    double dk() const { return 2.0 * kPi / length_; }

    // FFT slot -> signed mode index in [-n/2, n/2)
    int mode(int j) const { return j < n_ / 2 ? j : j - n_; }
    // signed mode index -> FFT slot
    int slot(int m) const { return m >= 0 ? m : m + n_; }
    double k(int j) const { return dk() * mode(j); }
    double k_of_mode(int m) const { return dk() * m; }
    int nyquist_slot() const { return n_ / 2; }
    int max_mode() const { return n_ / 2 - 1; }

    bool operator==(const Grid1D& o) const { return length_ == o.length_ && n_ == o.n_; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }

  private:
    double length_;
    int n_;
};

// Complex amplitudes per frequency of a Grid1D, i.e. the coefficients c_k of
// f(x) = sum_k c_k e^{ikx}. real_field asserts conjugate symmetry
// c(-k) = conj(c(k)) on paired modes (the unpaired Nyquist slot is outside
// that contract and is kept empty by all smooth-field workflows).
struct SpectralField {
    Grid1D grid;
    std::vector<cplx> amp;
    bool real_field = false;

    explicit SpectralField(const Grid1D& g, bool real = false)
        : grid(g), amp(static_cast<std::size_t>(g.size()), cplx(0.0)), real_field(real) {}

    cplx& at_mode(int m) { return amp[static_cast<std::size_t>(grid.slot(m))]; }
    const cplx& at_mode(int m) const { return amp[static_cast<std::size_t>(grid.slot(m))]; }
    int size() const { return grid.size(); }
};

inline void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
    if (a.grid != b.grid)
        throw grid_mismatch_error(std::string(what) + ": fields live on different grids");
}

inline double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (const cplx& a : f.amp) m = std::max(m, std::abs(a));
    return m;
}

// max relative deviation from conjugate symmetry (paired modes plus real
// zero/Nyquist slots), scaled by the largest amplitude.
inline double conjugate_symmetry_defect(const SpectralField& f) {
    const int n = f.size();
    const double scale = std::max(max_abs(f), 1e-300);
    double worst = std::abs(f.amp[0].imag());
    worst = std::max(worst, std::abs(f.amp[static_cast<std::size_t>(n / 2)].imag()));
    for (int j = 1; j < n / 2; ++j) {
        cplx d = f.amp[static_cast<std::size_t>(j)] - std::conj(f.amp[static_cast<std::size_t>(n - j)]);
        worst = std::max(worst, std::abs(d));
    }
    return worst / scale;
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b, "operator+");
    SpectralField out(a.grid, a.real_field && b.real_field);
    for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] = a.amp[i] + b.amp[i];
    return out;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b, "operator-");
    SpectralField out(a.grid, a.real_field && b.real_field);
    for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] = a.amp[i] - b.amp[i];
    return out;
}

inline SpectralField operator*(cplx c, const SpectralField& f) {
    SpectralField out(f.grid, f.real_field && c.imag() == 0.0);
    for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] = c * f.amp[i];
    return out;
}

// a += c*b
inline void axpy(SpectralField& a, cplx c, const SpectralField& b) {
    require_same_grid(a, b, "axpy");
    for (std::size_t i = 0; i < a.amp.size(); ++i) a.amp[i] += c * b.amp[i];
    if (c.imag() != 0.0 || !b.real_field) a.real_field = a.real_field && b.real_field && c.imag() == 0.0;
}

}  // namespace sbo
