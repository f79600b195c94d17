#ifndef HHGQO_GRID_HPP
#define HHGQO_GRID_HPP

#include <complex>
#include <stdexcept>
#include <vector>

namespace hhgqo {

struct SpatialGrid {
    double x_min = -400.0;
    double x_max = 400.0;
    int n_points = 8192;
    double absorber_width = 80.0;

    void validate() const {
        if (n_points < 16) throw std::invalid_argument("grid: n_points too small");
        if (!(x_max > x_min)) throw std::invalid_argument("grid: x_max must exceed x_min");
        if (!(absorber_width >= 0.0) || absorber_width >= 0.25 * (x_max - x_min))
            throw std::invalid_argument("grid: absorber_width must be < (x_max-x_min)/4");
    }
    double dx() const { return (x_max - x_min) / (n_points - 1); }
    double x(int i) const { return x_min + i * dx(); }
    /// Mirror index for x -> -x on grids symmetric about 0.
    int mirror(int i) const { return n_points - 1 - i; }
    bool symmetric() const { return std::abs(x_min + x_max) < 1e-12 * (x_max - x_min); }
};

struct Wavefunction {
    std::vector<std::complex<double>> amp;

    double norm2(const SpatialGrid& g) const {
        double s = 0.0;
        for (const auto& a : amp) s += std::norm(a);
        return s * g.dx();
    }
    void normalize(const SpatialGrid& g) {
        const double n = std::sqrt(norm2(g));
        if (!(n > 0.0)) throw std::runtime_error("wavefunction: zero norm");
        for (auto& a : amp) a /= n;
    }
};

inline std::complex<double> inner(const Wavefunction& a, const Wavefunction& b,
                                  const SpatialGrid& g) {
    std::complex<double> s = 0.0;
    for (int i = 0; i < g.n_points; ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s * g.dx();
}

/// <a| x |b> on the grid.
inline std::complex<double> dipole_element(const Wavefunction& a, const Wavefunction& b,
                                           const SpatialGrid& g) {
    std::complex<double> s = 0.0;
    for (int i = 0; i < g.n_points; ++i) s += std::conj(a.amp[i]) * g.x(i) * b.amp[i];
    return s * g.dx();
}

}  // namespace hhgqo

#endif
