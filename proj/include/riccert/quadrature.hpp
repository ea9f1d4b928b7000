#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace riccert {

/// Uniform grid of n points on [a, b] (n >= 2), endpoints included.
inline std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (n < 2) throw std::invalid_argument("uniform_grid needs at least 2 points");
    std::vector<double> g(n);
    double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + h * static_cast<double>(i);
    g.back() = b;
    return g;
}

/// Running integral of samples f on a uniform grid by composite Simpson.
/// Even indices use the standard panel rule; odd indices the half-panel
/// (5f0 + 8f1 - f2)h/12 formula, both third-order accurate per panel.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    std::size_t n = f.size();
    std::vector<double> c(n, 0.0);
    if (n < 2) return c;
    if (n == 2) {
        c[1] = 0.5 * h * (f[0] + f[1]);
        return c;
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (i % 2 == 1) {
            if (i + 1 < n)
                c[i] = c[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
            else  // trailing half-panel, backward variant
                c[i] = c[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
        } else {
            c[i] = c[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        }
    }
    return c;
}

/// Composite Simpson integral of fn over [a, b] with n grid points.
inline double simpson(const std::function<double(double)>& fn, double a, double b,
                      std::size_t n = 1001) {
    auto grid = uniform_grid(a, b, n);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = fn(grid[i]);
    return cumulative_simpson(f, grid[1] - grid[0]).back();
}

}  // namespace riccert
