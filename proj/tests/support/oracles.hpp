#pragma once

// Test-side oracles, kept independent of the library's own numerics: a plain
// grid scan with coordinate-descent polish for minimization, and central
// finite differences for derivative checks.

#include <cmath>
#include <functional>
#include <vector>

namespace test_oracle {

using Fn2 = std::function<double(double, double)>;

struct GridPolishResult {
    double x = 0.0, y = 0.0, value = 0.0;
};

// 2-D minimization: coarse grid scan followed by shrinking coordinate
// descent. Deliberately simple and derivative-free.
inline GridPolishResult grid_polish(const Fn2& f, double x_lo, double x_hi, double y_lo,
                                    double y_hi, int grid = 200, double tol = 1e-12) {
    GridPolishResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / grid;
        for (int j = 0; j <= grid; ++j) {
            double y = y_lo + (y_hi - y_lo) * j / grid;
            double v = f(x, y);
            if (v < best.value) { best = {x, y, v}; }
        }
    }
    double hx = (x_hi - x_lo) / grid, hy = (y_hi - y_lo) / grid;
    while (hx > tol || hy > tol) {
        bool moved = false;
        for (int dir = 0; dir < 4; ++dir) {
            double x = best.x + (dir == 0 ? hx : dir == 1 ? -hx : 0.0);
            double y = best.y + (dir == 2 ? hy : dir == 3 ? -hy : 0.0);
            double v = f(x, y);
            if (v < best.value) {
                best = {x, y, v};
                moved = true;
            }
        }
        if (!moved) {
            hx *= 0.5;
            hy *= 0.5;
        }
    }
    return best;
}

inline double fd_partial_x(const Fn2& f, double x, double y, double h = 1e-6) {
    return (f(x + h, y) - f(x - h, y)) / (2.0 * h);
}

inline double fd_partial_y(const Fn2& f, double x, double y, double h = 1e-6) {
    return (f(x, y + h) - f(x, y - h)) / (2.0 * h);
}

inline double fd_gradient_norm(const Fn2& f, double x, double y, double h = 1e-6) {
    double gx = fd_partial_x(f, x, y, h);
    double gy = fd_partial_y(f, x, y, h);
    return std::sqrt(gx * gx + gy * gy);
}

// 2x2 numeric Hessian eigenvalues (for stationary-point classification).
inline std::pair<double, double> fd_hessian_eigs(const Fn2& f, double x, double y,
                                                 double h = 1e-4) {
    double fxx = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
    double fyy = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
    double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
                 (4.0 * h * h);
    double tr = fxx + fyy;
    double det = fxx * fyy - fxy * fxy;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

}  // namespace test_oracle
