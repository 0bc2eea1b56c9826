#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace optomech {

// Small Nelder-Mead used for the numeric fallbacks inside the library.
// Deterministic for a given seed simplex.
struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step, double xtol = 1e-12,
                                    double ftol = 1e-15, int max_iter = 20000) {
    const size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    std::vector<double> val(n + 1);
    for (size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);

    auto order = [&] {
        std::vector<size_t> idx(n + 1);
        for (size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return val[a] < val[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (size_t i = 0; i <= n; ++i) { p2[i] = pts[idx[i]]; v2[i] = val[idx[i]]; }
        pts.swap(p2);
        val.swap(v2);
    };

    NelderMeadResult res;
    int it = 0;
    for (; it < max_iter; ++it) {
        order();
        double spread = 0.0;
        for (size_t i = 0; i < n; ++i)
            spread = std::max(spread, std::abs(pts[n][i] - pts[0][i]));
        if (spread < xtol && std::abs(val[n] - val[0]) < ftol) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (pts[n][j] - centroid[j]);
            return p;
        };
        std::vector<double> xr = blend(-1.0);
        double fr = f(xr);
        if (fr < val[0]) {
            std::vector<double> xe = blend(-2.0);
            double fe = f(xe);
            if (fe < fr) { pts[n] = xe; val[n] = fe; }
            else { pts[n] = xr; val[n] = fr; }
        } else if (fr < val[n - 1]) {
            pts[n] = xr;
            val[n] = fr;
        } else {
            std::vector<double> xc = blend(0.5);
            double fc = f(xc);
            if (fc < val[n]) { pts[n] = xc; val[n] = fc; }
            else {
                for (size_t i = 1; i <= n; ++i) {
                    for (size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.value = val[0];
    res.iterations = it;
    return res;
}

}  // namespace optomech
