// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, independent of the library's evaluation paths: plain
// composite-Simpson quadrature and brute-force window sums. Expected values
// in the tests are either produced by these at runtime or derived from
// closed forms restated here.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>

namespace oracle {

/// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// (1/theta) int_x^{x+theta} f, by Simpson.
inline double window_mean(const std::function<double(double)>& f, double x, double theta,
                          int n = 20000) {
    return simpson(f, x, x + theta, n) / theta;
}

/// Brute-force discrete logarithmic mean sum phi(i)/i / sum 1/i over [1, n].
inline double log_mean(const std::function<double(std::int64_t)>& phi, std::int64_t n) {
    double num = 0, den = 0, cn = 0, cd = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        auto add = [](double& s, double& c, double v) {
            const double y = v - c, t = s + y;
            c = (t - s) - y;
            s = t;
        };
        add(num, cn, phi(i) / double(i));
        add(den, cd, 1.0 / double(i));
    }
    return num / den;
}

/// Exponential-kernel transform 1/(1 + i xi) restated from the defining
/// integral; used to freeze amplitude constants.
inline std::complex<double> exp1_transform(double xi) {
    return 1.0 / std::complex<double>(1.0, xi);
}

}  // namespace oracle
