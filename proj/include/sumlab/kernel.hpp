// SPDX-License-Identifier: Apache-2.0
//
// L1 kernels with Fourier transforms and grid classification.
//
//   f_hat(xi) = integral f(x) e^{-i xi x} dx
//
// The library families (exponential, Erlang, box, Gaussian) carry closed
// forms for density, CDF and transform; anything else is integrated by the
// midpoint rule over a support truncated at prescribed tail mass.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/accumulate.hpp"

namespace sumlab {

enum class KernelFamily { exponential, erlang, box, gaussian, generic };

/// An L1 density with support descriptor and optional closed forms.
struct Kernel {
    std::string label;
    KernelFamily family = KernelFamily::generic;
    std::function<double(double)> density;
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
    /// Mass of density over [support_lo, t]; required for infinite supports.
    std::function<double(double)> cdf;
    /// Closed-form Fourier transform, when known.
    std::function<std::complex<double>(double)> transform;
    bool nonnegative = false;
    // family parameters (exponential/erlang rate and shape, box width, gaussian sigma)
    double rate = 0.0;
    int shape = 0;
    double width = 0.0;
    double sigma = 0.0;

    bool has_cdf() const { return static_cast<bool>(cdf); }
    bool has_transform() const { return static_cast<bool>(transform); }

    double mass() const;

    /// Smallest T with total tail mass outside [lo_T, hi_T] below tail_tol.
    /// Finite supports are returned as-is.
    std::pair<double, double> truncated_support(double tail_tol) const;
};

namespace detail {

// regularized lower incomplete gamma P(k, z) for integer k >= 1
inline double gamma_p_int(int k, double z) {
    if (z <= 0.0) return 0.0;
    double term = std::exp(-z);  // e^{-z} z^0 / 0!
    double tail = term;
    for (int j = 1; j < k; ++j) {
        term *= z / double(j);
        tail += term;
    }
    return 1.0 - tail;
}

inline double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

inline double bisect_cdf(const std::function<double(double)>& F, double lo, double target,
                         double hi_guess) {
    double hi = std::max(hi_guess, lo + 1.0);
    while (F(hi) < target && hi - lo < 1e9) hi = lo + (hi - lo) * 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (F(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace detail

inline double Kernel::mass() const {
    if (has_transform()) return transform(0.0).real();
    if (has_cdf()) {
        const double hi = std::isinf(support_hi) ? detail::bisect_cdf(cdf, support_lo, 1.0 - 1e-14, support_lo + 64.0)
                                                 : support_hi;
        return cdf(hi);
    }
    // finite support, numeric midpoint integral
    if (std::isinf(support_hi) || std::isinf(support_lo))
        throw std::runtime_error("kernel '" + label + "': infinite support without cdf");
    const double h = (support_hi - support_lo) / 262144.0;
    KahanAccumulator acc;
    for (std::size_t j = 0; j < 262144; ++j) acc.add(density(support_lo + (double(j) + 0.5) * h) * h);
    return acc.value();
}

inline std::pair<double, double> Kernel::truncated_support(double tail_tol) const {
    double lo = support_lo, hi = support_hi;
    const double m = mass();
    if (std::isinf(hi) || std::isinf(lo)) {
        if (!has_cdf())
            throw std::runtime_error("kernel '" + label + "': cannot truncate infinite support without cdf");
        const double each = tail_tol * std::max(m, 1e-300) / 2.0;
        if (std::isinf(lo)) {
            // mirror search on the left tail
            auto left_mass = [&](double t) { return cdf(t); };
            double a = -1.0;
            while (left_mass(a) > each && a > -1e9) a *= 2.0;
            double b = std::isinf(hi) ? 0.0 : hi;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (left_mass(mid) > each)
                    b = mid;
                else
                    a = mid;
            }
            lo = a;
        }
        if (std::isinf(hi))
            hi = detail::bisect_cdf(cdf, std::isinf(support_lo) ? lo : support_lo, m - each,
                                    (std::isinf(support_lo) ? lo : support_lo) + 16.0);
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Library kernels

namespace kernels {

/// f(t) = r e^{-r t} on [0, inf); f_hat(xi) = r / (r + i xi).
inline Kernel exponential(double r, std::string label = "") {
    if (!(r > 0.0)) throw std::invalid_argument("exponential kernel: rate must be > 0");
    Kernel k;
    k.label = label.empty() ? "exp(" + std::to_string(r) + ")" : std::move(label);
    k.family = KernelFamily::exponential;
    k.rate = r;
    k.shape = 1;
    k.density = [r](double t) { return t < 0.0 ? 0.0 : r * std::exp(-r * t); };
    k.support_lo = 0.0;
    k.cdf = [r](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-r * t); };
    k.transform = [r](double xi) { return std::complex<double>(r) / std::complex<double>(r, xi); };
    k.nonnegative = true;
    return k;
}

/// Erlang density r^k t^{k-1} e^{-rt} / (k-1)!; the k-th convolution power
/// of exponential(r). Transform (r/(r+i xi))^k.
inline Kernel erlang(double r, int k, std::string label = "") {
    if (!(r > 0.0) || k < 1) throw std::invalid_argument("erlang kernel: need rate > 0, k >= 1");
    if (k == 1) return exponential(r, std::move(label));
    Kernel ker;
    ker.label = label.empty() ? "erlang(" + std::to_string(r) + "," + std::to_string(k) + ")"
                              : std::move(label);
    ker.family = KernelFamily::erlang;
    ker.rate = r;
    ker.shape = k;
    double logfact = 0.0;
    for (int j = 2; j < k; ++j) logfact += std::log(double(j));
    ker.density = [r, k, logfact](double t) {
        if (t <= 0.0) return 0.0;
        return std::exp(double(k) * std::log(r) + double(k - 1) * std::log(t) - r * t - logfact);
    };
    ker.support_lo = 0.0;
    ker.cdf = [r, k](double t) { return detail::gamma_p_int(k, r * std::max(t, 0.0)); };
    ker.transform = [r, k](double xi) {
        return std::pow(std::complex<double>(r) / std::complex<double>(r, xi), k);
    };
    ker.nonnegative = true;
    return ker;
}

/// f = (1/a) 1_{[0,a]}; f_hat(xi) = (1 - e^{-i a xi}) / (i a xi).
inline Kernel box(double a, std::string label = "") {
    if (!(a > 0.0)) throw std::invalid_argument("box kernel: width must be > 0");
    Kernel k;
    k.label = label.empty() ? "box(" + std::to_string(a) + ")" : std::move(label);
    k.family = KernelFamily::box;
    k.width = a;
    k.density = [a](double t) { return (t >= 0.0 && t <= a) ? 1.0 / a : 0.0; };
    k.support_lo = 0.0;
    k.support_hi = a;
    k.cdf = [a](double t) { return std::clamp(t / a, 0.0, 1.0); };
    k.transform = [a](double xi) -> std::complex<double> {
        if (std::fabs(xi) < 1e-12) return {1.0, 0.0};
        const std::complex<double> iax(0.0, a * xi);
        return (1.0 - std::exp(-iax)) / iax;
    };
    k.nonnegative = true;
    return k;
}

/// Centered Gaussian; f_hat(xi) = e^{-sigma^2 xi^2 / 2}. Non-causal.
inline Kernel gaussian(double sigma = 1.0, std::string label = "") {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian kernel: sigma must be > 0");
    Kernel k;
    k.label = label.empty() ? "gaussian(" + std::to_string(sigma) + ")" : std::move(label);
    k.family = KernelFamily::gaussian;
    k.sigma = sigma;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::acos(-1.0)));
    k.density = [sigma, norm](double t) { return norm * std::exp(-t * t / (2.0 * sigma * sigma)); };
    k.support_lo = -std::numeric_limits<double>::infinity();
    k.cdf = [sigma](double t) { return detail::normal_cdf(t / sigma); };
    k.transform = [sigma](double xi) {
        return std::complex<double>(std::exp(-sigma * sigma * xi * xi / 2.0), 0.0);
    };
    k.nonnegative = true;
    return k;
}

/// Piecewise-linear density through (t, value) samples; CSV kernels land here.
inline Kernel from_samples(std::vector<std::pair<double, double>> pts, std::string label = "sampled") {
    if (pts.size() < 2) throw std::invalid_argument("sampled kernel: need at least two points");
    std::sort(pts.begin(), pts.end());
    bool nonneg = true;
    for (auto& [t, v] : pts) nonneg = nonneg && v >= 0.0;
    auto knots = std::make_shared<std::vector<std::pair<double, double>>>(std::move(pts));
    // exact prefix integrals of the linear interpolant at the knots
    auto prefix = std::make_shared<std::vector<double>>(knots->size(), 0.0);
    for (std::size_t i = 1; i < knots->size(); ++i) {
        const auto& [t0, v0] = (*knots)[i - 1];
        const auto& [t1, v1] = (*knots)[i];
        (*prefix)[i] = (*prefix)[i - 1] + 0.5 * (v0 + v1) * (t1 - t0);
    }
    Kernel k;
    k.label = std::move(label);
    k.family = KernelFamily::generic;
    k.support_lo = knots->front().first;
    k.support_hi = knots->back().first;
    k.nonnegative = nonneg;
    k.density = [knots](double t) -> double {
        if (t <= knots->front().first || t >= knots->back().first) {
            if (t == knots->front().first) return knots->front().second;
            if (t == knots->back().first) return knots->back().second;
            return 0.0;
        }
        auto it = std::upper_bound(knots->begin(), knots->end(), std::make_pair(t, 1e308));
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *std::prev(it);
        const double f = (t - t0) / (t1 - t0);
        return v0 * (1.0 - f) + v1 * f;
    };
    k.cdf = [knots, prefix](double t) -> double {
        if (t <= knots->front().first) return 0.0;
        if (t >= knots->back().first) return prefix->back();
        auto it = std::upper_bound(knots->begin(), knots->end(), std::make_pair(t, 1e308));
        const std::size_t i = std::size_t(it - knots->begin());
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *std::prev(it);
        const double f = (t - t0) / (t1 - t0);
        const double vt = v0 * (1.0 - f) + v1 * f;
        return (*prefix)[i - 1] + 0.5 * (v0 + vt) * (t - t0);
    };
    return k;
}

}  // namespace kernels

// ---------------------------------------------------------------------------
// Fourier transform and classification

/// Closed form when available, else midpoint quadrature over the truncated
/// support (tail mass <= 1e-8).
inline std::complex<double> fourier_transform(const Kernel& k, double xi, double quad_step = 1e-3) {
    if (k.has_transform()) return k.transform(xi);
    const auto [lo, hi] = k.truncated_support(1e-8);
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / quad_step));
    const double h = (hi - lo) / double(n);
    KahanAccumulator re, im;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = lo + (double(j) + 0.5) * h;
        const double d = k.density(t) * h;
        re.add(d * std::cos(xi * t));
        im.add(-d * std::sin(xi * t));
    }
    return {re.value(), im.value()};
}

struct ClassifyTolerances {
    double normalize_tol = 1e-6;
    double zero_tol = 1e-4;       // |f_hat| below this at an interior local minimum -> zero candidate
    double ambiguity_factor = 100.0;  // local minima inside [zero_tol, factor*zero_tol) are ambiguous
    double modulus_margin = 1e-6;     // values in (1 - margin, 1) are flagged near-one
    int density_samples = 4096;
};

struct KernelClass {
    bool nonnegative = false;
    bool normalized = false;
    bool flat = false;            // nonnegative and normalized
    bool strict_modulus = false;  // sup over grid minus {0} of |f_hat| < 1
    bool wiener = false;          // no zero candidates on the grid
    std::vector<double> zero_candidates;     // interior local minima with |f_hat| < zero_tol
    std::vector<double> ambiguous_minima;    // interior local minima in the ambiguity band
    std::vector<double> near_one;            // grid points with |f_hat| in (1 - margin, 1)
    double max_modulus_off_zero = 0.0;
    double min_modulus = 0.0;
};

/// Symmetric grid over [-xi_max, xi_max] excluding 0.
inline std::vector<double> make_xi_grid(double xi_max = 8.0, double step = 1e-3) {
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor(xi_max / step + 1e-9));
    g.reserve(2 * n);
    for (std::size_t j = n; j >= 1; --j) g.push_back(-double(j) * step);
    for (std::size_t j = 1; j <= n; ++j) g.push_back(double(j) * step);
    return g;
}

/// Grid evidence for the kernel classes. Zero detection looks for interior
/// local minima of |f_hat| below zero_tol; boundary decay (a Gaussian tail
/// running off the grid) is not treated as a zero. Candidates are evidence,
/// never a proof of Z(f).
inline KernelClass classify(const Kernel& k, const std::vector<double>& xi_grid,
                            const ClassifyTolerances& tol = {}) {
    if (xi_grid.size() < 3) throw std::invalid_argument("classify: xi grid too small");
    for (double xi : xi_grid)
        if (xi == 0.0) throw std::invalid_argument("classify: xi grid must exclude 0");

    KernelClass out;

    // nonnegativity by sampling the truncated support
    const auto [lo, hi] = k.truncated_support(1e-8);
    bool nonneg = true;
    for (int j = 0; j < tol.density_samples; ++j) {
        const double t = lo + (hi - lo) * (double(j) + 0.5) / double(tol.density_samples);
        if (k.density(t) < 0.0) { nonneg = false; break; }
    }
    out.nonnegative = nonneg && k.nonnegative;

    const double mass0 = std::abs(fourier_transform(k, 0.0));
    out.normalized = std::fabs(mass0 - 1.0) <= tol.normalize_tol;
    out.flat = out.nonnegative && out.normalized;

    std::vector<double> mod(xi_grid.size());
    for (std::size_t i = 0; i < xi_grid.size(); ++i) mod[i] = std::abs(fourier_transform(k, xi_grid[i]));

    out.max_modulus_off_zero = *std::max_element(mod.begin(), mod.end());
    out.min_modulus = *std::min_element(mod.begin(), mod.end());
    out.strict_modulus = out.max_modulus_off_zero < 1.0;
    for (std::size_t i = 0; i < mod.size(); ++i)
        if (mod[i] > 1.0 - tol.modulus_margin && mod[i] < 1.0) out.near_one.push_back(xi_grid[i]);

    for (std::size_t i = 1; i + 1 < mod.size(); ++i) {
        // skip the artificial gap at 0 between the two half-grids
        if (xi_grid[i - 1] < 0.0 && xi_grid[i + 1] > 0.0) continue;
        const bool local_min = mod[i] <= mod[i - 1] && mod[i] <= mod[i + 1];
        if (!local_min) continue;
        if (mod[i] < tol.zero_tol)
            out.zero_candidates.push_back(xi_grid[i]);
        else if (mod[i] < tol.zero_tol * tol.ambiguity_factor)
            out.ambiguous_minima.push_back(xi_grid[i]);
    }
    out.wiener = out.zero_candidates.empty() && out.min_modulus > 0.0;
    return out;
}

}  // namespace sumlab
