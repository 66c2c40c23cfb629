// SPDX-License-Identifier: Apache-2.0
//
// Grid convolution (f * phi)(x) = integral phi(x - t) f(t) dt and
// convolution powers f^{*k}.
//
// Kernel weights are exact cell masses (CDF differences) when a CDF is
// available, with phi evaluated at cell midpoints; this keeps the constant
// signal exact to the truncation tail and the oscillatory error second
// order in the step. The exponential family runs as an order-1 recursion:
// cell masses are geometric, so the lattice sum telescopes.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/grid.hpp"
#include "sumlab/kernel.hpp"
#include "sumlab/signal.hpp"

namespace sumlab {

struct KernelLattice {
    double t_lo = 0.0;  // weights cover cells [t_lo + j*h, t_lo + (j+1)*h]
    double h = 0.0;
    std::vector<double> w;

    double weight_sum() const {
        KahanAccumulator a;
        for (double x : w) a.add(x);
        return a.value();
    }
};

/// Cell weights of the kernel over its truncated support, aligned to an
/// h-lattice. tail_tol is the allowed truncated tail mass.
inline KernelLattice cell_weights(const Kernel& k, double h, double tail_tol = 1e-8) {
    if (!(h > 0.0)) throw std::invalid_argument("cell_weights: step must be > 0");
    auto [lo, hi] = k.truncated_support(tail_tol);
    lo = std::floor(lo / h) * h;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h - 1e-12));
    KernelLattice lat;
    lat.t_lo = lo;
    lat.h = h;
    lat.w.resize(n);
    if (k.has_cdf()) {
        double prev = k.cdf(lo);
        for (std::size_t j = 0; j < n; ++j) {
            const double next = k.cdf(lo + double(j + 1) * h);
            lat.w[j] = next - prev;
            prev = next;
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) lat.w[j] = k.density(lo + (double(j) + 0.5) * h) * h;
    }
    return lat;
}

namespace detail {

// phi sampled at x_cut + (m - j) h - h/2 for the correlation below
inline std::vector<double> sample_for_convolution(const ContinuousSignal& phi, double x_first,
                                                  double h, std::size_t count) {
    std::vector<double> s(count);
    for (std::size_t p = 0; p < count; ++p) s[p] = phi(x_first + double(p) * h);
    return s;
}

// four-accumulator dot product; fixed association keeps runs bit-identical
inline double dot4(const double* a, const double* b, std::size_t n) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        s0 += a[j] * b[j];
        s1 += a[j + 1] * b[j + 1];
        s2 += a[j + 2] * b[j + 2];
        s3 += a[j + 3] * b[j + 3];
    }
    for (; j < n; ++j) s0 += a[j] * b[j];
    return ((s0 + s1) + (s2 + s3));
}

}  // namespace detail

/// (f * phi) sampled on [x_cut, x_max] with the grid step.
inline SampledSignal convolve(const Kernel& k, const ContinuousSignal& phi, const GridSpec& grid,
                              double tail_tol = 1e-8) {
    grid.validate();
    const double h = grid.step;
    const auto n_out = static_cast<std::size_t>(std::llround((grid.x_max - grid.x_cut) / h)) + 1;
    const std::string out_label = k.label + "*" + phi.label();

    if (k.family == KernelFamily::exponential) {
        // Cell masses are geometric (w_{j+1} = e^{-rh} w_j), so the lattice
        // sum telescopes to y(x) = e^{-rh} y(x-h) + (1 - e^{-rh}) phi(x - h/2):
        // O(1) per point, no support truncation. A burn-in run from
        // x_cut - 45/r leaves the zero start state below 1e-19; signals are
        // defined on all of R, so a negative start is fine.
        const double r = k.rate;
        const double lam = std::exp(-r * h);
        const double w0 = 1.0 - lam;
        const double burn = 45.0 / r;
        const auto m0 = static_cast<std::size_t>(std::llround(burn / h));
        const double x_start = grid.x_cut - double(m0) * h;
        double y = 0.0;
        for (std::size_t m = 1; m <= m0; ++m) y = lam * y + w0 * phi(x_start + double(m) * h - h / 2.0);
        std::vector<double> out(n_out);
        out[0] = y;
        for (std::size_t m = 1; m < n_out; ++m) {
            y = lam * y + w0 * phi(grid.x_cut + double(m) * h - h / 2.0);
            out[m] = y;
        }
        return SampledSignal(grid.x_cut, h, std::move(out), phi.bound() * 1.0000001 + 1e-12, out_label);
    }

    const KernelLattice lat = cell_weights(k, h, tail_tol);
    const double t_hi = lat.t_lo + double(lat.w.size()) * h;
    if (t_hi > grid.x_cut)
        throw std::invalid_argument("convolve: kernel truncation length " + std::to_string(t_hi) +
                                    " exceeds x_cut " + std::to_string(grid.x_cut));
    const std::size_t kk = lat.w.size();
    // arguments x_m - t_j lie on the lattice x_first + p h, p = 0 .. n_out+kk-2
    const double x_first = grid.x_cut - lat.t_lo - (double(kk) - 0.5) * h;
    const std::vector<double> s = detail::sample_for_convolution(phi, x_first, h, n_out + kk - 1);
    // reverse weights once so each output is a forward dot product
    std::vector<double> wrev(lat.w.rbegin(), lat.w.rend());
    std::vector<double> out(n_out);
    for (std::size_t m = 0; m < n_out; ++m) out[m] = detail::dot4(wrev.data(), s.data() + m, kk);
    double wsum = 0.0;
    for (double w : lat.w) wsum += std::fabs(w);
    return SampledSignal(grid.x_cut, h, std::move(out), phi.bound() * wsum + 1e-12, out_label);
}

/// f^{*k}. Exponential family and Gaussians close under convolution; other
/// kernels are powered by iterated grid self-convolution, and the result
/// must keep mass within 1e-5 of mass^k (no renormalization).
inline Kernel convolution_power(const Kernel& k, int power, double h = 1e-3,
                                double mass_tol = 1e-5) {
    if (power < 1) throw std::invalid_argument("convolution_power: k must be >= 1");
    if (power == 1) return k;
    if (k.family == KernelFamily::exponential) return kernels::erlang(k.rate, power);
    if (k.family == KernelFamily::erlang) return kernels::erlang(k.rate, k.shape * power);
    if (k.family == KernelFamily::gaussian) return kernels::gaussian(k.sigma * std::sqrt(double(power)));

    // grid self-convolution of the truncated density
    auto [lo, hi] = k.truncated_support(1e-10);
    auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = k.density(lo + (double(j) + 0.5) * h);
    std::vector<double> g = f;
    double g_lo = lo;
    for (int p = 2; p <= power; ++p) {
        std::vector<double> next(g.size() + f.size() - 1, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double gi = g[i] * h;
            if (gi == 0.0) continue;
            for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += gi * f[j];
        }
        g = std::move(next);
        g_lo += lo;
    }
    KahanAccumulator acc;
    for (double v : g) acc.add(v * h);
    const double want = std::pow(k.mass(), power);
    if (std::fabs(acc.value() - want) > mass_tol)
        throw std::runtime_error("convolution_power: mass drift " + std::to_string(acc.value()) +
                                 " vs " + std::to_string(want) + " for kernel '" + k.label + "'");
    // sample m of the discrete convolution sits at the sum of two cell
    // midpoints, i.e. t = g_lo + (m + 1) h
    std::vector<std::pair<double, double>> pts;
    pts.reserve(g.size() + 2);
    pts.emplace_back(g_lo, 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) pts.emplace_back(g_lo + double(j + 1) * h, g[j]);
    pts.emplace_back(g_lo + double(g.size() + 1) * h, 0.0);
    Kernel out = kernels::from_samples(std::move(pts), k.label + "^*" + std::to_string(power));
    out.nonnegative = k.nonnegative;
    return out;
}

}  // namespace sumlab
