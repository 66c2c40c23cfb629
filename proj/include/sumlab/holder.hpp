// SPDX-License-Identifier: Apache-2.0
//
// Cesaro / Hölder iterates, the C_infinity closed form, the logarithmic
// method, the Banach-limit envelope, and the V / V1 bridges to the
// multiplicative half-line.
//
//   (C phi)(n)      = (1/n) sum_{i<=n} phi(i)
//   Cbar_k          = limsup of C^k phi over the tail
//   Cbar_inf(phi)   = lim_theta limsup_n (1/log theta) sum_{i in [n, theta n]} phi(i)/i
//   logarithmic     = lim_n (1/log n) sum_{i<=n} phi(i)/i
//   Bbar(phi)       = lim_k limsup_n (1/k) sum_{i=n}^{n+k-1} phi(i)
//
// Window values are self-normalized by the measured weight mass (the ratio
// sum phi(i)/i over sum 1/i), which makes constants exact and changes
// nothing in the limit. Scans run on stored prefixes; the reported extreme
// windows are recomputed with compensated summation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/accumulate.hpp"
#include "sumlab/functionals.hpp"
#include "sumlab/grid.hpp"
#include "sumlab/signal.hpp"

namespace sumlab {

using DiscreteEstimate = FunctionalEstimate;

namespace detail {

// values[i] = phi(i) for i in [1, n_max]; index 0 unused
inline std::vector<double> tabulate(const DiscreteSignal& phi, std::int64_t n_max) {
    std::vector<double> v(std::size_t(n_max) + 1, 0.0);
    for (std::int64_t i = 1; i <= n_max; ++i) v[std::size_t(i)] = phi(i);
    return v;
}

inline void cesaro_pass(std::vector<double>& v) {
    KahanAccumulator run;
    for (std::size_t i = 1; i < v.size(); ++i) {
        run.add(v[i]);
        v[i] = run.value() / double(i);
    }
}

// Kahan window sum of values[i]*w(i) over [a, b]
template <typename W>
double window_sum(const std::vector<double>& v, std::int64_t a, std::int64_t b, W w) {
    KahanAccumulator acc;
    for (std::int64_t i = a; i <= b; ++i) acc.add(v[std::size_t(i)] * w(i));
    return acc.value();
}

}  // namespace detail

/// One Cesaro pass as a signal: (C phi)(n) = (1/n) sum_{i<=n} phi(i).
inline DiscreteSignal cesaro(const DiscreteSignal& phi, std::int64_t n_max) {
    if (n_max < 1) throw std::invalid_argument("cesaro: n_max must be >= 1");
    auto vals = std::make_shared<std::vector<double>>(detail::tabulate(phi, n_max));
    detail::cesaro_pass(*vals);
    return DiscreteSignal(
        [vals, n_max](std::int64_t n) {
            if (n > n_max) throw std::out_of_range("cesaro signal beyond n_max");
            return (*vals)[std::size_t(n)];
        },
        phi.bound(), "C[" + phi.label() + "]");
}

/// limsup / liminf of C^k phi over [n_cut, n_max], with nested-tail trace.
inline DiscreteEstimate holder_upper(const DiscreteSignal& phi, int k, const DiscreteGrid& grid,
                                     const Tolerances& tol = {}) {
    grid.validate();
    if (k < 1) throw std::invalid_argument("holder_upper: k must be >= 1");
    std::vector<double> v = detail::tabulate(phi, grid.n_max);
    for (int p = 0; p < k; ++p) detail::cesaro_pass(v);
    DiscreteEstimate est;
    for (int third = 0; third < 3; ++third) {
        const std::int64_t start = grid.n_cut + (grid.n_max - grid.n_cut) * third / 3;
        double s = -1e308, i = 1e308;
        for (std::int64_t n = start; n <= grid.n_max; ++n) {
            s = std::max(s, v[std::size_t(n)]);
            i = std::min(i, v[std::size_t(n)]);
        }
        est.trace.emplace_back(double(start), s);
        est.lower_trace.emplace_back(double(start), i);
    }
    est.value = est.trace.front().second;
    est.companion_lower = est.lower_trace.front().second;
    est.stability_residual = std::fabs(est.trace.front().second - est.trace.back().second);
    est.unstable = est.stability_residual > tol.instability;
    return est;
}

namespace detail {

struct CInfSweep {
    std::vector<double> theta;           // as double, for traces
    std::vector<double> upper, lower;    // per-theta window extremes
    std::vector<std::int64_t> arg_upper, arg_lower;
};

// scan of the self-normalized windows over n in [n_cut, n_max/theta],
// then exact recomputation of the extreme windows
inline CInfSweep c_inf_sweep(const std::vector<double>& phi_over_i_prefix,
                             const std::vector<double>& harmonic_prefix,
                             const std::vector<double>& phi_vals, const DiscreteGrid& grid) {
    CInfSweep s;
    const std::int64_t n_max = grid.n_max;
    for (std::int64_t theta : grid.theta_grid) {
        double sup = -1e308, inf = 1e308;
        std::int64_t asup = grid.n_cut, ainf = grid.n_cut;
        for (std::int64_t n = grid.n_cut; n * theta <= n_max; ++n) {
            const std::int64_t m = n * theta;
            const double num = phi_over_i_prefix[std::size_t(m)] - phi_over_i_prefix[std::size_t(n - 1)];
            const double den = harmonic_prefix[std::size_t(m)] - harmonic_prefix[std::size_t(n - 1)];
            const double val = num / den;
            if (val > sup) { sup = val; asup = n; }
            if (val < inf) { inf = val; ainf = n; }
        }
        auto exact = [&](std::int64_t n) {
            const std::int64_t m = n * theta;
            const double num =
                window_sum(phi_vals, n, m, [&](std::int64_t i) { return 1.0 / double(i); });
            KahanAccumulator den;
            for (std::int64_t i = n; i <= m; ++i) den.add(1.0 / double(i));
            return num / den.value();
        };
        s.theta.push_back(double(theta));
        s.upper.push_back(exact(asup));
        s.lower.push_back(exact(ainf));
        s.arg_upper.push_back(asup);
        s.arg_lower.push_back(ainf);
    }
    return s;
}

struct CInfData {
    CInfSweep sweep;
    DiscreteEstimate upper;
    DiscreteEstimate lower;
};

inline CInfData c_inf_data(const DiscreteSignal& phi, const DiscreteGrid& grid, const Tolerances& tol) {
    grid.validate();
    const std::vector<double> vals = detail::tabulate(phi, grid.n_max);
    std::vector<double> wp(vals.size(), 0.0), hp(vals.size(), 0.0);
    KahanAccumulator aw, ah;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        const double w = 1.0 / double(i);
        aw.add(vals[i] * w);
        ah.add(w);
        wp[i] = aw.value();
        hp[i] = ah.value();
    }
    CInfData d;
    d.sweep = c_inf_sweep(wp, hp, vals, grid);
    for (std::size_t j = 0; j < d.sweep.theta.size(); ++j) {
        d.upper.trace.emplace_back(d.sweep.theta[j], d.sweep.upper[j]);
        d.lower.trace.emplace_back(d.sweep.theta[j], d.sweep.lower[j]);
        d.upper.lower_trace.emplace_back(d.sweep.theta[j], d.sweep.lower[j]);
    }
    d.upper.value = d.sweep.upper.back();
    d.upper.companion_lower = d.sweep.lower.back();
    d.lower.value = d.sweep.lower.back();
    d.lower.companion_lower = d.sweep.lower.back();
    if (d.sweep.theta.size() >= 2) {
        d.upper.stability_residual =
            std::fabs(d.sweep.upper.back() - d.sweep.upper[d.sweep.upper.size() - 2]);
        d.lower.stability_residual =
            std::fabs(d.sweep.lower.back() - d.sweep.lower[d.sweep.lower.size() - 2]);
    }
    d.upper.unstable = d.upper.stability_residual > tol.instability;
    d.lower.unstable = d.lower.stability_residual > tol.instability;
    return d;
}

}  // namespace detail

/// Closed-form C_infinity upper estimate (value at the last theta).
inline DiscreteEstimate c_infinity_upper(const DiscreteSignal& phi, const DiscreteGrid& grid,
                                         const Tolerances& tol = {}) {
    return detail::c_inf_data(phi, grid, tol).upper;
}

inline DiscreteEstimate c_infinity_lower(const DiscreteSignal& phi, const DiscreteGrid& grid,
                                         const Tolerances& tol = {}) {
    return detail::c_inf_data(phi, grid, tol).lower;
}

/// C_infinity summability.
///
/// Certification uses two facts that hold for every window length, not just
/// the last one: squaring a window averages two smaller ones, so each
/// measured gap A(theta_j) - B(theta_j) bounds the true C_inf gap from
/// above (the verdict takes the tightest certificate in the sweep); and
/// uniform convergence forces the all-n modulus to decay like C / log theta
/// with C on the order of the signal bound, which is checked as a decay
/// certificate rather than an absolute threshold (an absolute threshold at
/// desk scale would need log theta in the hundreds).
inline SummabilityVerdict c_infinity_test(const DiscreteSignal& phi, const DiscreteGrid& grid,
                                          double eps, bool full_scan = false,
                                          const Tolerances& tol = {}) {
    const auto d = detail::c_inf_data(phi, grid, tol);
    SummabilityVerdict v;
    v.method = "C_infinity";

    // tightest gap certificate over the sweep
    std::size_t jstar = 0;
    double best_gap = 1e308;
    for (std::size_t j = 0; j < d.sweep.theta.size(); ++j) {
        const double g = d.sweep.upper[j] - d.sweep.lower[j];
        if (g < best_gap) { best_gap = g; jstar = j; }
    }
    v.gap = best_gap;
    v.alpha = 0.5 * (d.sweep.upper[jstar] + d.sweep.lower[jstar]);

    // uniformity modulus over a geometric n-grid from n = 1 (full scan on request)
    const std::vector<double> vals = detail::tabulate(phi, grid.n_max);
    std::vector<double> wp(vals.size(), 0.0), hp(vals.size(), 0.0);
    {
        KahanAccumulator aw, ah;
        for (std::size_t i = 1; i < vals.size(); ++i) {
            aw.add(vals[i] / double(i));
            ah.add(1.0 / double(i));
            wp[i] = aw.value();
            hp[i] = ah.value();
        }
    }
    double worst_certificate = 0.0;
    for (std::int64_t theta : grid.theta_grid) {
        double mod = 0.0;
        auto probe = [&](std::int64_t n) {
            const std::int64_t m = n * theta;
            if (m > grid.n_max) return;
            const double val = (wp[std::size_t(m)] - wp[std::size_t(n - 1)]) /
                               (hp[std::size_t(m)] - hp[std::size_t(n - 1)]);
            mod = std::max(mod, std::fabs(val - v.alpha));
        };
        if (full_scan) {
            for (std::int64_t n = 1; n * theta <= grid.n_max; ++n) probe(n);
        } else {
            for (std::int64_t n = 1; n * theta <= grid.n_max; n *= 2) probe(n);
        }
        v.uniformity_modulus.emplace_back(double(theta), mod);
        worst_certificate =
            std::max(worst_certificate, mod * std::max(1.0, std::log(double(theta))));
    }
    const double certificate_bound = 4.0 * std::max(phi.bound(), 1e-12);
    if (v.gap > eps) {
        v.status = SummabilityVerdict::Status::not_summable;
        v.reason = "C_inf gap " + std::to_string(v.gap) + " above eps at every theta";
    } else if (worst_certificate > certificate_bound) {
        v.status = SummabilityVerdict::Status::inconclusive;
        v.reason = "uniformity modulus not decaying like C/log(theta)";
    } else {
        v.status = SummabilityVerdict::Status::summable;
    }
    return v;
}

/// Tail limsup / liminf of the logarithmic means L(n); the trace is a
/// geometric n-sweep ending at exactly n_max, so trace.back() is the plain
/// estimate of the limit.
inline DiscreteEstimate logarithmic_method(const DiscreteSignal& phi, const DiscreteGrid& grid,
                                           const Tolerances& tol = {}) {
    grid.validate();
    if (grid.n_max < 2) throw std::invalid_argument("logarithmic_method: n_max must be >= 2");
    const std::vector<double> vals = detail::tabulate(phi, grid.n_max);
    KahanAccumulator num, den;
    double sup = -1e308, inf = 1e308;
    DiscreteEstimate est;
    std::int64_t next_trace = 1;
    for (std::int64_t i = 1; i <= grid.n_max; ++i) {
        num.add(vals[std::size_t(i)] / double(i));
        den.add(1.0 / double(i));
        const double L = num.value() / den.value();
        if (i >= grid.n_cut) {
            sup = std::max(sup, L);
            inf = std::min(inf, L);
        }
        if (i == next_trace || i == grid.n_max) {
            est.trace.emplace_back(double(i), L);
            next_trace *= 2;
        }
    }
    est.value = sup;
    est.companion_lower = inf;
    est.stability_residual = sup - inf;
    est.unstable = est.stability_residual > tol.instability;
    return est;
}

/// Banach-limit envelope: k-sweep of sliding-window extremes over the tail.
/// The reported extreme windows are recomputed with compensated summation.
inline DiscreteEstimate banach_upper(const DiscreteSignal& phi, const DiscreteGrid& grid,
                                     const Tolerances& tol = {}) {
    grid.validate();
    const std::vector<double> vals = detail::tabulate(phi, grid.n_max);
    std::vector<double> prefix(vals.size(), 0.0);
    {
        KahanAccumulator acc;
        for (std::size_t i = 1; i < vals.size(); ++i) {
            acc.add(vals[i]);
            prefix[i] = acc.value();
        }
    }
    DiscreteEstimate est;
    for (std::int64_t k : grid.banach_k_grid) {
        double sup = -1e308, inf = 1e308;
        std::int64_t asup = grid.n_cut, ainf = grid.n_cut;
        for (std::int64_t n = grid.n_cut; n + k - 1 <= grid.n_max; ++n) {
            const double s = (prefix[std::size_t(n + k - 1)] - prefix[std::size_t(n - 1)]) / double(k);
            if (s > sup) { sup = s; asup = n; }
            if (s < inf) { inf = s; ainf = n; }
        }
        auto exact = [&](std::int64_t n) {
            return detail::window_sum(vals, n, n + k - 1, [](std::int64_t) { return 1.0; }) / double(k);
        };
        est.trace.emplace_back(double(k), exact(asup));
        est.lower_trace.emplace_back(double(k), exact(ainf));
    }
    est.value = est.trace.back().second;
    est.companion_lower = est.lower_trace.back().second;
    if (est.trace.size() >= 2)
        est.stability_residual =
            std::fabs(est.trace.back().second - est.trace[est.trace.size() - 2].second);
    est.unstable = est.stability_residual > tol.instability;
    return est;
}

// ---------------------------------------------------------------------------
// Bridges between l_inf and the multiplicative half-line

/// (V phi)(x) = phi([x + 1]): the step-function extension.
inline MultiplicativeSignal bridge_V(const DiscreteSignal& phi) {
    auto at_index = [phi](double t) {
        if (!(t > 0.0)) throw std::out_of_range("bridge_V: x must be > 0");
        if (t > 9.0e15) throw std::out_of_range("bridge_V: x too large for an integer index");
        return phi(static_cast<std::int64_t>(std::floor(t + 1.0)));
    };
    return MultiplicativeSignal([at_index](double x) { return at_index(x); },
                                [at_index](double u) { return at_index(std::exp(u)); }, phi.bound(),
                                "V[" + phi.label() + "]");
}

/// (V1 phi)(n) = integral of phi over [n-1, n], midpoint rule.
inline DiscreteSignal bridge_V1(const MultiplicativeSignal& phi, double step = 1e-3) {
    return DiscreteSignal(
        [phi, step](std::int64_t n) {
            const double a = double(n - 1);
            const auto cells = static_cast<std::size_t>(std::llround(1.0 / step));
            KahanAccumulator acc;
            for (std::size_t j = 0; j < cells; ++j) {
                const double t = a + (double(j) + 0.5) / double(cells);
                acc.add(phi(t > 0.0 ? t : 0.5 / double(cells)) / double(cells));
            }
            return acc.value();
        },
        phi.bound(), "V1[" + phi.label() + "]");
}

}  // namespace sumlab
