// SPDX-License-Identifier: Apache-2.0
//
// Continuous-side sublinear functionals.
//
//   F_upper(phi)   = limsup_{x->inf} (f * phi)(x)
//   F_upper_k(phi) = limsup_{x->inf} (f^{*k} * phi)(x)
//   F_infinity     = lim_k F_upper_k
//   P_upper(phi)   = lim_{theta->inf} limsup_{x->inf} (1/theta) int_x^{x+theta} phi
//
// limsup_{x->inf} is approximated by the sup over the tail window
// [x_cut, x_max]; nested-tail sups are traced so a non-stabilized limit is
// visible instead of silently wrong. The outer limits take the last value
// of the theta / k sweep, never an extrapolation.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/convolution.hpp"
#include "sumlab/grid.hpp"
#include "sumlab/kernel.hpp"
#include "sumlab/prefix.hpp"
#include "sumlab/report.hpp"
#include "sumlab/signal.hpp"

namespace sumlab {

/// A limit estimate: the value, its liminf companion, the sweep trace that
/// produced it, and a last-step stability residual.
struct FunctionalEstimate {
    double value = 0.0;
    double companion_lower = 0.0;
    std::vector<std::pair<double, double>> trace;        // (parameter, upper value)
    std::vector<std::pair<double, double>> lower_trace;  // (parameter, lower value)
    double stability_residual = 0.0;
    bool unstable = false;
    std::string note;

    double midpoint() const { return 0.5 * (value + companion_lower); }
    double gap() const { return value - companion_lower; }
};

struct SummabilityVerdict {
    enum class Status { summable, not_summable, inconclusive };
    Status status = Status::inconclusive;
    std::string method;
    double alpha = 0.0;
    double gap = 0.0;
    std::vector<std::pair<double, double>> uniformity_modulus;  // (theta, sup deviation)
    std::string reason;

    bool summable() const { return status == Status::summable; }
};

inline const char* to_string(SummabilityVerdict::Status s) {
    switch (s) {
        case SummabilityVerdict::Status::summable: return "summable";
        case SummabilityVerdict::Status::not_summable: return "not_summable";
        default: return "inconclusive";
    }
}

namespace detail {

// sup and inf of sampled values over nested tail cuts (full tail plus the
// last two thirds), packaged as upper/lower estimates
inline std::pair<FunctionalEstimate, FunctionalEstimate> tail_extremes(const SampledSignal& y,
                                                                       double instability_tol) {
    const auto& v = y.values();
    const std::size_t n = v.size();
    if (n < 3) throw std::invalid_argument("tail_extremes: too few samples");
    FunctionalEstimate up, lo;
    for (int third = 0; third < 3; ++third) {
        const std::size_t start = n * std::size_t(third) / 3;
        double s = -1e308, i = 1e308;
        for (std::size_t m = start; m < n; ++m) {
            s = std::max(s, v[m]);
            i = std::min(i, v[m]);
        }
        const double cut = y.x_lo() + double(start) * y.step();
        up.trace.emplace_back(cut, s);
        lo.trace.emplace_back(cut, i);
    }
    up.value = up.trace.front().second;
    lo.value = lo.trace.front().second;
    up.companion_lower = lo.value;
    lo.companion_lower = lo.value;
    up.stability_residual = std::fabs(up.trace.front().second - up.trace.back().second);
    lo.stability_residual = std::fabs(lo.trace.front().second - lo.trace.back().second);
    up.unstable = up.stability_residual > instability_tol;
    lo.unstable = lo.stability_residual > instability_tol;
    // expose the companion on the upper estimate; callers mostly use that one
    up.lower_trace = lo.trace;
    return {up, lo};
}

inline void require_normalized(const Kernel& k, double tol = 1e-6) {
    const double m = k.mass();
    if (std::fabs(m - 1.0) > tol)
        throw std::invalid_argument("kernel '" + k.label + "' is not normalized (mass " +
                                    std::to_string(m) + ")");
}

inline void require_flat(const Kernel& k) {
    require_normalized(k);
    if (!k.nonnegative)
        throw std::invalid_argument("kernel '" + k.label + "' is not flagged nonnegative");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// F functionals

inline FunctionalEstimate upper_F(const Kernel& k, const ContinuousSignal& phi, const GridSpec& grid,
                                  const Tolerances& tol = {}) {
    detail::require_normalized(k);
    return detail::tail_extremes(convolve(k, phi, grid), tol.instability).first;
}

inline FunctionalEstimate lower_F(const Kernel& k, const ContinuousSignal& phi, const GridSpec& grid,
                                  const Tolerances& tol = {}) {
    detail::require_normalized(k);
    return detail::tail_extremes(convolve(k, phi, grid), tol.instability).second;
}

/// upper_F with the closed-form (or grid) convolution power f^{*k}; a single
/// convolution, not k nested ones.
inline FunctionalEstimate upper_F_k(const Kernel& k, int power, const ContinuousSignal& phi,
                                    const GridSpec& grid, const Tolerances& tol = {}) {
    if (power < 1) throw std::invalid_argument("upper_F_k: k must be >= 1");
    detail::require_normalized(k);
    const Kernel kp = convolution_power(k, power);
    return detail::tail_extremes(convolve(kp, phi, grid), tol.instability).first;
}

/// k-sweep of F_upper_k / F_lower_k until |F_k - F_{k+1}| <= eps or k_max.
/// Value is the last F_upper_k; the sweep must be nonincreasing within the
/// monotone slack (an increase beyond it signals quadrature breakdown).
inline FunctionalEstimate F_infinity(const Kernel& k, const ContinuousSignal& phi,
                                     const GridSpec& grid, int k_max = 10, double eps = 1e-3,
                                     const Tolerances& tol = {}) {
    if (k_max < 4) throw std::invalid_argument("F_infinity: k_max must be >= 4");
    detail::require_flat(k);
    FunctionalEstimate est;
    double prev_up = 0.0, prev_lo = 0.0;
    for (int j = 1; j <= k_max; ++j) {
        const Kernel kp = convolution_power(k, j);
        auto [up, lo] = detail::tail_extremes(convolve(kp, phi, grid), tol.instability);
        est.trace.emplace_back(double(j), up.value);
        est.lower_trace.emplace_back(double(j), lo.value);
        if (j > 1) {
            if (up.value > prev_up + tol.monotone_slack || lo.value < prev_lo - tol.monotone_slack)
                throw std::runtime_error("F_infinity: non-monotone k sweep for '" + phi.label() +
                                         "' at k=" + std::to_string(j));
            est.stability_residual = std::max(std::fabs(up.value - prev_up), std::fabs(lo.value - prev_lo));
        }
        est.value = up.value;
        est.companion_lower = lo.value;
        prev_up = up.value;
        prev_lo = lo.value;
        if (j > 1 && est.stability_residual <= eps) return est;
    }
    if (est.stability_residual > eps) {
        est.unstable = true;
        est.note = "NotConverged: residual " + std::to_string(est.stability_residual) + " after k_max";
    }
    return est;
}

// ---------------------------------------------------------------------------
// P functionals

namespace detail {

struct ThetaSweep {
    FunctionalEstimate upper;
    FunctionalEstimate lower;
};

// theta sweep of window-mean extremes over lattice starts in [x_lo, x_hi - theta]
inline ThetaSweep theta_sweep(const PrefixTable& table, double x_lo, double x_hi,
                              const std::vector<double>& thetas, const Tolerances& tol) {
    ThetaSweep s;
    for (double theta : thetas) {
        const WindowScan w = scan_window_means(table, x_lo, x_hi - theta, theta);
        s.upper.trace.emplace_back(theta, w.sup);
        s.lower.trace.emplace_back(theta, w.inf);
    }
    auto& ut = s.upper.trace;
    auto& lt = s.lower.trace;
    s.upper.value = ut.back().second;
    s.lower.value = lt.back().second;
    s.upper.companion_lower = s.lower.value;
    s.lower.companion_lower = s.lower.value;
    if (ut.size() >= 2) {
        s.upper.stability_residual = std::fabs(ut.back().second - ut[ut.size() - 2].second);
        s.lower.stability_residual = std::fabs(lt.back().second - lt[lt.size() - 2].second);
    }
    s.upper.unstable = s.upper.stability_residual > tol.instability;
    s.lower.unstable = s.lower.stability_residual > tol.instability;
    // diagnostic: the sup trace should be nonincreasing for doubling windows
    for (std::size_t j = 0; j + 1 < ut.size(); ++j) {
        if (ut[j + 1].second > ut[j].second + tol.monotone_slack) {
            s.upper.note = "theta trace not monotone at theta=" + std::to_string(ut[j + 1].first);
            break;
        }
    }
    s.upper.lower_trace = lt;
    return s;
}

}  // namespace detail

inline FunctionalEstimate upper_P(const ContinuousSignal& phi, const GridSpec& grid,
                                  const Tolerances& tol = {}) {
    grid.validate();
    const PrefixTable table = build_prefix(phi, 0.0, grid.x_max, grid.step);
    return detail::theta_sweep(table, grid.x_cut, grid.x_max, grid.theta_grid, tol).upper;
}

inline FunctionalEstimate lower_P(const ContinuousSignal& phi, const GridSpec& grid,
                                  const Tolerances& tol = {}) {
    grid.validate();
    const PrefixTable table = build_prefix(phi, 0.0, grid.x_max, grid.step);
    return detail::theta_sweep(table, grid.x_cut, grid.x_max, grid.theta_grid, tol).lower;
}

/// Almost convergence: P_upper = P_lower = alpha together with uniformity of
/// the window means in all x >= 0 (not just the tail).
inline SummabilityVerdict almost_convergence_test(const ContinuousSignal& phi, const GridSpec& grid,
                                                  double eps, const Tolerances& tol = {}) {
    grid.validate();
    const PrefixTable table = build_prefix(phi, 0.0, grid.x_max, grid.step);
    const auto sweep = detail::theta_sweep(table, grid.x_cut, grid.x_max, grid.theta_grid, tol);
    SummabilityVerdict v;
    v.method = "P";
    v.alpha = 0.5 * (sweep.upper.value + sweep.lower.value);
    v.gap = sweep.upper.value - sweep.lower.value;
    for (double theta : grid.theta_grid) {
        const WindowScan w = scan_window_means(table, 0.0, grid.x_max - theta, theta);
        const double dev = std::max(std::fabs(w.sup - v.alpha), std::fabs(w.inf - v.alpha));
        v.uniformity_modulus.emplace_back(theta, dev);
    }
    const double mod_last = v.uniformity_modulus.back().second;
    if (v.gap > eps) {
        v.status = SummabilityVerdict::Status::not_summable;
        v.reason = "P gap " + std::to_string(v.gap) + " above eps";
    } else if (mod_last > eps) {
        v.status = SummabilityVerdict::Status::inconclusive;
        v.reason = "uniformity modulus " + std::to_string(mod_last) + " plateaus above eps (grid too short)";
    } else {
        v.status = SummabilityVerdict::Status::summable;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Theorem-shaped checks

/// P_upper and P_lower of f * phi - phi must vanish for normalized kernels;
/// also reports |P_upper(f * phi) - P_upper(phi)|.
inline TheoremReport residual_check(const Kernel& k, const ContinuousSignal& phi,
                                    const GridSpec& grid, const Tolerances& tol = {}) {
    detail::require_normalized(k);
    grid.validate();
    const SampledSignal conv = convolve(k, phi, grid);
    const double h = grid.step;
    // psi = f*phi - phi on the tail lattice
    const auto& cv = conv.values();
    std::vector<double> pv(cv.size());
    for (std::size_t m = 0; m < cv.size(); ++m) pv[m] = cv[m] - phi(grid.x_cut + double(m) * h);
    const SampledSignal psi(grid.x_cut, h, std::move(pv), conv.bound() + phi.bound(), "residual");

    // windows must fit the short [x_cut, x_max] table
    std::vector<double> thetas;
    for (double t : grid.theta_grid)
        if (t <= (grid.x_max - grid.x_cut) / 2.0) thetas.push_back(t);

    const PrefixTable tpsi = build_prefix(psi.as_signal(), grid.x_cut, grid.x_max, h);
    const auto spsi = detail::theta_sweep(tpsi, grid.x_cut, grid.x_max, thetas, tol);

    const PrefixTable tconv = build_prefix(conv.as_signal(), grid.x_cut, grid.x_max, h);
    const auto sconv = detail::theta_sweep(tconv, grid.x_cut, grid.x_max, thetas, tol);
    const PrefixTable tphi = build_prefix(phi, 0.0, grid.x_max, h);
    const auto sphi = detail::theta_sweep(tphi, grid.x_cut, grid.x_max, thetas, tol);

    TheoremReport r;
    r.theorem_id = "L3.1";
    r.signal = phi.label();
    r.kernel = k.label;
    const double eps = tol.eps_limit;
    r.discrepancies = {{"upper_P_residual", spsi.upper.value},
                       {"lower_P_residual", spsi.lower.value},
                       {"P_invariance", std::fabs(sconv.upper.value - sphi.upper.value)}};
    r.tolerances = {{"eps", eps}};
    const bool ok = std::fabs(spsi.upper.value) <= eps && std::fabs(spsi.lower.value) <= eps &&
                    std::fabs(sconv.upper.value - sphi.upper.value) <= eps;
    const bool shaky = spsi.upper.unstable || spsi.lower.unstable;
    r.status = ok ? TheoremReport::Status::pass
                  : (shaky ? TheoremReport::Status::inconclusive : TheoremReport::Status::fail);
    return r;
}

/// Tauberian condition via the witness g = f - f^{*2} (zero set {0}):
/// both tail extremes of (g * phi) must vanish. The combined verdict checks
/// that F summability coincides with [P summability and the condition].
inline TheoremReport tauberian_check(const Kernel& k, const ContinuousSignal& phi,
                                     const GridSpec& grid, const Tolerances& tol = {}) {
    detail::require_flat(k);
    {
        const KernelClass cls = classify(k, make_xi_grid());
        if (!cls.wiener)
            throw std::invalid_argument("tauberian_check: kernel '" + k.label + "' is not Wiener-flagged");
    }
    const double eps = tol.eps_limit;
    const SampledSignal c1 = convolve(k, phi, grid);
    const SampledSignal c2 = convolve(convolution_power(k, 2), phi, grid);
    double wsup = -1e308, winf = 1e308;
    for (std::size_t m = 0; m < c1.values().size(); ++m) {
        const double g = c1.values()[m] - c2.values()[m];
        wsup = std::max(wsup, g);
        winf = std::min(winf, g);
    }
    const bool condition = std::fabs(wsup) <= eps && std::fabs(winf) <= eps;

    const auto [fup, flo] = detail::tail_extremes(c1, tol.instability);
    const bool f_summable = (fup.value - flo.value) <= eps;
    const double f_alpha = 0.5 * (fup.value + flo.value);

    const SummabilityVerdict p = almost_convergence_test(phi, grid, eps, tol);
    const bool p_summable = p.summable();

    TheoremReport r;
    r.theorem_id = "T5.6";
    r.signal = phi.label();
    r.kernel = k.label;
    r.discrepancies = {{"condition_sup", wsup},
                       {"condition_inf", winf},
                       {"F_gap", fup.value - flo.value},
                       {"P_gap", p.gap},
                       {"alpha_F_minus_alpha_P", f_alpha - p.alpha}};
    r.tolerances = {{"eps", eps}};

    const bool premise = p_summable && condition;
    bool consistent;
    if (premise)
        consistent = f_summable && std::fabs(f_alpha - p.alpha) <= eps;
    else
        consistent = !f_summable || (p.status != SummabilityVerdict::Status::not_summable &&
                                     std::fabs(f_alpha - p.alpha) <= eps);
    if (p.status == SummabilityVerdict::Status::inconclusive && !f_summable) {
        r.status = TheoremReport::Status::inconclusive;
        r.note = "P verdict inconclusive";
    } else {
        r.status = consistent ? TheoremReport::Status::pass : TheoremReport::Status::fail;
        if (!condition) r.note = "Tauberian condition fails";
    }
    return r;
}

/// Optional shift-family form of the Tauberian condition: the tail
/// oscillation of (f * phi)(x + s) - (f * phi)(x) must vanish for every
/// shift s. One convolution serves the whole s-sweep.
inline TheoremReport tauberian_shift_condition(const Kernel& k, const ContinuousSignal& phi,
                                               const GridSpec& grid, const std::vector<double>& shifts,
                                               const Tolerances& tol = {}) {
    detail::require_flat(k);
    if (shifts.empty()) throw std::invalid_argument("tauberian_shift_condition: need shifts");
    const SampledSignal y = convolve(k, phi, grid);
    const double eps = tol.eps_limit;
    TheoremReport r;
    r.theorem_id = "L5.1-shift";
    r.signal = phi.label();
    r.kernel = k.label;
    r.tolerances = {{"eps", eps}};
    bool ok = true;
    for (double s : shifts) {
        const auto lag = static_cast<std::size_t>(std::llround(std::fabs(s) / grid.step));
        if (lag == 0 || lag >= y.values().size())
            throw std::invalid_argument("tauberian_shift_condition: shift outside the tail window");
        double worst = 0.0;
        for (std::size_t m = 0; m + lag < y.values().size(); ++m)
            worst = std::max(worst, std::fabs(y.values()[m + lag] - y.values()[m]));
        r.discrepancies.emplace_back("shift_" + std::to_string(s), worst);
        ok = ok && worst <= eps;
    }
    r.status = ok ? TheoremReport::Status::pass : TheoremReport::Status::fail;
    if (!ok) r.note = "shift condition fails";
    return r;
}

/// Wiener cross-kernel consistency: if F(phi) exists under a Wiener kernel,
/// every normalized kernel must give the same limit.
inline TheoremReport wiener_cross_check(const ContinuousSignal& phi, const std::vector<Kernel>& ks,
                                        const GridSpec& grid, double eps, const Tolerances& tol = {}) {
    if (ks.empty()) throw std::invalid_argument("wiener_cross_check: need at least one kernel");
    for (const auto& k : ks) detail::require_normalized(k);
    {
        const KernelClass cls = classify(ks.front(), make_xi_grid());
        if (!cls.wiener)
            throw std::invalid_argument("wiener_cross_check: lead kernel '" + ks.front().label +
                                        "' is not Wiener-flagged");
    }
    TheoremReport r;
    r.theorem_id = "T5.1";
    r.signal = phi.label();
    r.kernel = ks.front().label;
    r.tolerances = {{"eps", eps}};

    const auto [up0, lo0] = detail::tail_extremes(convolve(ks.front(), phi, grid), tol.instability);
    const double gap0 = up0.value - lo0.value;
    r.discrepancies.emplace_back("lead_F_gap", gap0);
    if (gap0 > eps) {
        r.status = TheoremReport::Status::pass;
        r.note = "premise not satisfied (lead kernel not summable)";
        return r;
    }
    const double alpha = 0.5 * (up0.value + lo0.value);
    bool ok = true;
    for (std::size_t i = 1; i < ks.size(); ++i) {
        const auto [up, lo] = detail::tail_extremes(convolve(ks[i], phi, grid), tol.instability);
        const double dev = std::max(std::fabs(up.value - alpha), std::fabs(lo.value - alpha));
        r.discrepancies.emplace_back("dev_" + ks[i].label, dev);
        ok = ok && dev <= eps;
    }
    r.status = ok ? TheoremReport::Status::pass : TheoremReport::Status::fail;
    return r;
}

}  // namespace sumlab
