// SPDX-License-Identifier: Apache-2.0
//
// Multiplicative-side functionals on (0, inf) with Haar measure dt/t.
//
//   (g *M phi)(x) = int_0^inf phi(x/t) g(t) dt/t
//   Q_upper(phi)  = lim_{theta->inf} limsup_{x->inf} (1/log theta) int_x^{theta x} phi(t) dt/t
//   (G_r phi)(x)  = (r / x^r) int_0^x phi(t) t^{r-1} dt       (G_1 = Hardy)
//
// Everything routes through the additive side via (W phi)(u) = phi(e^u):
// the pullback f(u) = g(e^u) turns Mellin convolution into ordinary
// convolution. A direct quadrature on a uniform x-grid exists as a
// cross-check wherever small enough x ranges make it affordable.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/convolution.hpp"
#include "sumlab/functionals.hpp"
#include "sumlab/grid.hpp"
#include "sumlab/kernel.hpp"
#include "sumlab/prefix.hpp"
#include "sumlab/report.hpp"
#include "sumlab/signal.hpp"

namespace sumlab {

/// A kernel on the multiplicative half-line, carried around as its additive
/// pullback f(u) = g(e^u) plus the original density.
struct MultiplicativeKernel {
    std::string label;
    std::function<double(double)> density;  // g(x), x > 0
    Kernel pullback;                        // f(u) = g(e^u)

    /// Transform against characters t^{i xi}: equals pullback transform at -xi.
    std::complex<double> transform(double xi) const { return fourier_transform(pullback, -xi); }
    double mass() const { return pullback.mass(); }
};

namespace kernels {

/// Hardy-type kernel g_r(x) = r x^{-r} for x >= 1; pullback is exponential(r).
inline MultiplicativeKernel hardy_kernel(double r, std::string label = "") {
    if (!(r > 0.0)) throw std::invalid_argument("hardy kernel: r must be > 0");
    MultiplicativeKernel g;
    g.label = label.empty() ? "g_" + std::to_string(r) : std::move(label);
    g.density = [r](double x) { return x >= 1.0 ? r * std::pow(x, -r) : 0.0; };
    g.pullback = exponential(r, g.label + "->exp");
    return g;
}

/// Generic multiplicative kernel from a density integrable against dt/t.
inline MultiplicativeKernel multiplicative_from_density(std::function<double(double)> g,
                                                        double x_lo, double x_hi,
                                                        std::string label = "mkernel") {
    if (!(x_lo > 0.0) || !(x_hi > x_lo))
        throw std::invalid_argument("multiplicative kernel: need 0 < x_lo < x_hi");
    MultiplicativeKernel mk;
    mk.label = std::move(label);
    mk.density = g;
    Kernel f;
    f.label = mk.label + "->log";
    f.family = KernelFamily::generic;
    f.density = [g](double u) { return g(std::exp(u)); };
    f.support_lo = std::log(x_lo);
    f.support_hi = std::log(x_hi);
    mk.pullback = std::move(f);
    return mk;
}

}  // namespace kernels

/// The log isometry: (W phi)(u) = phi(e^u).
inline ContinuousSignal wrap_log(const MultiplicativeSignal& phi) {
    return ContinuousSignal([phi](double u) { return phi.at_log(u); }, phi.bound(),
                            "W[" + phi.label() + "]");
}

/// Additive kernel f(u) = g(e^u) under the log substitution.
inline Kernel mellin_pullback(const MultiplicativeKernel& g) { return g.pullback; }

/// Mellin convolution through the commutative diagram: convolve the pullback
/// with W phi and read the result back at u = log x.
inline MultiplicativeSignal mellin_convolve(const MultiplicativeKernel& g,
                                            const MultiplicativeSignal& phi,
                                            const MultiplicativeGrid& mgrid) {
    mgrid.validate();
    GridSpec agrid;
    agrid.x_max = mgrid.u_max;
    agrid.step = mgrid.du;
    agrid.x_cut = mgrid.u_cut;
    agrid.theta_grid = {mgrid.window_lengths.front()};
    while (agrid.theta_grid.back() * 2.0 <= (agrid.x_max - agrid.x_cut) / 2.0)
        agrid.theta_grid.push_back(agrid.theta_grid.back() * 2.0);
    auto sampled = std::make_shared<SampledSignal>(convolve(g.pullback, wrap_log(phi), agrid));
    const double bound = sampled->bound();
    return MultiplicativeSignal([sampled](double x) { return (*sampled)(std::log(x)); },
                                [sampled](double u) { return (*sampled)(u); }, bound,
                                g.label + "*M*" + phi.label());
}

/// Direct Mellin quadrature at one point, uniform in log t over the pullback
/// support. Cross-check for the diagram route.
inline double mellin_convolve_direct(const MultiplicativeKernel& g, const MultiplicativeSignal& phi,
                                     double x, double du = 1e-4) {
    const auto [lo, hi] = g.pullback.truncated_support(1e-10);
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / du));
    KahanAccumulator acc;
    const double lx = std::log(x);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = lo + (double(j) + 0.5) * (hi - lo) / double(n);
        acc.add(phi.at_log(lx - u) * g.pullback.density(u) * (hi - lo) / double(n));
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// Hardy averaging operators

/// (G_r phi)(x) evaluated from a weighted prefix table over (0, x_max].
class HardyOperator {
  public:
    HardyOperator(const MultiplicativeSignal& phi, double r, double x_max, double step = 1e-4)
        : r_(r) {
        if (!(r > 0.0)) throw std::invalid_argument("hardy operator: r must be > 0");
        ContinuousSignal lifted([phi](double t) { return t > 0.0 ? phi(t) : 0.0; }, phi.bound(),
                                phi.label());
        table_ = build_prefix_weighted(lifted, 0.0, x_max, step,
                                       [r](double t) { return std::pow(t, r - 1.0); });
    }

    double operator()(double x) const {
        return r_ / std::pow(x, r_) * table_.cumulative_at(x);
    }

  private:
    double r_;
    PrefixTable table_;
};

/// Sampled (G_r phi) over a geometric x-grid; agrees with
/// mellin_convolve(g_r, phi) by Lemma-level identity.
inline MultiplicativeSignal hardy_operator(const MultiplicativeSignal& phi, double r,
                                           const std::vector<double>& x_grid, double step = 1e-4) {
    if (x_grid.empty()) throw std::invalid_argument("hardy_operator: empty x grid");
    double x_max = 0.0;
    for (double x : x_grid) x_max = std::max(x_max, x);
    auto op = std::make_shared<HardyOperator>(phi, r, x_max * 1.0000001, step);
    return MultiplicativeSignal([op](double x) { return (*op)(x); }, phi.bound() + 1e-9,
                                "G_" + std::to_string(r) + "[" + phi.label() + "]");
}

// ---------------------------------------------------------------------------
// Q functionals

namespace detail {

struct QRoutes {
    ThetaSweep pullback;
    std::optional<ThetaSweep> direct;
    double discrepancy = 0.0;
};

// windows in u over the pulled-back table (primary route); direct
// one-over-t route on a uniform x lattice when the range allows it
inline QRoutes q_routes(const MultiplicativeSignal& phi, const MultiplicativeGrid& mgrid,
                        const Tolerances& tol) {
    mgrid.validate();
    QRoutes out;
    const PrefixTable tab = build_prefix(wrap_log(phi), 0.0, mgrid.u_max, mgrid.du);
    out.pullback = theta_sweep(tab, mgrid.u_cut, mgrid.u_max, mgrid.window_lengths, tol);

    const double x_max = std::exp(mgrid.u_max);
    constexpr double kMaxDirectCells = 4.0e6;
    if (x_max <= kMaxDirectCells * 1e-2) {
        const double h = std::max(1e-3, x_max / kMaxDirectCells);
        ContinuousSignal lifted([phi](double t) { return t > 0.0 ? phi(t) : 0.0; }, phi.bound(),
                                phi.label());
        const PrefixTable num = build_prefix(lifted, 1.0, x_max, h, PrefixTable::Weight::one_over_t);
        const ContinuousSignal one([](double) { return 1.0; }, 1.0, "1");
        const PrefixTable den = build_prefix(one, 1.0, x_max, h, PrefixTable::Weight::one_over_t);
        ThetaSweep ds;
        const double x_cut = std::exp(mgrid.u_cut);
        for (double L : mgrid.window_lengths) {
            const double theta = std::exp(L);
            double sup = -1e308, inf = 1e308;
            // lattice of window starts; self-normalized by the measured 1/t mass
            const double x_hi = x_max / theta;
            const auto steps = static_cast<std::size_t>(std::floor((x_hi - x_cut) / h));
            for (std::size_t i = 0; i <= steps; ++i) {
                const double x = x_cut + double(i) * h;
                const double n = num.cumulative_at(theta * x) - num.cumulative_at(x);
                const double d = den.cumulative_at(theta * x) - den.cumulative_at(x);
                const double v = n / d;
                sup = std::max(sup, v);
                inf = std::min(inf, v);
            }
            ds.upper.trace.emplace_back(L, sup);
            ds.lower.trace.emplace_back(L, inf);
        }
        ds.upper.value = ds.upper.trace.back().second;
        ds.lower.value = ds.lower.trace.back().second;
        ds.upper.companion_lower = ds.lower.value;
        out.discrepancy = std::max(std::fabs(ds.upper.value - out.pullback.upper.value),
                                   std::fabs(ds.lower.value - out.pullback.lower.value));
        out.direct = std::move(ds);
    }
    return out;
}

}  // namespace detail

/// Q_upper via the pullback identity, cross-checked against the direct
/// one-over-t route when the x range permits a uniform table. The primary
/// value is the direct one where it ran; a discrepancy above 1e-3 between
/// the routes is flagged.
inline FunctionalEstimate upper_Q(const MultiplicativeSignal& phi, const MultiplicativeGrid& mgrid,
                                  const Tolerances& tol = {}) {
    auto routes = detail::q_routes(phi, mgrid, tol);
    FunctionalEstimate est = routes.pullback.upper;
    if (routes.direct) {
        est.note = "pullback_route=" + std::to_string(est.value) +
                   " direct_route=" + std::to_string(routes.direct->upper.value);
        est.value = routes.direct->upper.value;
        est.companion_lower = routes.direct->lower.value;
        if (routes.discrepancy > 1e-3) {
            est.unstable = true;
            est.note += " route_discrepancy=" + std::to_string(routes.discrepancy);
        }
    }
    return est;
}

inline FunctionalEstimate lower_Q(const MultiplicativeSignal& phi, const MultiplicativeGrid& mgrid,
                                  const Tolerances& tol = {}) {
    auto routes = detail::q_routes(phi, mgrid, tol);
    FunctionalEstimate est = routes.pullback.lower;
    if (routes.direct) est.value = routes.direct->lower.value;
    return est;
}

/// Lemma-level identity check: the two upper_Q routes must agree within
/// 1e-3 on a grid small enough to afford the direct table.
inline TheoremReport q_route_identity(const MultiplicativeSignal& phi, const MultiplicativeGrid& mgrid,
                                      const Tolerances& tol = {}) {
    auto routes = detail::q_routes(phi, mgrid, tol);
    TheoremReport r;
    r.theorem_id = "L6.1";
    r.signal = phi.label();
    r.tolerances = {{"eps", 1e-3}};
    if (!routes.direct) {
        r.status = TheoremReport::Status::inconclusive;
        r.note = "x range too large for the direct route";
        return r;
    }
    r.discrepancies = {{"route_gap", routes.discrepancy}};
    r.status = routes.discrepancy <= 1e-3 ? TheoremReport::Status::pass : TheoremReport::Status::fail;
    return r;
}

/// Q summability: Q_upper = Q_lower = alpha with uniformity in x >= 1.
inline SummabilityVerdict q_summability_test(const MultiplicativeSignal& phi,
                                             const MultiplicativeGrid& mgrid, double eps,
                                             const Tolerances& tol = {}) {
    mgrid.validate();
    const PrefixTable tab = build_prefix(wrap_log(phi), 0.0, mgrid.u_max, mgrid.du);
    const auto sweep = detail::theta_sweep(tab, mgrid.u_cut, mgrid.u_max, mgrid.window_lengths, tol);
    SummabilityVerdict v;
    v.method = "Q";
    v.alpha = 0.5 * (sweep.upper.value + sweep.lower.value);
    v.gap = sweep.upper.value - sweep.lower.value;
    for (double L : mgrid.window_lengths) {
        const WindowScan w = scan_window_means(tab, 0.0, mgrid.u_max - L, L);
        v.uniformity_modulus.emplace_back(L, std::max(std::fabs(w.sup - v.alpha), std::fabs(w.inf - v.alpha)));
    }
    const double mod_last = v.uniformity_modulus.back().second;
    if (v.gap > eps) {
        v.status = SummabilityVerdict::Status::not_summable;
        v.reason = "Q gap above eps";
    } else if (mod_last > eps) {
        v.status = SummabilityVerdict::Status::inconclusive;
        v.reason = "uniformity modulus plateaus above eps (grid too short)";
    } else {
        v.status = SummabilityVerdict::Status::summable;
    }
    return v;
}

}  // namespace sumlab
