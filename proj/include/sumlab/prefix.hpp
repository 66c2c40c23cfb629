// SPDX-License-Identifier: Apache-2.0
//
// Midpoint-rule prefix tables: cumulative[j] ~ integral of phi * weight over
// [origin, origin + j*step]. Window means are O(1) lookups afterwards, with
// linear interpolation of the cumulative at non-grid endpoints so the mean
// is continuous in (x, theta).

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/accumulate.hpp"
#include "sumlab/signal.hpp"

namespace sumlab {

class PrefixTable {
  public:
    enum class Weight { unit, one_over_t };

    PrefixTable() = default;
    PrefixTable(double origin, double step, std::vector<double> cumulative)
        : origin_(origin), step_(step), cum_(std::move(cumulative)) {
        if (cum_.size() < 2 || !(step_ > 0.0))
            throw std::invalid_argument("prefix table: need step > 0 and at least one cell");
    }

    double origin() const { return origin_; }
    double step() const { return step_; }
    double upper() const { return origin_ + step_ * double(cum_.size() - 1); }
    std::size_t cells() const { return cum_.size() - 1; }
    const std::vector<double>& cumulative() const { return cum_; }

    /// Interpolated cumulative integral over [origin, x].
    double cumulative_at(double x) const {
        if (x < origin_ - 1e-12 || x > upper() + 1e-12)
            throw std::out_of_range("prefix table: abscissa " + std::to_string(x) + " outside [" +
                                    std::to_string(origin_) + ", " + std::to_string(upper()) + "]");
        double p = (x - origin_) / step_;
        if (p < 0.0) p = 0.0;
        auto i = static_cast<std::size_t>(p);
        if (i >= cum_.size() - 1) return cum_.back();
        const double f = p - double(i);
        return cum_[i] * (1.0 - f) + cum_[i + 1] * f;
    }

    /// (1/theta) * integral of phi over [x, x + theta].
    double window_mean(double x, double theta) const {
        if (theta < step_)
            throw std::invalid_argument("window_mean: degenerate window, theta < grid step");
        if (x < origin_ - 1e-12 || x + theta > upper() + 1e-12)
            throw std::out_of_range("window_mean: window [" + std::to_string(x) + ", " +
                                    std::to_string(x + theta) + "] leaves the table");
        return (cumulative_at(x + theta) - cumulative_at(x)) / theta;
    }

    /// Window mean restricted to lattice indices; used by the sweep scans
    /// where x and theta are multiples of the step.
    double window_mean_cells(std::size_t i, std::size_t width) const {
        return (cum_[i + width] - cum_[i]) / (step_ * double(width));
    }

  private:
    double origin_ = 0.0;
    double step_ = 1.0;
    std::vector<double> cum_;
};

/// Midpoint-rule table of phi (optionally weighted by 1/t) over [origin, x_max].
inline PrefixTable build_prefix(const ContinuousSignal& phi, double origin, double x_max, double step,
                                PrefixTable::Weight weight = PrefixTable::Weight::unit) {
    if (!(step > 0.0) || !(x_max > origin))
        throw std::invalid_argument("build_prefix: need step > 0 and x_max > origin");
    if (weight == PrefixTable::Weight::one_over_t && !(origin > 0.0))
        throw std::invalid_argument("build_prefix: one-over-t weight requires origin > 0");
    const auto n = static_cast<std::size_t>(std::ceil((x_max - origin) / step - 1e-9));
    std::vector<double> cum(n + 1);
    cum[0] = 0.0;
    KahanAccumulator acc;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = origin + (double(j) + 0.5) * step;
        double v = phi(t);
        if (weight == PrefixTable::Weight::one_over_t) v /= t;
        acc.add(v * step);
        cum[j + 1] = acc.value();
    }
    return PrefixTable(origin, step, std::move(cum));
}

/// Same, with an arbitrary positive weight (used by the Hardy operators).
inline PrefixTable build_prefix_weighted(const ContinuousSignal& phi, double origin, double x_max,
                                         double step, const std::function<double(double)>& w) {
    const auto n = static_cast<std::size_t>(std::ceil((x_max - origin) / step - 1e-9));
    if (n == 0 || !(step > 0.0)) throw std::invalid_argument("build_prefix_weighted: bad range");
    std::vector<double> cum(n + 1);
    cum[0] = 0.0;
    KahanAccumulator acc;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = origin + (double(j) + 0.5) * step;
        acc.add(phi(t) * w(t) * step);
        cum[j + 1] = acc.value();
    }
    return PrefixTable(origin, step, std::move(cum));
}

struct WindowScan {
    double sup;
    double inf;
    double arg_sup;
    double arg_inf;
};

/// Extremes of the theta-window mean over lattice starts x in [x_lo, x_hi].
inline WindowScan scan_window_means(const PrefixTable& table, double x_lo, double x_hi, double theta) {
    const double h = table.step();
    const auto width = static_cast<std::size_t>(std::llround(theta / h));
    if (width == 0) throw std::invalid_argument("scan_window_means: theta below grid step");
    auto i0 = static_cast<std::size_t>(std::ceil((x_lo - table.origin()) / h - 1e-9));
    const double span = x_hi - table.origin();
    const auto last_start = static_cast<std::size_t>(std::floor(span / h + 1e-9));
    if (last_start + width > table.cells() || i0 > last_start)
        throw std::out_of_range("scan_window_means: window range leaves the table");
    WindowScan r{-1e308, 1e308, 0.0, 0.0};
    const auto& cum = table.cumulative();
    const double inv = 1.0 / (h * double(width));
    for (std::size_t i = i0; i <= last_start; ++i) {
        const double m = (cum[i + width] - cum[i]) * inv;
        if (m > r.sup) { r.sup = m; r.arg_sup = table.origin() + double(i) * h; }
        if (m < r.inf) { r.inf = m; r.arg_inf = table.origin() + double(i) * h; }
    }
    return r;
}

}  // namespace sumlab
