// SPDX-License-Identifier: Apache-2.0
//
// Discretization and tail-window parameters. Every limsup / double-limit
// estimator in the library is controlled by one of these grids, so their
// invariants are validated eagerly and violations throw with the offending
// field named (the CLI surfaces those messages verbatim).

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumlab {

/// Uniform grid on [0, x_max] with a tail window [x_cut, x_max] used to
/// approximate limsup_{x->infinity}, plus a geometric ladder of window
/// lengths theta_0 < theta_1 < ... < theta_J for the outer limit.
struct GridSpec {
    double x_max = 5000.0;
    double step = 0.01;
    double x_cut = 1000.0;
    std::vector<double> theta_grid = default_theta_grid();

    static std::vector<double> default_theta_grid() {
        std::vector<double> t;
        for (int j = 0; j <= 9; ++j) t.push_back(std::ldexp(1.0, j));  // 1..512
        return t;
    }

    static GridSpec standard() { return GridSpec{}; }

    /// Short grid for high-resolution quadrature experiments.
    static GridSpec fine(double x_max_, double step_, double x_cut_) {
        GridSpec g;
        g.x_max = x_max_;
        g.step = step_;
        g.x_cut = x_cut_;
        double theta = 1.0;
        g.theta_grid.clear();
        while (theta <= (g.x_max - g.x_cut) / 2.0) {
            g.theta_grid.push_back(theta);
            theta *= 2.0;
        }
        return g;
    }

    double tail_length() const { return x_max - x_cut; }
    double theta_max() const { return theta_grid.back(); }

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("step: must be > 0");
        if (!(x_cut >= 0.0) || !(x_cut < x_max))
            throw std::invalid_argument("x_cut: need 0 <= x_cut < x_max");
        if (theta_grid.empty())
            throw std::invalid_argument("theta_grid: must be nonempty");
        for (std::size_t j = 0; j + 1 < theta_grid.size(); ++j) {
            if (!(theta_grid[j + 1] > theta_grid[j]))
                throw std::invalid_argument("theta_grid: must be strictly increasing");
        }
        if (theta_grid.size() >= 2) {
            const double rho = theta_grid[1] / theta_grid[0];
            if (!(rho > 1.0))
                throw std::invalid_argument("theta_grid: ratio must be > 1");
            for (std::size_t j = 0; j + 1 < theta_grid.size(); ++j) {
                const double r = theta_grid[j + 1] / theta_grid[j];
                if (std::fabs(r - rho) > 1e-9 * rho)
                    throw std::invalid_argument("theta_grid: ratio must be constant");
            }
        }
        if (!(theta_grid.front() >= step))
            throw std::invalid_argument("theta_grid: smallest window below grid step");
        if (!(theta_max() <= (x_max - x_cut) / 2.0))
            throw std::invalid_argument("theta_grid: largest window does not fit the tail region");
    }
};

/// Grid for functionals on bounded sequences. theta_grid are the window
/// stretch factors of the C_infinity form (window [n, theta*n]).
struct DiscreteGrid {
    std::int64_t n_max = std::int64_t(1) << 22;
    std::int64_t n_cut = std::int64_t(1) << 12;
    std::vector<std::int64_t> theta_grid = default_theta_grid();
    int holder_k_max = 7;
    std::vector<std::int64_t> banach_k_grid = default_banach_grid();

    static std::vector<std::int64_t> default_theta_grid() {
        std::vector<std::int64_t> t;
        for (int j = 0; j <= 9; ++j) t.push_back(std::int64_t(1) << j);  // 1..512
        return t;
    }
    static std::vector<std::int64_t> default_banach_grid() {
        std::vector<std::int64_t> k;
        for (int j = 0; j <= 12; ++j) k.push_back(std::int64_t(1) << j);  // 1..4096
        return k;
    }

    static DiscreteGrid standard() { return DiscreteGrid{}; }

    void validate() const {
        if (n_max < 2) throw std::invalid_argument("n_max: must be >= 2");
        if (n_cut < 1 || n_cut >= n_max)
            throw std::invalid_argument("n_cut: need 1 <= n_cut < n_max");
        if (theta_grid.empty() || theta_grid.front() < 1)
            throw std::invalid_argument("theta_grid: must start at >= 1");
        for (std::size_t j = 0; j + 1 < theta_grid.size(); ++j)
            if (theta_grid[j + 1] <= theta_grid[j])
                throw std::invalid_argument("theta_grid: must be strictly increasing");
        if (theta_grid.back() * n_cut > n_max)
            throw std::invalid_argument("theta_grid: largest window leaves no inner tail (theta_J * n_cut > n_max)");
        if (holder_k_max < 1) throw std::invalid_argument("holder_k_max: must be >= 1");
        if (banach_k_grid.empty() || banach_k_grid.front() < 1)
            throw std::invalid_argument("banach_k_grid: must start at >= 1");
        if (banach_k_grid.back() + n_cut > n_max)
            throw std::invalid_argument("banach_k_grid: largest window exceeds the tail");
    }
};

/// Grid on the multiplicative half-line, uniform in u = log x over
/// [0, u_max] (i.e. x in [1, e^{u_max}]). window_lengths are window lengths
/// in u; a window [u, u + L] is the multiplicative window [x, e^L x].
struct MultiplicativeGrid {
    double u_max = 650.0;
    double du = 0.01;
    double u_cut = 130.0;
    std::vector<double> window_lengths = default_windows();

    static std::vector<double> default_windows() {
        std::vector<double> t;
        for (int j = 0; j <= 8; ++j) t.push_back(std::ldexp(1.0, j));  // 1..256 in log scale
        return t;
    }

    static MultiplicativeGrid standard() { return MultiplicativeGrid{}; }

    /// Small-x grid on [1, e^{u_max}] where a uniform-in-x table is still
    /// affordable; used by the dual-route cross checks.
    static MultiplicativeGrid compact(double u_max_ = 10.0, double du_ = 0.001) {
        MultiplicativeGrid g;
        g.u_max = u_max_;
        g.du = du_;
        g.u_cut = u_max_ / 5.0;
        g.window_lengths.clear();
        double L = 0.5;
        while (L <= (g.u_max - g.u_cut) / 2.0) {
            g.window_lengths.push_back(L);
            L *= 2.0;
        }
        return g;
    }

    double theta_max_log() const { return window_lengths.back(); }

    void validate() const {
        if (!(du > 0.0)) throw std::invalid_argument("du: must be > 0");
        if (!(u_cut >= 0.0) || !(u_cut < u_max))
            throw std::invalid_argument("u_cut: need 0 <= u_cut < u_max");
        if (window_lengths.empty())
            throw std::invalid_argument("window_lengths: must be nonempty");
        for (std::size_t j = 0; j + 1 < window_lengths.size(); ++j)
            if (window_lengths[j + 1] <= window_lengths[j])
                throw std::invalid_argument("window_lengths: must be strictly increasing");
        if (!(window_lengths.back() <= u_max - u_cut))
            throw std::invalid_argument("window_lengths: largest window does not fit the tail region");
        if (!(window_lengths.front() >= du))
            throw std::invalid_argument("window_lengths: smallest window below grid step");
    }
};

}  // namespace sumlab
