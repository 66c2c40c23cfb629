// SPDX-License-Identifier: Apache-2.0
//
// Bounded test signals on R, N and (0, infinity). A signal is a pure
// generator plus a declared sup bound; the bound is checked at every
// evaluation so a misdeclared generator fails loudly instead of silently
// corrupting a limit estimate.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sumlab {

namespace detail {
inline void check_bound(double v, double bound, const std::string& label) {
    if (!(std::fabs(v) <= bound + 1e-12 * (1.0 + bound)) || std::isnan(v))
        throw std::domain_error("signal '" + label + "': generator value " + std::to_string(v) +
                                " exceeds declared bound " + std::to_string(bound));
}
}  // namespace detail

/// Bounded function on the real line.
class ContinuousSignal {
  public:
    ContinuousSignal() = default;
    ContinuousSignal(std::function<double(double)> generator, double bound, std::string label)
        : gen_(std::move(generator)), bound_(bound), label_(std::move(label)) {
        if (!(bound_ >= 0.0)) throw std::invalid_argument("signal bound must be >= 0");
    }

    double operator()(double x) const {
        const double v = gen_(x);
        detail::check_bound(v, bound_, label_);
        return v;
    }

    double bound() const { return bound_; }
    const std::string& label() const { return label_; }

  private:
    std::function<double(double)> gen_;
    double bound_ = 0.0;
    std::string label_;
};

/// Bounded function on the positive integers.
class DiscreteSignal {
  public:
    DiscreteSignal() = default;
    DiscreteSignal(std::function<double(std::int64_t)> generator, double bound, std::string label)
        : gen_(std::move(generator)), bound_(bound), label_(std::move(label)) {
        if (!(bound_ >= 0.0)) throw std::invalid_argument("signal bound must be >= 0");
    }

    double operator()(std::int64_t n) const {
        if (n < 1) throw std::out_of_range("discrete signal '" + label_ + "' evaluated at n < 1");
        const double v = gen_(n);
        detail::check_bound(v, bound_, label_);
        return v;
    }

    double bound() const { return bound_; }
    const std::string& label() const { return label_; }

  private:
    std::function<double(std::int64_t)> gen_;
    double bound_ = 0.0;
    std::string label_;
};

/// Bounded function on (0, infinity). log_form, when present, evaluates the
/// same signal as a function of u = log x; it keeps generators usable at
/// x values far beyond double overflow (x = e^u with u in the hundreds).
class MultiplicativeSignal {
  public:
    MultiplicativeSignal() = default;
    MultiplicativeSignal(std::function<double(double)> generator, double bound, std::string label)
        : gen_(std::move(generator)), bound_(bound), label_(std::move(label)) {}
    MultiplicativeSignal(std::function<double(double)> generator,
                         std::function<double(double)> log_form, double bound, std::string label)
        : gen_(std::move(generator)), log_gen_(std::move(log_form)), bound_(bound), label_(std::move(label)) {}

    double operator()(double x) const {
        if (!(x > 0.0)) throw std::out_of_range("multiplicative signal '" + label_ + "' evaluated at x <= 0");
        const double v = gen_(x);
        detail::check_bound(v, bound_, label_);
        return v;
    }

    /// Value at x = e^u.
    double at_log(double u) const {
        const double v = log_gen_ ? log_gen_(u) : gen_(std::exp(u));
        detail::check_bound(v, bound_, label_);
        return v;
    }

    bool has_log_form() const { return static_cast<bool>(log_gen_); }
    double bound() const { return bound_; }
    const std::string& label() const { return label_; }

  private:
    std::function<double(double)> gen_;
    std::function<double(double)> log_gen_;
    double bound_ = 0.0;
    std::string label_;
};

/// Values on a uniform lattice with linear interpolation between nodes,
/// constant extrapolation outside. Convolution outputs live here.
class SampledSignal {
  public:
    SampledSignal() = default;
    SampledSignal(double x0, double step, std::vector<double> values, double bound, std::string label)
        : x0_(x0), step_(step), values_(std::move(values)), bound_(bound), label_(std::move(label)) {
        if (!(step_ > 0.0) || values_.empty())
            throw std::invalid_argument("sampled signal '" + label_ + "': empty or bad step");
    }

    double x_lo() const { return x0_; }
    double x_hi() const { return x0_ + step_ * double(values_.size() - 1); }
    double step() const { return step_; }
    const std::vector<double>& values() const { return values_; }
    double bound() const { return bound_; }
    const std::string& label() const { return label_; }

    double operator()(double x) const {
        if (x <= x0_) return values_.front();
        const double p = (x - x0_) / step_;
        const auto i = static_cast<std::size_t>(p);
        if (i + 1 >= values_.size()) return values_.back();
        const double f = p - double(i);
        return values_[i] * (1.0 - f) + values_[i + 1] * f;
    }

    ContinuousSignal as_signal() const {
        auto self = std::make_shared<SampledSignal>(*this);
        return ContinuousSignal([self](double x) { return (*self)(x); }, bound_, label_);
    }

  private:
    double x0_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_;
    double bound_ = 0.0;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Signal arithmetic. Estimator linearity properties are stated against these.

inline ContinuousSignal scale(double a, const ContinuousSignal& phi, std::string label = "") {
    if (label.empty()) label = std::to_string(a) + "*" + phi.label();
    return ContinuousSignal([a, phi](double x) { return a * phi(x); }, std::fabs(a) * phi.bound(), label);
}

inline ContinuousSignal shift(const ContinuousSignal& phi, double c, std::string label = "") {
    if (label.empty()) label = phi.label() + "+" + std::to_string(c);
    return ContinuousSignal([c, phi](double x) { return phi(x) + c; }, phi.bound() + std::fabs(c), label);
}

inline ContinuousSignal add(const ContinuousSignal& phi, const ContinuousSignal& psi, std::string label = "") {
    if (label.empty()) label = phi.label() + "+" + psi.label();
    return ContinuousSignal([phi, psi](double x) { return phi(x) + psi(x); }, phi.bound() + psi.bound(), label);
}

// ---------------------------------------------------------------------------
// Named generator library. Parameters come as a name -> value map; the CLI
// job file maps onto this directly.

using ParamMap = std::map<std::string, double>;

namespace detail {

inline double get_param(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

// 1 on [b^{2k}, b^{2k+1}), 0 on [b^{2k+1}, b^{2k+2}), k any integer.
inline double log_block_value(double x, double base) {
    if (!(x > 0.0)) return 0.0;
    const double e = std::floor(std::log(x) / std::log(base));
    // guard against floor(log_b(b^k)) landing one below k
    double k = e;
    if (std::pow(base, e + 1.0) <= x) k = e + 1.0;
    const auto ki = static_cast<long long>(std::llround(k));
    return (ki % 2 == 0) ? 1.0 : 0.0;
}

inline double log_block_value_int(std::int64_t n, double base) {
    // exact for base 2 via bit width; general bases go through the real path
    if (base == 2.0) {
        int e = 0;
        std::uint64_t v = static_cast<std::uint64_t>(n);
        while (v >= 2) { v >>= 1; ++e; }
        return (e % 2 == 0) ? 1.0 : 0.0;
    }
    return log_block_value(double(n), base);
}

}  // namespace detail

namespace signals {

/// Continuous library: constant, sinusoid, log_cosine, log_block,
/// convergent_plus_decay, sampled (value table).
inline ContinuousSignal continuous(const std::string& name, const ParamMap& params = {},
                                   std::string label = "") {
    using detail::get_param;
    if (label.empty()) label = name;
    if (name == "constant") {
        const double c = get_param(params, "value", 0.0);
        return ContinuousSignal([c](double) { return c; }, std::fabs(c), label);
    }
    if (name == "sinusoid") {
        const double w = get_param(params, "omega", 1.0);
        return ContinuousSignal([w](double x) { return std::sin(w * x); }, 1.0, label);
    }
    if (name == "log_cosine") {
        return ContinuousSignal([](double x) { return std::cos(std::log(std::max(x, 1.0))); }, 1.0, label);
    }
    if (name == "log_block") {
        const double b = get_param(params, "base", 2.0);
        if (!(b > 1.0)) throw std::invalid_argument("log_block: base must be > 1");
        return ContinuousSignal([b](double x) { return detail::log_block_value(x, b); }, 1.0, label);
    }
    if (name == "convergent_plus_decay") {
        const double a = get_param(params, "alpha", 0.0);
        // clamped to alpha for x < 0 so the declared bound holds on all of R
        return ContinuousSignal(
            [a](double x) { return x < 0.0 ? a : a + std::exp(-x) * std::sin(x); },
            std::fabs(a) + 1.0, label);
    }
    throw std::invalid_argument("unknown continuous signal: " + name);
}

inline ContinuousSignal sampled(const std::vector<std::pair<double, double>>& table,
                                std::string label = "sampled") {
    if (table.size() < 2) throw std::invalid_argument("sampled: need at least two points");
    auto pts = std::make_shared<std::vector<std::pair<double, double>>>(table);
    std::sort(pts->begin(), pts->end());
    double bound = 0.0;
    for (auto& [t, v] : *pts) bound = std::max(bound, std::fabs(v));
    return ContinuousSignal(
        [pts](double x) {
            // piecewise constant: value of the last knot at or before x
            auto it = std::upper_bound(pts->begin(), pts->end(), std::make_pair(x, 1e308));
            if (it == pts->begin()) return it->second;
            return std::prev(it)->second;
        },
        bound, std::move(label));
}

/// Discrete library: constant, log_cosine, log_block, alternating,
/// convergent_plus_decay.
inline DiscreteSignal discrete(const std::string& name, const ParamMap& params = {},
                               std::string label = "") {
    using detail::get_param;
    if (label.empty()) label = name;
    if (name == "constant") {
        const double c = get_param(params, "value", 0.0);
        return DiscreteSignal([c](std::int64_t) { return c; }, std::fabs(c), label);
    }
    if (name == "log_cosine") {
        return DiscreteSignal([](std::int64_t n) { return std::cos(std::log(double(n))); }, 1.0, label);
    }
    if (name == "log_block") {
        const double b = get_param(params, "base", 2.0);
        if (!(b > 1.0)) throw std::invalid_argument("log_block: base must be > 1");
        return DiscreteSignal([b](std::int64_t n) { return detail::log_block_value_int(n, b); }, 1.0, label);
    }
    if (name == "alternating") {
        return DiscreteSignal([](std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }, 1.0, label);
    }
    if (name == "convergent_plus_decay") {
        const double a = get_param(params, "alpha", 0.0);
        return DiscreteSignal(
            [a](std::int64_t n) { return a + std::exp(-double(n)) * std::sin(double(n)); },
            std::fabs(a) + 1.0, label);
    }
    throw std::invalid_argument("unknown discrete signal: " + name);
}

/// Multiplicative library: constant, log_cosine (= cos(log x)), log_block,
/// log_alternating (+-1 on [e^k, e^{k+1})). All carry a log-form generator.
inline MultiplicativeSignal multiplicative(const std::string& name, const ParamMap& params = {},
                                           std::string label = "") {
    using detail::get_param;
    if (label.empty()) label = name;
    if (name == "constant") {
        const double c = get_param(params, "value", 0.0);
        return MultiplicativeSignal([c](double) { return c; }, [c](double) { return c; },
                                    std::fabs(c), label);
    }
    if (name == "log_cosine") {
        return MultiplicativeSignal([](double x) { return std::cos(std::log(x)); },
                                    [](double u) { return std::cos(u); }, 1.0, label);
    }
    if (name == "log_block") {
        const double b = get_param(params, "base", 2.0);
        if (!(b > 1.0)) throw std::invalid_argument("log_block: base must be > 1");
        const double lb = std::log(b);
        auto from_u = [lb](double u) {
            const auto k = static_cast<long long>(std::floor(u / lb));
            return (((k % 2) + 2) % 2 == 0) ? 1.0 : 0.0;
        };
        return MultiplicativeSignal([b](double x) { return detail::log_block_value(x, b); }, from_u,
                                    1.0, label);
    }
    if (name == "log_alternating") {
        auto from_u = [](double u) {
            const auto k = static_cast<long long>(std::floor(u));
            return (((k % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
        };
        return MultiplicativeSignal([from_u](double x) { return from_u(std::log(x)); }, from_u, 1.0,
                                    label);
    }
    throw std::invalid_argument("unknown multiplicative signal: " + name);
}

}  // namespace signals
}  // namespace sumlab
