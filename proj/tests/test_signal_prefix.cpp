// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sumlab/grid.hpp"
#include "sumlab/prefix.hpp"
#include "sumlab/signal.hpp"

using namespace sumlab;

namespace {
const double kPi = std::acos(-1.0);

ContinuousSignal block_signal() {
    // 1 on [0,1) mod 2
    return ContinuousSignal([](double t) { return std::fmod(std::fmod(t, 2.0) + 2.0, 2.0) < 1.0 ? 1.0 : 0.0; },
                            1.0, "block2");
}
}  // namespace

TEST_CASE("window mean of a constant is exact") {
    const auto phi = signals::continuous("constant", {{"value", 0.7}});
    const PrefixTable t = build_prefix(phi, 0.0, 100.0, 0.01);
    CHECK(t.window_mean(3.0, 17.0) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(t.window_mean(0.25, 1.5) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("window mean of sine over a full period vanishes") {
    const auto phi = signals::continuous("sinusoid", {{"omega", 1.0}});
    const PrefixTable t = build_prefix(phi, 0.0, 10.0, 1e-3);
    CHECK(std::fabs(t.window_mean(0.0, 2.0 * kPi)) < 1e-6);
}

TEST_CASE("window mean of the period-2 block: hand oracle 2/3") {
    // integral over [0,3] = |[0,1)| + |[2,3)| = 2, mean 2/3
    const PrefixTable t = build_prefix(block_signal(), 0.0, 10.0, 1e-3);
    CHECK(t.window_mean(0.0, 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    // same value from the independent quadrature oracle
    const double q = oracle::window_mean([](double x) { return std::fmod(x, 2.0) < 1.0 ? 1.0 : 0.0; }, 0.0, 3.0);
    CHECK(t.window_mean(0.0, 3.0) == doctest::Approx(q).epsilon(1e-4));
}

TEST_CASE("build_prefix cumulative values") {
    const auto one = signals::continuous("constant", {{"value", 1.0}});
    SUBCASE("unit weight over [0,10]") {
        const PrefixTable t = build_prefix(one, 0.0, 10.0, 0.1);
        CHECK(t.cumulative_at(10.0) == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("one-over-t weight over [1, e]") {
        const PrefixTable t = build_prefix(one, 1.0, std::exp(1.0), 1e-4, PrefixTable::Weight::one_over_t);
        CHECK(t.cumulative_at(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("identity signal over [0,1]") {
        const ContinuousSignal ramp([](double t) { return t; }, 1.0, "ramp");
        const PrefixTable t = build_prefix(ramp, 0.0, 1.0, 1e-4);
        CHECK(t.cumulative_at(1.0) == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("window errors") {
    const auto phi = signals::continuous("constant", {{"value", 1.0}});
    const PrefixTable t = build_prefix(phi, 0.0, 10.0, 0.01);
    CHECK_THROWS_AS((void)t.window_mean(8.0, 3.0), std::out_of_range);
    CHECK_THROWS_AS((void)t.window_mean(1.0, 0.001), std::invalid_argument);
    CHECK_THROWS_AS((void)build_prefix(phi, 0.0, 10.0, 0.01, PrefixTable::Weight::one_over_t),
                    std::invalid_argument);
}

TEST_CASE("signal library generators") {
    CHECK(signals::continuous("constant", {{"value", 0.7}})(123.4) == 0.7);
    CHECK(signals::discrete("log_block", {{"base", 2.0}})(5) == 1.0);  // 5 in [4, 8)
    CHECK(signals::discrete("log_block", {{"base", 2.0}})(8) == 0.0);  // 8 in [8, 16)
    CHECK(signals::discrete("alternating")(4) == 1.0);
    CHECK(signals::discrete("alternating")(7) == -1.0);
    CHECK_THROWS_AS(signals::continuous("no_such_signal"), std::invalid_argument);
    CHECK_THROWS_AS(signals::continuous("log_block", {{"base", 0.5}}), std::invalid_argument);
    // continuous log_block matches the discrete one on integers
    const auto cb = signals::continuous("log_block", {{"base", 2.0}});
    for (std::int64_t n : {1, 2, 3, 4, 7, 8, 15, 16, 31, 32, 1023, 1024})
        CHECK(cb(double(n)) == signals::discrete("log_block", {{"base", 2.0}})(n));
}

TEST_CASE("declared bound is enforced at evaluation") {
    const ContinuousSignal liar([](double) { return 2.0; }, 1.0, "liar");
    CHECK_THROWS_AS((void)liar(0.0), std::domain_error);
}

TEST_CASE("window-mean boundedness over random windows") {
    const auto phi = signals::continuous("sinusoid", {{"omega", 3.0}});
    const PrefixTable t = build_prefix(phi, 0.0, 200.0, 0.01);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> xs(0.0, 150.0), th(0.05, 49.0);
    for (int i = 0; i < 500; ++i) {
        const double x = xs(rng), theta = th(rng);
        const double m = t.window_mean(x, theta);
        CHECK(m <= 1.0 + 1e-12);
        CHECK(m >= -1.0 - 1e-12);
    }
}

TEST_CASE("evaluator linearity on a shared grid") {
    const auto f = signals::continuous("sinusoid", {{"omega", 1.0}});
    const auto g = signals::continuous("log_cosine");
    const ContinuousSignal combo([f, g](double x) { return 1.5 * f(x) - 0.25 * g(x); }, 1.75, "combo");
    const PrefixTable tf = build_prefix(f, 0.0, 50.0, 0.01);
    const PrefixTable tg = build_prefix(g, 0.0, 50.0, 0.01);
    const PrefixTable tc = build_prefix(combo, 0.0, 50.0, 0.01);
    for (double x : {0.0, 3.7, 11.0}) {
        const double want = 1.5 * tf.window_mean(x, 8.0) - 0.25 * tg.window_mean(x, 8.0);
        CHECK(tc.window_mean(x, 8.0) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("prefix consistency: adjacent windows reproduce the wide window") {
    const auto phi = signals::continuous("log_cosine");
    const PrefixTable t = build_prefix(phi, 0.0, 100.0, 0.01);
    for (double x : {1.0, 12.5, 40.0}) {
        const double theta = 7.0;
        const double wide = t.window_mean(x, 2.0 * theta) * 2.0 * theta;
        const double parts = t.window_mean(x, theta) * theta + t.window_mean(x + theta, theta) * theta;
        CHECK(wide == doctest::Approx(parts).epsilon(1e-12));
    }
}

TEST_CASE("grid validation names the offending field") {
    GridSpec g = GridSpec::standard();
    g.theta_grid.push_back(4096.0);  // exceeds (x_max - x_cut) / 2
    try {
        g.validate();
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("theta_grid") != std::string::npos);
    }
    GridSpec g2 = GridSpec::standard();
    g2.theta_grid = {1.0, 2.0, 3.0};  // ratio not constant
    CHECK_THROWS_AS(g2.validate(), std::invalid_argument);
    DiscreteGrid d = DiscreteGrid::standard();
    d.theta_grid.push_back(std::int64_t(1) << 20);
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("scan_window_means matches pointwise window_mean") {
    const auto phi = signals::continuous("sinusoid", {{"omega", 2.0}});
    const PrefixTable t = build_prefix(phi, 0.0, 60.0, 0.01);
    const WindowScan s = scan_window_means(t, 10.0, 50.0, 4.0);
    double sup = -1e300, inf = 1e300;
    for (double x = 10.0; x <= 50.0 + 1e-12; x += 0.01) {
        const double m = t.window_mean(x, 4.0);
        sup = std::max(sup, m);
        inf = std::min(inf, m);
    }
    CHECK(s.sup == doctest::Approx(sup).epsilon(1e-12));
    CHECK(s.inf == doctest::Approx(inf).epsilon(1e-12));
}
