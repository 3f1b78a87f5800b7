#include "wpccrn/core_math.hpp"

#include <doctest.h>

#include <cmath>

using namespace wpccrn;

TEST_SUITE_BEGIN("core-math");

TEST_CASE("lambert_w0 fixed points") {
    CHECK(lambert_w0(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lambert_w0(M_E) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK_THROWS_AS(lambert_w0(-0.37), std::domain_error);
}

TEST_CASE("lambert_w0 round trip over [-1, 10]") {
    for (int k = 0; k <= 1100; ++k) {
        double w = -1.0 + 11.0 * k / 1100.0;
        double x = w * std::exp(w);
        double back = lambert_w0(x);
        CHECK(std::abs(back - w) <= 1e-9 * std::max(1.0, std::abs(w)));
    }
}

TEST_CASE("rate stationarity root") {
    CHECK(solve_rate_kkt_root(0.0) == 0.0);
    // unique x with ln(1+x) - x/(1+x) = 1, frozen from an mpmath bisection
    CHECK(solve_rate_kkt_root(1.0) ==
          doctest::Approx(5.3053952792716912).epsilon(1e-10));
    CHECK(solve_rate_kkt_root(std::log(2.0) - 0.5) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("root finder agrees with the closed form over (0, 5]") {
    for (int k = 1; k <= 100; ++k) {
        double nu = 5.0 * k / 100.0;
        double a = solve_rate_kkt_root(nu);
        double b = rate_kkt_root_closed_form(nu);
        CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("shifted stationarity root") {
    // a = 1 reduces to the plain root
    double nu = 0.7;
    CHECK(shifted_rate_kkt_root(1.0, nu) ==
          doctest::Approx(solve_rate_kkt_root(nu)).epsilon(1e-10));
    // direct check of the defining equation
    double a = 3.5, c = 2.2;
    double y = shifted_rate_kkt_root(a, c);
    CHECK(std::log(a + y) - y / (a + y) == doctest::Approx(c).epsilon(1e-12));
    // c below ln(a): no positive root
    CHECK(shifted_rate_kkt_root(3.5, 1.0) == 0.0);
}

TEST_CASE("inverse of the energy-per-time marginal") {
    for (double x : {1e-3, 0.1, 1.0, 10.0, 1e4}) {
        double v = (1.0 / (1.0 + x)) / marginal_rate_time(x);
        CHECK(inverse_energy_per_time_value(v) ==
              doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("bisection_root") {
    CHECK(bisection_root([](double x) { return x - 2.0; }, 0.0, 4.0, 1e-9) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(bisection_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-9) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(bisection_root([](double x) { return std::log1p(x) - 1.0; }, 0.0, 10.0, 1e-10) ==
          doctest::Approx(M_E - 1.0).epsilon(1e-9));
    CHECK_THROWS_AS(bisection_root([](double x) { return x + 1.0; }, 0.0, 1.0, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("golden_section_max") {
    auto [x1, v1] = golden_section_max(
        [](double x) { return -(x - 1.0) * (x - 1.0); }, 0.0, 3.0, 1e-10);
    CHECK(x1 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(v1 == doctest::Approx(0.0).epsilon(1e-12));

    // strictly increasing: the maximizer is the upper boundary
    auto [x2, v2] = golden_section_max(
        [](double x) { return x * std::log1p(1.0 / x); }, 0.01, 100.0, 1e-10);
    CHECK(x2 == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(v2 == doctest::Approx(100.0 * std::log1p(0.01)).epsilon(1e-12));

    auto [x3, v3] = golden_section_max(
        [](double x) { return std::log1p(x) - 0.5 * x; }, 0.0, 5.0, 1e-10);
    CHECK(x3 == doctest::Approx(1.0).epsilon(1e-8));
    (void)v3;

    // degenerate interval
    auto [x4, v4] = golden_section_max([](double x) { return -x * x; }, 2.0, 2.0, 1e-10);
    CHECK(x4 == 2.0);
    CHECK(v4 == -4.0);
}

TEST_CASE("golden section recovers the vertex of concave quadratics") {
    for (int k = 0; k < 50; ++k) {
        double c = -2.0 + 4.5 * k / 49.0;
        auto [x, v] = golden_section_max(
            [c](double x) { return -(x - c) * (x - c) * 3.0; }, -2.0, 2.5, 1e-9);
        (void)v;
        CHECK(std::abs(x - std::clamp(c, -2.0, 2.5)) <= 1e-7);
    }
}

TEST_CASE("diminishing_step") {
    CHECK(diminishing_step(0.1, 1) == doctest::Approx(0.1));
    CHECK(diminishing_step(0.1, 4) == doctest::Approx(0.05));
    CHECK(diminishing_step(1.0, 100) == doctest::Approx(0.1));
    CHECK_THROWS_AS(diminishing_step(0.1, 0), std::invalid_argument);
}

TEST_CASE("tolerance validation") {
    SolverTolerances t;
    CHECK_NOTHROW(t.validate());
    t.epsilon = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.max_iterations = 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.initial_step = -1.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_SUITE_END();
