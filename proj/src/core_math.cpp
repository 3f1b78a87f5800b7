#include "wpccrn/core_math.hpp"

#include <algorithm>
#include <cmath>

namespace wpccrn {

namespace {
constexpr double kInvE = 0.36787944117144232; // 1/e
}

double lambert_w0(double x) {
    if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
    if (x < -kInvE - 1e-12) throw std::domain_error("lambert_w0: argument below -1/e");
    if (x <= -kInvE) return -1.0;
    if (x == 0.0) return 0.0;

    double w;
    if (x < -0.30) {
        // Series about the branch point w = -1, p = sqrt(2(e*x + 1)).
        double p = std::sqrt(2.0 * (M_E * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else if (x < 1.0) {
        w = x * (1.0 - x + 1.5 * x * x);
        if (w <= -0.999) w = -0.999;
    } else {
        double lx = std::log(x);
        double llx = std::log(lx);
        w = lx - llx + llx / lx;
    }

    for (int it = 0; it < 60; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        double wp1 = w + 1.0;
        if (std::abs(wp1) < 1e-12) break; // at the branch point
        double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        double dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return std::max(w, -1.0);
}

double solve_rate_kkt_root(double nu) {
    if (nu < 0.0) throw std::invalid_argument("solve_rate_kkt_root: nu must be >= 0");
    if (nu == 0.0) return 0.0;
    // ln(1+x) - x/(1+x) ~ ln(x) - 1 for large x, so exp(nu+2) overshoots.
    double hi = std::exp(nu + 2.0);
    double lo = 0.0;
    double x = bisection_root([nu](double t) { return marginal_rate_time(t) - nu; },
                              lo, hi, 1e-13 * (1.0 + hi) < 1e-10 ? 1e-13 * (1.0 + hi) : 1e-10);
    // Two Newton polish steps sharpen the bisection estimate to ~1e-14 relative.
    for (int i = 0; i < 2; ++i) {
        double r = marginal_rate_time(x) - nu;
        double d = x / ((1.0 + x) * (1.0 + x));
        if (d <= 0.0) break;
        x -= r / d;
        if (x < 0.0) x = 0.0;
    }
    return x;
}

double rate_kkt_root_closed_form(double nu) {
    if (nu < 0.0) throw std::invalid_argument("rate_kkt_root_closed_form: nu must be >= 0");
    if (nu == 0.0) return 0.0;
    double w = lambert_w0(-std::exp(-(nu + 1.0)));
    return std::exp(w + nu + 1.0) - 1.0;
}

double shifted_rate_kkt_root(double a, double c) {
    if (!(a >= 1.0)) throw std::invalid_argument("shifted_rate_kkt_root: a must be >= 1");
    double la = std::log(a);
    if (c <= la) return 0.0;
    double w = lambert_w0(-a * std::exp(-(c + 1.0)));
    double u = std::exp(w + c + 1.0);
    return std::max(u - a, 0.0);
}

double inverse_energy_per_time_value(double v) {
    if (!(v > 0.0)) throw std::invalid_argument("inverse_energy_per_time_value: v must be > 0");
    // Solve (1+x)*ln(1+x) - x = 1/v via u = 1+x = exp(1 + W((1/v - 1)/e)).
    double arg = (1.0 / v - 1.0) / M_E;
    double u = std::exp(1.0 + lambert_w0(arg));
    return std::max(u - 1.0, 0.0);
}

} // namespace wpccrn
