#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

// Scalar numerical primitives shared by the resource-allocation solvers.
namespace wpccrn {

struct SolverTolerances {
    double epsilon = 1e-5;      // convergence threshold for iterative solvers
    int max_iterations = 20000; // hard cap before flagging non-convergence
    double initial_step = 0.1;  // subgradient step size, shrunk as step/sqrt(l)

    // Argument tolerance for the scalar line searches used by the
    // closed-form solver path. Tight enough that stationarity residuals
    // land well below `epsilon`.
    double line_search_tol = 1e-10;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
        if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be > 0");
    }
};

/// Principal branch of the Lambert W function, w * exp(w) = x for x >= -1/e.
/// Relative accuracy ~1e-14 via Halley iteration from a series/log seed.
double lambert_w0(double x);

/// Marginal throughput with respect to transmission time at SNR x:
/// d/dt [t*ln(1+g/t)] evaluated at x = g/t, i.e. ln(1+x) - x/(1+x).
/// Strictly increasing from 0, so it has a well-defined inverse.
inline double marginal_rate_time(double x) {
    return std::log1p(x) - x / (1.0 + x);
}

/// Unique x >= 0 with ln(1+x) - x/(1+x) = nu (monotone bracketing/bisection,
/// absolute accuracy 1e-10 or better). This is the stationarity condition
/// behind every optimal access-time split.
double solve_rate_kkt_root(double nu);

/// Same root through the closed form exp(W(-exp(-(nu+1))) + nu + 1) - 1.
/// Kept as an algebraic cross-check of solve_rate_kkt_root.
double rate_kkt_root_closed_form(double nu);

/// Unique y >= 0 with ln(a+y) - y/(a+y) = c for a >= 1 and c >= ln(a),
/// via exp(W(-a*exp(-(c+1))) + c + 1) - a. Returns 0 when c <= ln(a).
/// Governs the optimal relaying duration.
double shifted_rate_kkt_root(double a, double c);

/// Inverse of x -> [1/(1+x)] / [ln(1+x) - x/(1+x)] (strictly decreasing on
/// x > 0). Closed form exp(1 + W((1/v - 1)/e)) - 1 for v > 0.
/// This is the marginal access-energy value per unit of marginal time value,
/// used by the max-min solver's water-filling step.
double inverse_energy_per_time_value(double v);

/// Root of a monotone function on [lo, hi] by bisection; interval width <= tol.
/// Throws std::invalid_argument when f(lo) and f(hi) have the same strict sign.
template <typename F>
double bisection_root(F&& f, double lo, double hi, double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisection_root: endpoints do not bracket a root");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at floating-point resolution
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Maximizer of a unimodal function on [lo, hi] by golden-section search.
/// Returns (argmax, max). Degenerate interval (hi <= lo) returns lo.
template <typename G>
std::pair<double, double> golden_section_max(G&& g, double lo, double hi, double tol) {
    if (!(hi > lo)) return {lo, g(lo)};
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = g(x1);
        }
        if (x2 <= x1) break; // floating-point resolution
    }
    // Keep the best of the probe points and the endpoints.
    double xm = (f1 >= f2) ? x1 : x2;
    double fm = (f1 >= f2) ? f1 : f2;
    double fa = g(lo), fb = g(hi);
    if (fa > fm) { xm = lo; fm = fa; }
    if (fb > fm) { xm = hi; fm = fb; }
    return {xm, fm};
}

/// Diminishing subgradient step: initial / sqrt(iteration), iteration >= 1.
inline double diminishing_step(double initial, int iteration) {
    if (iteration < 1) throw std::invalid_argument("iteration must be >= 1");
    return initial / std::sqrt(static_cast<double>(iteration));
}

} // namespace wpccrn
