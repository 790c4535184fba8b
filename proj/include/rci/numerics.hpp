#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace rci {

// Raised when a quadrature, root find or transform inversion cannot reach the
// requested accuracy. Input validation errors use std::invalid_argument.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 10000;
};

// Uniform grid on [0, x_max] including both endpoints.
struct Grid {
    double x_max = 1.0;
    int n_points = 2;

    double step() const { return x_max / static_cast<double>(n_points - 1); }
    double point(int i) const { return step() * static_cast<double>(i); }
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7/K15) integration of f over (a, b).
// b may be +infinity for a decaying tail: the range is truncated where |f|
// falls below 1e-14 of the largest magnitude probed from the lower limit.
double integrate(const Fn& f, double a, double b, const QuadratureConfig& cfg = {});

// Root of f on [lo, hi] by Brent's method; requires f(lo) * f(hi) <= 0.
// Stops when |f(root)| <= tol or the bracket width <= tol * max(1, |root|).
double find_root(const Fn& f, double lo, double hi, double tol = 1e-12);

// Convolution value (f*g)(x) = int_0^x f(x-y) g(y) dy.
// p_g and p_f soften integrable endpoint singularities (g near 0, f near 0)
// through the substitution y = w^p; p = 2 is harmless for smooth factors.
double convolve_at(const Fn& f, const Fn& g, double x, const QuadratureConfig& cfg = {},
                   double p_g = 2.0, double p_f = 2.0);

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for z >= 0.
// Series summation with early exit; asymptotic expansion beyond z = 150.
double mittag_leffler(double alpha, double beta, double z);

// Extended-precision transform callback for laplace_invert.
using LFn = std::function<long double(long double)>;

// Gaver-Stehfest inversion of a Laplace transform F at t > 0. n_terms must be
// even; the result is cross-checked against the (n_terms - 2) evaluation and a
// NumericError is raised when the two disagree (cancellation diagnostic).
//
// Accuracy is relative to the inverse's local scale. When the inverse grows or
// decays like e^{a t}, invert the tilted transform F(. + a) and multiply the
// result by e^{a t}; this is how the scale-function evaluators use it.
double laplace_invert(const LFn& F, double t, int n_terms = 14);

} // namespace rci
