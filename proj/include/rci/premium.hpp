#pragma once

#include "rci/model.hpp"
#include "rci/numerics.hpp"
#include "rci/scale.hpp"

#include <variant>

namespace rci {

struct ExtremeLoss {
    double m = 0.0; // retention: injections below m stay with the shareholders
};

struct Proportional {
    double a = 0.5; // ceded fraction, a < 1 unless explicitly overridden
};

struct PremiumQuery {
    double q = 0.05; // discount rate, must stay >= 1e-8 (value diverges at q = 0)
    double x = 1.0;  // initial surplus
    std::variant<ExtremeLoss, Proportional> contract = ExtremeLoss{};
    bool allow_a_ge_1 = false;
};

struct PremiumBreakdown {
    double phi_term = 0.0;     // overshoot functional varphi(q, x, m)
    double kappa_term = 0.0;   // ruin transform kappa(q, x)
    double delta_factor = 0.0; // geometric multiplier delta(q, sigma, m)
    double i_factor = 0.0;     // int e^{Phi u} H*G(du)
    double i_m_value = 0.0;    // kernel integral I_m
    double premium = 0.0;      // phi_term + delta_factor * kappa_term
};

// Dual evaluation of delta(q, sigma, m). `primary` is I_m / (1 - I) assembled
// from the kernel integrals; `closed_form` is the fully reduced expression
// with rho = E[S_1]/c. The two agree at m = 0; for sigma > 0 and m > 0 the
// reduced expression drops an m-proportional term, so `rel_gap` is reported
// rather than raised.
struct DeltaDiagnostics {
    double primary = 0.0;
    double closed_form = 0.0;
    bool closed_form_applicable = false; // sigma > 0 only
    double rel_gap = 0.0;
    double i_m = 0.0;
    double i_factor = 0.0;
};

// Quadrature tolerances for the non-closed-form paths.
struct PremiumConfig {
    QuadratureConfig outer{1e-13, 1e-8, 20000};
    QuadratureConfig inner{1e-13, 1e-9, 20000};
};

// t(x) = e^{Phi x} int_x^inf e^{-Phi v} nu(v, inf) dv.
double t_fn(const ModelSpec& model, double q, double x);
// Same quantity through quadrature for any model (closed-form cross-check).
double t_quadrature(const ModelSpec& model, double q, double x, const QuadratureConfig& cfg = {1e-13, 1e-9, 20000});

// h_m(x) = e^{Phi x} int_x^inf e^{-Phi v} int (u + m) nu(du + v + m) dv.
double h_m_fn(const ModelSpec& model, double q, double m, double x);
double h_m_quadrature(const ModelSpec& model, double q, double m, double x, const QuadratureConfig& cfg = {1e-13, 1e-9, 20000});
// Integrated-tail variant with inner integral (u - v) nu(du + m): omits the
// m-weighted tail mass, so it differs from h_m by a factor (m mu + 1) for
// exponential claims. Kept as a diagnostic; exponential-claims models only.
double h_m_excess_fn(const ModelSpec& model, double q, double m, double x);

// kappa(q, x) = f * t (x). Closed form for the classical model.
double kappa(const ModelSpec& model, double q, double x);
// Convolution route for any model (used by the equivalence checks).
double kappa_convolution(const ModelSpec& model, double q, double x, const PremiumConfig& cfg = {});
// First-passage identity Z^(q)(x) - q W^(q)(x) / Phi(q): the textbook value of
// E[e^{-q tau_x}; tau_x < inf], used to isolate the e^{-mu x} gap of the
// convolution form (see the validation report).
double kappa_first_passage(const ModelSpec& model, double q, double x);

// varphi(q, x, m) = f * h_m (x), the discounted overshoot functional.
double varphi(const ModelSpec& model, double q, double x, double m);
double varphi_convolution(const ModelSpec& model, double q, double x, double m, const PremiumConfig& cfg = {});

// I = int e^{Phi u} H*G(du). Raises NumericError outside (0, 1); for the
// stable model (where the bounded-variation identity behind the formula does
// not hold) use `geometric_factor_value` which reports without the guard.
double geometric_factor_i(const ModelSpec& model, double q);
double geometric_factor_value(const ModelSpec& model, double q);

// Kernel integral I_m = int_{u+v>m} e^{Phi (u+v)} (u+v) H(du) G(dv).
double i_m_kernel(const ModelSpec& model, double q, double m);
// sigma > 0 split I_m = I_m^1 + I_m^2 (exposed for the dual-evaluation tests).
double i_m1_kernel(const ModelSpec& model, double q, double m);
double i_m2_kernel(const ModelSpec& model, double q, double m);

double delta_factor(const ModelSpec& model, double q, double m);
DeltaDiagnostics delta_diagnostics(const ModelSpec& model, double q, double m);

PremiumBreakdown premium_extreme_loss(const ModelSpec& model, double q, double x, double m,
                                      const PremiumConfig& cfg = {});
PremiumBreakdown premium_proportional(const ModelSpec& model, double q, double x, double a,
                                      bool allow_a_ge_1 = false, const PremiumConfig& cfg = {});
PremiumBreakdown premium(const ModelSpec& model, const PremiumQuery& query, const PremiumConfig& cfg = {});

} // namespace rci
