#pragma once

#include <string>

namespace rci {

enum class ModelKind {
    ClassicalExp, // compound Poisson, exponential claims, no diffusion
    PerturbedExp, // compound Poisson, exponential claims, Brownian perturbation
    StableSn,     // spectrally negative stable, psi(s) = (s+c)^alpha - c^alpha
};

// Validated description of one risk model. The cash outflow is
// Y_t = -c t + S_t + sigma B_t; claims follow the kind-specific Levy measure.
struct ModelSpec {
    ModelKind kind = ModelKind::ClassicalExp;
    double lambda = 0.0; // Poisson claim intensity (exponential-claims kinds)
    double mu = 0.0;     // exponential claim-rate parameter, mean claim 1/mu
    double sigma = 0.0;  // diffusion volatility, zero unless PerturbedExp
    double alpha = 0.0;  // stability index in (1, 2), StableSn only
    double c = 0.0;      // premium rate

    static ModelSpec classical_exp(double lambda, double mu, double c);
    static ModelSpec classical_exp_loading(double lambda, double mu, double theta);
    static ModelSpec perturbed_exp(double lambda, double mu, double sigma, double c);
    static ModelSpec perturbed_exp_loading(double lambda, double mu, double sigma, double theta);
    static ModelSpec stable(double alpha, double c);

    bool has_exponential_claims() const { return kind != ModelKind::StableSn; }
    // Safety loading implied by c for exponential-claims models.
    double loading() const;
    std::string describe() const;
};

// Laplace exponent psi of the dual process X = -Y. Defined for s >= 0; the
// exponential-claims models additionally accept s in (-mu, 0) so that the
// negative root Theta(q) can be located.
double laplace_exponent(const ModelSpec& model, double s);

// First derivative of the Laplace exponent.
double laplace_exponent_prime(const ModelSpec& model, double s);

// Right inverse Phi(q) = sup{s >= 0 : psi(s) = q}. Closed form for the
// classical and stable models, safeguarded Newton iteration otherwise.
double phi_inverse(const ModelSpec& model, double q);

// Negative root Theta(q) of psi(s) = q in (-mu, 0]. Exponential-claims only.
double theta_root(const ModelSpec& model, double q);

// Levy tail mass nu(y, inf) for y > 0.
double levy_tail(const ModelSpec& model, double y);

// Levy density nu(dy)/dy for y > 0.
double levy_density(const ModelSpec& model, double y);

// Expected aggregate claims per unit time E[S_1] = int_0^inf nu(y, inf) dy.
// Infinite for the stable model (the small-jump integral diverges).
double mean_jump(const ModelSpec& model);

// Dimensionless factor rho = E[S_1] / c used by the sigma > 0 closed forms.
double rho_factor(const ModelSpec& model);

// Gamma(-alpha) for alpha in (1, 2); positive there.
double gamma_neg_alpha(double alpha);

} // namespace rci
