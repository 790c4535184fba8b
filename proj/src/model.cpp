#include "rci/model.hpp"

#include "rci/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rci {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok)
        throw std::invalid_argument(message);
}

void validate_exponential_claims(double lambda, double mu, double c) {
    require(lambda > 0.0, "model: lambda must be positive");
    require(mu > 0.0, "model: mu must be positive");
    require(c > 0.0, "model: premium rate c must be positive");
    // Net profit condition E[S_1] = lambda/mu < c.
    require(lambda / mu < c, "model: net profit condition violated (lambda/mu >= c)");
}

} // namespace

ModelSpec ModelSpec::classical_exp(double lambda, double mu, double c) {
    validate_exponential_claims(lambda, mu, c);
    ModelSpec m;
    m.kind = ModelKind::ClassicalExp;
    m.lambda = lambda;
    m.mu = mu;
    m.c = c;
    return m;
}

ModelSpec ModelSpec::classical_exp_loading(double lambda, double mu, double theta) {
    require(theta > 0.0, "model: safety loading theta must be positive");
    require(lambda > 0.0 && mu > 0.0, "model: lambda and mu must be positive");
    return classical_exp(lambda, mu, (1.0 + theta) * lambda / mu);
}

ModelSpec ModelSpec::perturbed_exp(double lambda, double mu, double sigma, double c) {
    validate_exponential_claims(lambda, mu, c);
    require(sigma > 0.0, "model: sigma must be positive for the perturbed model");
    ModelSpec m;
    m.kind = ModelKind::PerturbedExp;
    m.lambda = lambda;
    m.mu = mu;
    m.sigma = sigma;
    m.c = c;
    return m;
}

ModelSpec ModelSpec::perturbed_exp_loading(double lambda, double mu, double sigma, double theta) {
    require(theta > 0.0, "model: safety loading theta must be positive");
    require(lambda > 0.0 && mu > 0.0, "model: lambda and mu must be positive");
    return perturbed_exp(lambda, mu, sigma, (1.0 + theta) * lambda / mu);
}

ModelSpec ModelSpec::stable(double alpha, double c) {
    require(alpha > 1.0 && alpha < 2.0, "model: alpha must lie strictly in (1, 2)");
    require(c > 0.0, "model: premium rate c must be positive");
    ModelSpec m;
    m.kind = ModelKind::StableSn;
    m.alpha = alpha;
    m.c = c;
    return m;
}

double ModelSpec::loading() const {
    if (!has_exponential_claims())
        throw std::invalid_argument("model: loading undefined for the stable model");
    return c * mu / lambda - 1.0;
}

std::string ModelSpec::describe() const {
    std::ostringstream out;
    switch (kind) {
    case ModelKind::ClassicalExp:
        out << "classical-exp lambda=" << lambda << " mu=" << mu << " c=" << c;
        break;
    case ModelKind::PerturbedExp:
        out << "perturbed-exp lambda=" << lambda << " mu=" << mu << " sigma=" << sigma << " c=" << c;
        break;
    case ModelKind::StableSn:
        out << "stable alpha=" << alpha << " c=" << c;
        break;
    }
    return out.str();
}

double gamma_neg_alpha(double alpha) {
    // Gamma(-alpha) = Gamma(2 - alpha) / (alpha (alpha - 1)) for alpha in (1, 2).
    return std::tgamma(2.0 - alpha) / (alpha * (alpha - 1.0));
}

double laplace_exponent(const ModelSpec& model, double s) {
    if (model.kind == ModelKind::StableSn) {
        if (s < 0.0)
            throw std::invalid_argument("laplace_exponent: s must be nonnegative for the stable model");
        return std::pow(s + model.c, model.alpha) - std::pow(model.c, model.alpha);
    }
    if (s <= -model.mu)
        throw std::invalid_argument("laplace_exponent: s must exceed -mu");
    return model.c * s + 0.5 * model.sigma * model.sigma * s * s - model.lambda * s / (model.mu + s);
}

double laplace_exponent_prime(const ModelSpec& model, double s) {
    if (model.kind == ModelKind::StableSn) {
        if (s < 0.0)
            throw std::invalid_argument("laplace_exponent_prime: s must be nonnegative");
        return model.alpha * std::pow(s + model.c, model.alpha - 1.0);
    }
    if (s <= -model.mu)
        throw std::invalid_argument("laplace_exponent_prime: s must exceed -mu");
    const double denom = model.mu + s;
    return model.c + model.sigma * model.sigma * s - model.lambda * model.mu / (denom * denom);
}

namespace {

// Discriminant root eta_q shared by the classical Phi/Theta closed forms.
double eta_q(const ModelSpec& m, double q) {
    const double base = q + m.lambda - m.c * m.mu;
    return std::sqrt(base * base + 4.0 * q * m.mu * m.c);
}

double phi_perturbed(const ModelSpec& model, double q) {
    if (q == 0.0)
        return 0.0;

    // Bracket [0, s_hi] with psi(s_hi) > q, doubling as needed.
    double s_hi = std::max(1.0, q / model.c);
    while (laplace_exponent(model, s_hi) <= q)
        s_hi *= 2.0;

    double s = std::max(q / model.c, std::sqrt(2.0 * q) / model.sigma);
    if (s <= 0.0 || s >= s_hi)
        s = 0.5 * s_hi;
    double lo = 0.0, hi = s_hi;
    const double tol = 1e-12 * std::max(1.0, q);
    for (int iter = 0; iter < 100; ++iter) {
        const double err = laplace_exponent(model, s) - q;
        if (std::abs(err) <= tol)
            return s;
        (err > 0.0 ? hi : lo) = s;
        const double step = err / laplace_exponent_prime(model, s);
        double next = s - step;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi); // bisection fallback
        s = next;
    }
    throw NumericError("phi_inverse: Newton iteration did not converge");
}

} // namespace

double phi_inverse(const ModelSpec& model, double q) {
    if (q < 0.0)
        throw std::invalid_argument("phi_inverse: q must be nonnegative");
    switch (model.kind) {
    case ModelKind::ClassicalExp:
        return (q + model.lambda - model.c * model.mu + eta_q(model, q)) / (2.0 * model.c);
    case ModelKind::StableSn: {
        const double ca = std::pow(model.c, model.alpha);
        return std::pow(q + ca, 1.0 / model.alpha) - model.c;
    }
    case ModelKind::PerturbedExp:
        return phi_perturbed(model, q);
    }
    throw std::logic_error("phi_inverse: unknown model kind");
}

double theta_root(const ModelSpec& model, double q) {
    if (q < 0.0)
        throw std::invalid_argument("theta_root: q must be nonnegative");
    if (!model.has_exponential_claims())
        throw std::invalid_argument("theta_root: defined for exponential-claims models only");
    if (model.kind == ModelKind::ClassicalExp)
        return (q + model.lambda - model.c * model.mu - eta_q(model, q)) / (2.0 * model.c);

    // PerturbedExp: psi is convex on (-mu, 0] with psi -> +inf at -mu and
    // psi(0) = 0, so psi(s) = q has exactly one root there.
    const double lo = -model.mu * (1.0 - 1e-12);
    double hi = -model.mu * 1e-14;
    const auto f = [&](double s) { return laplace_exponent(model, s) - q; };
    if (q == 0.0) {
        // Avoid the root at s = 0: start from where psi is clearly below 0.
        hi = -model.mu * 1e-6;
        while (f(hi) >= 0.0)
            hi *= 0.5;
    }
    return find_root(f, lo, hi, 1e-14);
}

double levy_density(const ModelSpec& model, double y) {
    if (!(y > 0.0))
        throw std::invalid_argument("levy_density: y must be positive");
    if (model.kind == ModelKind::StableSn)
        return std::exp(-model.c * y) * std::pow(y, -1.0 - model.alpha) / gamma_neg_alpha(model.alpha);
    return model.lambda * model.mu * std::exp(-model.mu * y);
}

double levy_tail(const ModelSpec& model, double y) {
    if (!(y > 0.0))
        throw std::invalid_argument("levy_tail: y must be positive");
    if (model.kind == ModelKind::StableSn) {
        return integrate([&](double u) { return levy_density(model, u); }, y,
                         std::numeric_limits<double>::infinity(),
                         QuadratureConfig{1e-13, 1e-10, 20000});
    }
    return model.lambda * std::exp(-model.mu * y);
}

double mean_jump(const ModelSpec& model) {
    if (model.kind == ModelKind::StableSn) {
        // int_0^1 y nu(dy) diverges for alpha > 1; the tail integral is infinite.
        return std::numeric_limits<double>::infinity();
    }
    return model.lambda / model.mu;
}

double rho_factor(const ModelSpec& model) {
    return mean_jump(model) / model.c;
}

} // namespace rci
