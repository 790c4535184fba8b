#include "rci/scale.hpp"

#include <cmath>
#include <stdexcept>

namespace rci {

namespace {

constexpr double kNodeRatio = 1.01; // node k at 1.01^k - 1
const double kLogNodeRatio = std::log(kNodeRatio);

} // namespace

ScaleEvaluator::ScaleEvaluator(const ModelSpec& model, double q) : model_(model), q_(q) {
    if (q < 0.0)
        throw std::invalid_argument("ScaleEvaluator: q must be nonnegative");
    phi_ = phi_inverse(model_, q_);
    switch (model_.kind) {
    case ModelKind::ClassicalExp: {
        const double base = q + model_.lambda - model_.c * model_.mu;
        eta_ = std::sqrt(base * base + 4.0 * q * model_.mu * model_.c);
        theta_ = (base - eta_) / (2.0 * model_.c);
        break;
    }
    case ModelKind::PerturbedExp: {
        theta_ = theta_root(model_, q_);
        // (psi(s) - q)(mu + s) = P(s), a cubic with positive leading
        // coefficient and real roots Phi > Theta > -mu > theta2.
        const double a3 = 0.5 * model_.sigma * model_.sigma;
        const double a2 = model_.c + 0.5 * model_.sigma * model_.sigma * model_.mu;
        const double a1 = model_.c * model_.mu - model_.lambda - q_;
        const double a0 = -q_ * model_.mu;
        const auto poly = [&](double s) { return ((a3 * s + a2) * s + a1) * s + a0; };
        double lo = -model_.mu - 1.0;
        while (poly(lo) >= 0.0)
            lo = 2.0 * lo - model_.mu;
        theta2_ = find_root(poly, lo, -model_.mu * (1.0 + 1e-14), 1e-14);
        const auto poly_prime = [&](double s) { return (3.0 * a3 * s + 2.0 * a2) * s + a1; };
        // Residues of (mu + s)/P(s); the Phi term of f cancels identically.
        f_coeff_theta_ = (model_.mu + theta_) / poly_prime(theta_) * (theta_ - phi_);
        f_coeff_theta2_ = (model_.mu + theta2_) / poly_prime(theta2_) * (theta2_ - phi_);
        break;
    }
    case ModelKind::StableSn:
        stable_z_ = q_ + std::pow(model_.c, model_.alpha);
        break;
    }
}

double ScaleEvaluator::theta() const {
    if (!model_.has_exponential_claims())
        throw std::invalid_argument("ScaleEvaluator: theta undefined for the stable model");
    return theta_;
}

double ScaleEvaluator::eta() const {
    if (model_.kind != ModelKind::ClassicalExp)
        throw std::invalid_argument("ScaleEvaluator: eta defined for the classical model only");
    return eta_;
}

double ScaleEvaluator::tilt_limit() const {
    return 1.0 / laplace_exponent_prime(model_, phi_);
}

double ScaleEvaluator::w(double x) const {
    if (x < 0.0)
        return 0.0;
    switch (model_.kind) {
    case ModelKind::ClassicalExp: {
        const double mu = model_.mu;
        return ((mu + phi_) * std::exp(phi_ * x) - (mu + theta_) * std::exp(theta_ * x)) / eta_;
    }
    case ModelKind::StableSn:
        return stable_w(x);
    case ModelKind::PerturbedExp:
        if (x == 0.0)
            return 0.0; // unbounded variation
        return std::exp(phi_ * x) * perturbed_tilted_cached(x);
    }
    throw std::logic_error("ScaleEvaluator::w: unknown model kind");
}

double ScaleEvaluator::w_prime(double x) const {
    if (!(x > 0.0))
        throw std::invalid_argument("ScaleEvaluator::w_prime: x must be positive");
    switch (model_.kind) {
    case ModelKind::ClassicalExp: {
        const double mu = model_.mu;
        return ((mu + phi_) * phi_ * std::exp(phi_ * x) - (mu + theta_) * theta_ * std::exp(theta_ * x)) / eta_;
    }
    case ModelKind::StableSn:
        return stable_w_prime(x);
    case ModelKind::PerturbedExp: {
        // Five-point central difference on direct inversions (the cubic cache
        // would inject interpolation wiggle into the quotient).
        double h = std::max(1e-6, 1e-6 * x);
        h = std::min(h, 0.25 * x);
        const auto w_direct = [&](double t) { return std::exp(phi_ * t) * perturbed_tilted_direct(t); };
        return (8.0 * (w_direct(x + h) - w_direct(x - h)) - (w_direct(x + 2.0 * h) - w_direct(x - 2.0 * h)))
               / (12.0 * h);
    }
    }
    throw std::logic_error("ScaleEvaluator::w_prime: unknown model kind");
}

double ScaleEvaluator::f(double x) const {
    if (!(x > 0.0))
        throw std::invalid_argument("ScaleEvaluator::f: x must be positive");
    if (model_.kind == ModelKind::ClassicalExp) {
        // (mu + Theta)(Phi - Theta) e^{Theta x} / eta = (mu + Theta) e^{Theta x} / c;
        // the leading e^{Phi x} parts cancel exactly.
        return (model_.mu + theta_) * std::exp(theta_ * x) / model_.c;
    }
    if (model_.kind == ModelKind::PerturbedExp) {
        // Exact residue form: the Phi pole drops out of W' - Phi W, leaving
        // two decaying exponentials. (The inversion route loses this factor
        // in rounding noise once e^{Phi x} is large; see w_prime for it.)
        return f_coeff_theta_ * std::exp(theta_ * x) + f_coeff_theta2_ * std::exp(theta2_ * x);
    }
    return w_prime(x) - phi_ * w(x);
}

double ScaleEvaluator::z(double x) const {
    if (x <= 0.0)
        return 1.0;
    if (model_.kind == ModelKind::ClassicalExp) {
        // Integrates the two-exponential form; q (mu + r)/r = q - c r' with
        // r r' = -q mu / c keeps the expression in closed form.
        const double a = q_ - model_.c * theta_; // = q (mu + Phi)/Phi
        const double b = q_ - model_.c * phi_;   // = q (mu + Theta)/Theta
        return (a * std::exp(phi_ * x) - b * std::exp(theta_ * x)) / eta_;
    }
    const double integral = integrate([this](double y) { return w(y); }, 0.0, x,
                                      QuadratureConfig{1e-12, 1e-10, 20000});
    return 1.0 + q_ * integral;
}

double ScaleEvaluator::stable_w(double x) const {
    if (x == 0.0)
        return 0.0; // x^{alpha-1} -> 0 for alpha > 1
    const double alpha = model_.alpha;
    return std::exp(-model_.c * x) * std::pow(x, alpha - 1.0)
           * mittag_leffler(alpha, alpha, stable_z_ * std::pow(x, alpha));
}

double ScaleEvaluator::stable_w_prime(double x) const {
    const double alpha = model_.alpha;
    const double z = stable_z_;
    const double w_arg = z * std::pow(x, alpha);

    // Derivative of g(x) = x^{alpha-1} E_{alpha,alpha}(z x^alpha), term-wise:
    // sum_k z^k (alpha k + alpha - 1) x^{alpha k + alpha - 2} / Gamma(alpha + alpha k).
    double series;
    if (w_arg <= 150.0) {
        const double lnx = std::log(x);
        const double lnz = std::log(z);
        double sum = 0.0;
        int quiet = 0;
        for (int k = 0; k < 600; ++k) {
            const double exponent = alpha * k + alpha - 2.0;
            const double term = (alpha * k + alpha - 1.0)
                                * std::exp(k * lnz + exponent * lnx - std::lgamma(alpha + alpha * k));
            sum += term;
            if (std::abs(term) < 1e-16 * std::abs(sum)) {
                if (++quiet >= 3)
                    break;
            } else {
                quiet = 0;
            }
        }
        series = sum;
    } else {
        // g(x) ~ (1/alpha) z^{(1-alpha)/alpha} e^{z^{1/alpha} x} minus algebraic
        // corrections z^{-k} x^{alpha-1-alpha k} / Gamma(alpha - alpha k).
        const double z_root = std::pow(z, 1.0 / alpha);
        if (z_root * x > 700.0)
            throw NumericError("stable scale derivative: exp overflow");
        series = z_root * std::pow(z, (1.0 - alpha) / alpha) * std::exp(z_root * x) / alpha;
        for (int k = 2; k <= 4; ++k) {
            const double gamma_arg = alpha - alpha * k;
            if (std::abs(gamma_arg - std::round(gamma_arg)) < 1e-12)
                continue;
            series -= (alpha - 1.0 - alpha * k) * std::pow(z, -static_cast<double>(k))
                      * std::pow(x, alpha - 2.0 - alpha * k) / std::tgamma(gamma_arg);
        }
    }
    return std::exp(-model_.c * x) * series - model_.c * stable_w(x);
}

double ScaleEvaluator::perturbed_tilted_direct(double x) const {
    if (x <= 0.0)
        return 0.0;
    // W_Phi has transform 1/psi_Phi with psi_Phi(s) = psi(s + Phi) - q; it is
    // smooth, nondecreasing and tends to 1/psi'(Phi), the regime where
    // Gaver-Stehfest behaves well. Evaluated in extended precision.
    const long double c = model_.c, sig = model_.sigma, lam = model_.lambda, mu = model_.mu;
    const long double phi = phi_, q = q_;
    const auto tilted_transform = [=](long double s) -> long double {
        const long double arg = s + phi;
        const long double psi = c * arg + 0.5L * sig * sig * arg * arg - lam * arg / (mu + arg);
        return 1.0L / (psi - q);
    };
    return laplace_invert(tilted_transform, x, 14);
}

void ScaleEvaluator::ensure_nodes(int upto) const {
    while (static_cast<int>(tilted_nodes_.size()) <= upto) {
        const int k = static_cast<int>(tilted_nodes_.size());
        const double xk = std::pow(kNodeRatio, k) - 1.0;
        tilted_nodes_.push_back(k == 0 ? 0.0 : perturbed_tilted_direct(xk));
    }
}

double ScaleEvaluator::perturbed_tilted_cached(double x) const {
    const double pos = std::log1p(x) / kLogNodeRatio;
    int k = static_cast<int>(pos);
    int lo = std::max(0, k - 1);
    ensure_nodes(lo + 3);
    // Cubic Lagrange interpolation over nodes lo .. lo+3.
    double xs[4], ys[4];
    for (int i = 0; i < 4; ++i) {
        xs[i] = std::pow(kNodeRatio, lo + i) - 1.0;
        ys[i] = tilted_nodes_[static_cast<std::size_t>(lo + i)];
    }
    double result = 0.0;
    for (int i = 0; i < 4; ++i) {
        double basis = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j != i)
                basis *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        result += basis * ys[i];
    }
    return result;
}

} // namespace rci
