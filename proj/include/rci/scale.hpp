#pragma once

#include "rci/model.hpp"
#include "rci/numerics.hpp"

#include <vector>

namespace rci {

// Evaluates the q-scale function W^(q), its derivative and the first-passage
// density factor f = W' - Phi W for one bound (model, q) pair.
//
// Classical model: two-exponential closed form. Stable model: Mittag-Leffler
// series. Perturbed model: Gaver-Stehfest inversion of 1/(psi - q), evaluated
// through the exponential tilt W^(q)(x) = e^{Phi x} W_Phi(x) and cached on a
// lazily grown geometric node grid with cubic interpolation.
//
// Construction and the first evaluations warm the perturbed-model cache and
// are not thread-safe; once warmed (or for the other models) evaluation is
// read-only and safe to share across threads.
class ScaleEvaluator {
  public:
    ScaleEvaluator(const ModelSpec& model, double q);

    const ModelSpec& model() const { return model_; }
    double q() const { return q_; }
    double phi() const { return phi_; }
    double theta() const;         // exponential-claims models only
    double eta() const;           // classical discriminant root
    double tilt_limit() const;    // lim_{x->inf} e^{-Phi x} W^(q)(x) = 1/psi'(Phi)

    // W^(q)(x); zero for x < 0.
    double w(double x) const;
    // d/dx W^(q)(x) for x > 0.
    double w_prime(double x) const;
    // Density factor f(x) = W'^(q)(x) - Phi(q) W^(q)(x), x > 0.
    double f(double x) const;

    // Z^(q)(x) = 1 + q int_0^x W^(q)(y) dy.
    double z(double x) const;

  private:
    ModelSpec model_;
    double q_;
    double phi_ = 0.0;
    double theta_ = 0.0;
    double eta_ = 0.0;
    // StableSn: z_arg_ = q + c^alpha.
    double stable_z_ = 0.0;
    // PerturbedExp: 1/(psi - q) is rational with three real poles
    // Phi > 0 > Theta > -mu > theta2_, so the density factor f = W' - Phi W
    // reduces to two decaying exponentials with weights from the residues.
    double theta2_ = 0.0;
    double f_coeff_theta_ = 0.0;
    double f_coeff_theta2_ = 0.0;

    double stable_w(double x) const;
    double stable_w_prime(double x) const;

    // PerturbedExp tilted scale W_Phi via Gaver-Stehfest; node k sits at
    // x_k = 1.01^k - 1 (spacing 0.01 (1 + x)).
    double perturbed_tilted_direct(double x) const;
    double perturbed_tilted_cached(double x) const;
    void ensure_nodes(int upto) const;
    mutable std::vector<double> tilted_nodes_;
};

} // namespace rci
