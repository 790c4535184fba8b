#include "rci.h"

#include "rci/model.hpp"
#include "rci/numerics.hpp"
#include "rci/premium.hpp"
#include "rci/scale.hpp"
#include "rci/simulate.hpp"

#include <new>
#include <string>

struct rci_model {
    rci::ModelSpec spec;
};

namespace {

thread_local std::string g_last_error;

template <typename Body>
rci_status guarded(const Body& body) {
    try {
        body();
        return RCI_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return RCI_ERR_INVALID;
    } catch (const rci::NumericError& e) {
        g_last_error = e.what();
        return RCI_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RCI_ERR_NUMERIC;
    } catch (...) {
        g_last_error = "unknown error";
        return RCI_ERR_NUMERIC;
    }
}

rci_status invalid(const char* message) {
    g_last_error = message;
    return RCI_ERR_INVALID;
}

rci_status make_model(rci_model** out, const rci::ModelSpec& spec) {
    *out = new (std::nothrow) rci_model{spec};
    if (*out == nullptr) {
        g_last_error = "allocation failure";
        return RCI_ERR_NUMERIC;
    }
    return RCI_OK;
}

rci::McConfig to_config(const rci_mc_config* cfg) {
    rci::McConfig out;
    out.n_paths = cfg->n_paths;
    out.horizon_eps = cfg->horizon_eps;
    out.dt = cfg->dt;
    out.seed = cfg->seed;
    return out;
}

void from_estimate(const rci::McEstimate& est, rci_mc_estimate* out) {
    out->mean = est.mean;
    out->std_error = est.std_error;
    out->n_paths = est.n_paths;
}

void from_breakdown(const rci::PremiumBreakdown& b, rci_breakdown* out) {
    out->premium = b.premium;
    out->phi_term = b.phi_term;
    out->kappa_term = b.kappa_term;
    out->delta_factor = b.delta_factor;
    out->i_factor = b.i_factor;
    out->i_m_value = b.i_m_value;
}

} // namespace

extern "C" {

const char* rci_last_error(void) { return g_last_error.c_str(); }

rci_status rci_model_classical_exp(double lambda, double mu, double c, rci_model** out) {
    if (out == nullptr)
        return invalid("null output handle");
    return guarded([&] {
        const auto spec = rci::ModelSpec::classical_exp(lambda, mu, c);
        if (make_model(out, spec) != RCI_OK)
            throw std::bad_alloc();
    });
}

rci_status rci_model_classical_exp_loading(double lambda, double mu, double theta, rci_model** out) {
    if (out == nullptr)
        return invalid("null output handle");
    return guarded([&] {
        const auto spec = rci::ModelSpec::classical_exp_loading(lambda, mu, theta);
        if (make_model(out, spec) != RCI_OK)
            throw std::bad_alloc();
    });
}

rci_status rci_model_perturbed_exp(double lambda, double mu, double sigma, double c, rci_model** out) {
    if (out == nullptr)
        return invalid("null output handle");
    return guarded([&] {
        const auto spec = rci::ModelSpec::perturbed_exp(lambda, mu, sigma, c);
        if (make_model(out, spec) != RCI_OK)
            throw std::bad_alloc();
    });
}

rci_status rci_model_perturbed_exp_loading(double lambda, double mu, double sigma, double theta,
                                           rci_model** out) {
    if (out == nullptr)
        return invalid("null output handle");
    return guarded([&] {
        const auto spec = rci::ModelSpec::perturbed_exp_loading(lambda, mu, sigma, theta);
        if (make_model(out, spec) != RCI_OK)
            throw std::bad_alloc();
    });
}

rci_status rci_model_stable(double alpha, double c, rci_model** out) {
    if (out == nullptr)
        return invalid("null output handle");
    return guarded([&] {
        const auto spec = rci::ModelSpec::stable(alpha, c);
        if (make_model(out, spec) != RCI_OK)
            throw std::bad_alloc();
    });
}

void rci_model_free(rci_model* model) { delete model; }

double rci_model_premium_rate(const rci_model* model) {
    return model == nullptr ? 0.0 : model->spec.c;
}

rci_status rci_psi(const rci_model* model, double s, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::laplace_exponent(model->spec, s); });
}

rci_status rci_phi(const rci_model* model, double q, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::phi_inverse(model->spec, q); });
}

rci_status rci_theta(const rci_model* model, double q, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::theta_root(model->spec, q); });
}

rci_status rci_levy_tail(const rci_model* model, double y, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::levy_tail(model->spec, y); });
}

rci_status rci_mean_jump(const rci_model* model, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::mean_jump(model->spec); });
}

rci_status rci_scale_w(const rci_model* model, double q, double x, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::ScaleEvaluator(model->spec, q).w(x); });
}

rci_status rci_scale_w_prime(const rci_model* model, double q, double x, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::ScaleEvaluator(model->spec, q).w_prime(x); });
}

rci_status rci_premium_extreme_loss(const rci_model* model, double q, double x, double m,
                                    rci_breakdown* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { from_breakdown(rci::premium_extreme_loss(model->spec, q, x, m), out); });
}

rci_status rci_premium_proportional(const rci_model* model, double q, double x, double a,
                                    int allow_a_ge_1, rci_breakdown* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        from_breakdown(rci::premium_proportional(model->spec, q, x, a, allow_a_ge_1 != 0), out);
    });
}

rci_status rci_kappa(const rci_model* model, double q, double x, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::kappa(model->spec, q, x); });
}

rci_status rci_kappa_first_passage(const rci_model* model, double q, double x, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::kappa_first_passage(model->spec, q, x); });
}

rci_status rci_varphi(const rci_model* model, double q, double x, double m, double* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] { *out = rci::varphi(model->spec, q, x, m); });
}

rci_status rci_delta_diagnostics(const rci_model* model, double q, double m, rci_delta_diag* out) {
    if (model == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        const auto diag = rci::delta_diagnostics(model->spec, q, m);
        out->primary = diag.primary;
        out->closed_form = diag.closed_form;
        out->rel_gap = diag.rel_gap;
        out->closed_form_applicable = diag.closed_form_applicable ? 1 : 0;
        out->i_m = diag.i_m;
        out->i_factor = diag.i_factor;
    });
}

rci_status rci_mc_ruin_probability(const rci_model* model, double q, double x,
                                   const rci_mc_config* cfg, rci_mc_estimate* out) {
    if (model == nullptr || cfg == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        from_estimate(rci::estimate_ruin_probability_mc(model->spec, q, x, to_config(cfg)), out);
    });
}

rci_status rci_mc_kappa(const rci_model* model, double q, double x, const rci_mc_config* cfg,
                        rci_mc_estimate* out) {
    if (model == nullptr || cfg == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        from_estimate(rci::estimate_kappa_mc(model->spec, q, x, to_config(cfg)), out);
    });
}

rci_status rci_mc_varphi(const rci_model* model, double q, double x, double m,
                         const rci_mc_config* cfg, rci_mc_estimate* out) {
    if (model == nullptr || cfg == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        from_estimate(rci::estimate_varphi_mc(model->spec, q, x, m, to_config(cfg)), out);
    });
}

rci_status rci_mc_premium_extreme_loss(const rci_model* model, double q, double x, double m,
                                       const rci_mc_config* cfg, rci_mc_estimate* out) {
    if (model == nullptr || cfg == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        rci::PremiumQuery query;
        query.q = q;
        query.x = x;
        query.contract = rci::ExtremeLoss{m};
        from_estimate(rci::estimate_premium_mc(model->spec, query, to_config(cfg)), out);
    });
}

rci_status rci_mc_premium_proportional(const rci_model* model, double q, double x, double a,
                                       const rci_mc_config* cfg, rci_mc_estimate* out) {
    if (model == nullptr || cfg == nullptr || out == nullptr)
        return invalid("null argument");
    return guarded([&] {
        rci::PremiumQuery query;
        query.q = q;
        query.x = x;
        query.contract = rci::Proportional{a};
        from_estimate(rci::estimate_premium_mc(model->spec, query, to_config(cfg)), out);
    });
}

} // extern "C"
