/*
 * rci: net premiums for reinsurance-by-capital-injections contracts on
 * spectrally negative Levy risk models.
 *
 * All functions return RCI_OK on success. On failure the output arguments are
 * left untouched and rci_last_error() describes the problem (the message is
 * thread-local). Handles returned by the constructors must be released with
 * rci_model_free().
 */
#ifndef RCI_H
#define RCI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rci_model rci_model; /* opaque */

typedef enum rci_status {
    RCI_OK = 0,
    RCI_ERR_INVALID = 1, /* argument or model validation failure */
    RCI_ERR_NUMERIC = 2  /* tolerance not reached / inversion failure */
} rci_status;

const char* rci_last_error(void);

/* --- model construction ------------------------------------------------- */

rci_status rci_model_classical_exp(double lambda, double mu, double c, rci_model** out);
rci_status rci_model_classical_exp_loading(double lambda, double mu, double theta, rci_model** out);
rci_status rci_model_perturbed_exp(double lambda, double mu, double sigma, double c, rci_model** out);
rci_status rci_model_perturbed_exp_loading(double lambda, double mu, double sigma, double theta,
                                           rci_model** out);
rci_status rci_model_stable(double alpha, double c, rci_model** out);
void rci_model_free(rci_model* model);

double rci_model_premium_rate(const rci_model* model); /* c */

/* --- analytic primitives ------------------------------------------------ */

rci_status rci_psi(const rci_model* model, double s, double* out);
rci_status rci_phi(const rci_model* model, double q, double* out);
rci_status rci_theta(const rci_model* model, double q, double* out); /* exp claims only */
rci_status rci_levy_tail(const rci_model* model, double y, double* out);
rci_status rci_mean_jump(const rci_model* model, double* out); /* +inf for stable */
rci_status rci_scale_w(const rci_model* model, double q, double x, double* out);
rci_status rci_scale_w_prime(const rci_model* model, double q, double x, double* out);

/* --- premiums ------------------------------------------------------------ */

typedef struct rci_breakdown {
    double premium;      /* phi_term + delta_factor * kappa_term */
    double phi_term;     /* varphi(q, x, m) */
    double kappa_term;   /* kappa(q, x) */
    double delta_factor; /* delta(q, sigma, m) */
    double i_factor;     /* int e^{Phi u} H*G(du) */
    double i_m_value;    /* kernel integral I_m */
} rci_breakdown;

rci_status rci_premium_extreme_loss(const rci_model* model, double q, double x, double m,
                                    rci_breakdown* out);
rci_status rci_premium_proportional(const rci_model* model, double q, double x, double a,
                                    int allow_a_ge_1, rci_breakdown* out);

rci_status rci_kappa(const rci_model* model, double q, double x, double* out);
/* First-passage value Z^(q)(x) - q W^(q)(x)/Phi(q) of E[e^{-q tau_x}]; the
 * convolution kappa differs from it by an e^{-mu x} term (see validate). */
rci_status rci_kappa_first_passage(const rci_model* model, double q, double x, double* out);
rci_status rci_varphi(const rci_model* model, double q, double x, double m, double* out);

typedef struct rci_delta_diag {
    double primary;             /* I_m / (1 - I), the value premiums use */
    double closed_form;         /* fully reduced expression, rho = E[S_1]/c */
    double rel_gap;             /* |primary - closed_form| / |primary| */
    int closed_form_applicable; /* nonzero when sigma > 0 */
    double i_m;
    double i_factor;
} rci_delta_diag;

rci_status rci_delta_diagnostics(const rci_model* model, double q, double m, rci_delta_diag* out);

/* --- Monte Carlo oracle (exponential-claims models) ---------------------- */

typedef struct rci_mc_config {
    int64_t n_paths;
    double horizon_eps; /* simulate until e^{-q t} < horizon_eps */
    double dt;          /* Euler step when sigma > 0 */
    uint64_t seed;
} rci_mc_config;

typedef struct rci_mc_estimate {
    double mean;
    double std_error; /* NaN when n_paths == 1 */
    int64_t n_paths;
} rci_mc_estimate;

rci_status rci_mc_ruin_probability(const rci_model* model, double q, double x,
                                   const rci_mc_config* cfg, rci_mc_estimate* out);
rci_status rci_mc_kappa(const rci_model* model, double q, double x, const rci_mc_config* cfg,
                        rci_mc_estimate* out);
rci_status rci_mc_varphi(const rci_model* model, double q, double x, double m,
                         const rci_mc_config* cfg, rci_mc_estimate* out);
rci_status rci_mc_premium_extreme_loss(const rci_model* model, double q, double x, double m,
                                       const rci_mc_config* cfg, rci_mc_estimate* out);
rci_status rci_mc_premium_proportional(const rci_model* model, double q, double x, double a,
                                       const rci_mc_config* cfg, rci_mc_estimate* out);

#ifdef __cplusplus
}
#endif

#endif /* RCI_H */
