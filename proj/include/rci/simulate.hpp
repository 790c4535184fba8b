#pragma once

#include "rci/model.hpp"
#include "rci/premium.hpp"

#include <cstdint>
#include <vector>

namespace rci {

struct McConfig {
    std::int64_t n_paths = 200000;
    double horizon_eps = 1e-4; // simulate until e^{-q t} < horizon_eps
    double dt = 1e-3;          // Euler step for the Brownian part (sigma > 0 only)
    std::uint64_t seed = 42;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0; // NaN when n_paths == 1 (sample variance undefined)
    std::int64_t n_paths = 0;
};

// One simulated trajectory of Y up to the discount horizon.
// record_times[0] is tau_x itself; injections[0] is C_0 = Y_{tau_x} - x
// (zero when the crossing is a pure diffusion creep).
struct PathOutcome {
    std::vector<double> record_times;
    std::vector<double> injections;
    bool ruined = false;
    double ruin_time = 0.0;
    double overshoot = 0.0;
    bool ruin_by_jump = false;
};

// Deterministic per-path stream: the outcome depends only on (seed, path_index).
PathOutcome simulate_path(const ModelSpec& model, double q, double x, const McConfig& cfg,
                          std::uint64_t path_index);

McEstimate estimate_premium_mc(const ModelSpec& model, const PremiumQuery& query, const McConfig& cfg);
McEstimate estimate_kappa_mc(const ModelSpec& model, double q, double x, const McConfig& cfg);
McEstimate estimate_varphi_mc(const ModelSpec& model, double q, double x, double m, const McConfig& cfg);
// Fraction of paths ruined within the discount horizon -ln(horizon_eps)/q.
McEstimate estimate_ruin_probability_mc(const ModelSpec& model, double q, double x, const McConfig& cfg);

} // namespace rci
