#include "rci/simulate.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace rci {

namespace {

// Counter-based stream: the (seed, path_index) pair is hashed into the start
// of a splitmix64 walk. The double scramble keeps distinct paths on unrelated
// stretches of the underlying sequence (a raw linear offset would make path
// i+1 a one-draw shift of path i and correlate every estimate).
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t path_index) {
        std::uint64_t z = scramble(seed ^ 0x9E3779B97F4A7C15ULL);
        z = scramble(z + path_index * 0xBF58476D1CE4E5B9ULL);
        state_ = z;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        return scramble(z);
    }

    // Uniform in the open interval (0, 1).
    double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    static std::uint64_t scramble(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

void validate_mc(const ModelSpec& model, double q, double x, const McConfig& cfg) {
    if (!model.has_exponential_claims())
        throw std::invalid_argument("simulate: the stable model is not simulated "
                                    "(unbounded-variation small jumps)");
    if (!(q > 0.0))
        throw std::invalid_argument("simulate: q must be positive (finite horizon)");
    if (!(x > 0.0))
        throw std::invalid_argument("simulate: x must be positive");
    if (cfg.n_paths < 1)
        throw std::invalid_argument("simulate: n_paths must be >= 1");
    if (!(cfg.horizon_eps > 0.0 && cfg.horizon_eps < 1.0))
        throw std::invalid_argument("simulate: horizon_eps must lie in (0, 1)");
    if (!(cfg.dt > 0.0))
        throw std::invalid_argument("simulate: dt must be positive");
}

void push_record(PathOutcome& out, double time, double injection) {
    out.record_times.push_back(time);
    out.injections.push_back(injection);
}

// sigma = 0: Y moves on a straight slope -c between jumps, so the path is
// exact; records can only happen at jump instants.
PathOutcome simulate_classical(const ModelSpec& model, double x, double horizon, PathRng& rng) {
    PathOutcome out;
    double t = 0.0;
    double y = 0.0;
    double sup = 0.0;

    while (true) {
        const double wait = rng.next_exponential(model.lambda);
        if (t + wait > horizon)
            break;
        t += wait;
        y += -model.c * wait + rng.next_exponential(model.mu);
        if (!out.ruined) {
            if (y > x) {
                out.ruined = true;
                out.ruin_time = t;
                out.overshoot = y - x;
                out.ruin_by_jump = true;
                sup = y;
                push_record(out, t, y - x);
            }
        } else if (y > sup) {
            push_record(out, t, y - sup);
            sup = y;
        }
    }
    return out;
}

// sigma > 0: Euler grid for the Brownian part with exact jump insertion. The
// running supremum is tracked on the grid; post-ruin records are declared only
// when a jump lifts Y above it. A pure diffusion crossing of x books C_0 = 0.
PathOutcome simulate_perturbed(const ModelSpec& model, double x, double horizon,
                               const McConfig& cfg, PathRng& rng) {
    PathOutcome out;
    double t = 0.0;
    double y = 0.0;
    double sup = 0.0;
    double next_jump = rng.next_exponential(model.lambda);

    const auto diffuse = [&](double dt_step) {
        y += -model.c * dt_step + model.sigma * std::sqrt(dt_step) * rng.next_normal();
    };

    while (t < horizon) {
        const double t_target = std::min(t + cfg.dt, std::min(next_jump, horizon));
        const bool at_jump = (t_target == next_jump);
        const double step = t_target - t;
        if (step > 0.0)
            diffuse(step);
        t = t_target;

        // A creep crossing on the step into a jump instant is attributed to
        // the jump below (keeps record times strictly increasing; the
        // misattribution has probability O(lambda dt) per crossing).
        if (!out.ruined && y > x && !at_jump) {
            out.ruined = true;
            out.ruin_time = t;
            out.overshoot = 0.0; // diffusion creep: no jump deficit
            out.ruin_by_jump = false;
            push_record(out, t, 0.0);
        }
        sup = std::max(sup, y);

        if (at_jump) {
            y += rng.next_exponential(model.mu);
            if (!out.ruined) {
                if (y > x) {
                    out.ruined = true;
                    out.ruin_time = t;
                    out.overshoot = y - x;
                    out.ruin_by_jump = true;
                    push_record(out, t, y - x);
                }
            } else if (y > sup) {
                push_record(out, t, y - sup);
            }
            sup = std::max(sup, y);
            next_jump = t + rng.next_exponential(model.lambda);
        }
    }
    return out;
}

// Deterministic blockwise mean/variance accumulation: per-block partial sums
// are computed independently (possibly in parallel) and reduced in block
// order, so the estimate is identical for any worker count.
constexpr std::int64_t kBlockSize = 4096;

McEstimate accumulate(std::int64_t n_paths,
                      const std::function<double(std::uint64_t)>& payoff) {
    const std::int64_t n_blocks = (n_paths + kBlockSize - 1) / kBlockSize;
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> block_sumsq(static_cast<std::size_t>(n_blocks), 0.0);

    const auto run_block = [&](std::int64_t b) {
        const std::int64_t begin = b * kBlockSize;
        const std::int64_t end = std::min(begin + kBlockSize, n_paths);
        double s = 0.0, ss = 0.0;
        for (std::int64_t i = begin; i < end; ++i) {
            const double v = payoff(static_cast<std::uint64_t>(i));
            s += v;
            ss += v * v;
        }
        block_sum[static_cast<std::size_t>(b)] = s;
        block_sumsq[static_cast<std::size_t>(b)] = ss;
    };

    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(n_blocks)));
    if (workers > 1) {
        std::vector<std::thread> pool;
        std::atomic<std::int64_t> cursor{0};
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::int64_t b = cursor.fetch_add(1); b < n_blocks; b = cursor.fetch_add(1))
                    run_block(b);
            });
        }
        for (auto& th : pool)
            th.join();
    } else {
        for (std::int64_t b = 0; b < n_blocks; ++b)
            run_block(b);
    }

    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        sum += block_sum[static_cast<std::size_t>(b)];
        sumsq += block_sumsq[static_cast<std::size_t>(b)];
    }

    McEstimate est;
    est.n_paths = n_paths;
    const double n = static_cast<double>(n_paths);
    est.mean = sum / n;
    if (n_paths > 1) {
        const double var = std::max(0.0, (sumsq - n * est.mean * est.mean) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    } else {
        est.std_error = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

double horizon_from(double q, const McConfig& cfg) {
    return -std::log(cfg.horizon_eps) / q;
}

} // namespace

PathOutcome simulate_path(const ModelSpec& model, double q, double x, const McConfig& cfg,
                          std::uint64_t path_index) {
    validate_mc(model, q, x, cfg);
    PathRng rng(cfg.seed, path_index);
    const double horizon = horizon_from(q, cfg);
    if (model.sigma > 0.0)
        return simulate_perturbed(model, x, horizon, cfg, rng);
    return simulate_classical(model, x, horizon, rng);
}

McEstimate estimate_premium_mc(const ModelSpec& model, const PremiumQuery& query, const McConfig& cfg) {
    validate_mc(model, query.q, query.x, cfg);
    const bool extreme = std::holds_alternative<ExtremeLoss>(query.contract);
    const double m = extreme ? std::get<ExtremeLoss>(query.contract).m : 0.0;
    const double a = extreme ? 1.0 : std::get<Proportional>(query.contract).a;
    const double horizon = horizon_from(query.q, cfg);

    return accumulate(cfg.n_paths, [&](std::uint64_t idx) {
        PathRng rng(cfg.seed, idx);
        const PathOutcome path = model.sigma > 0.0
                                     ? simulate_perturbed(model, query.x, horizon, cfg, rng)
                                     : simulate_classical(model, query.x, horizon, rng);
        double payoff = 0.0;
        for (std::size_t k = 0; k < path.record_times.size(); ++k) {
            const double injection = path.injections[k];
            const double ceded = extreme ? (injection >= m ? injection : 0.0) : a * injection;
            payoff += std::exp(-query.q * path.record_times[k]) * ceded;
        }
        return payoff;
    });
}

McEstimate estimate_kappa_mc(const ModelSpec& model, double q, double x, const McConfig& cfg) {
    validate_mc(model, q, x, cfg);
    const double horizon = horizon_from(q, cfg);
    return accumulate(cfg.n_paths, [&](std::uint64_t idx) {
        PathRng rng(cfg.seed, idx);
        const PathOutcome path = model.sigma > 0.0
                                     ? simulate_perturbed(model, x, horizon, cfg, rng)
                                     : simulate_classical(model, x, horizon, rng);
        return path.ruined ? std::exp(-q * path.ruin_time) : 0.0;
    });
}

McEstimate estimate_varphi_mc(const ModelSpec& model, double q, double x, double m, const McConfig& cfg) {
    validate_mc(model, q, x, cfg);
    if (m < 0.0)
        throw std::invalid_argument("simulate: m must be nonnegative");
    const double horizon = horizon_from(q, cfg);
    return accumulate(cfg.n_paths, [&](std::uint64_t idx) {
        PathRng rng(cfg.seed, idx);
        const PathOutcome path = model.sigma > 0.0
                                     ? simulate_perturbed(model, x, horizon, cfg, rng)
                                     : simulate_classical(model, x, horizon, rng);
        if (!path.ruined || path.overshoot < m)
            return 0.0;
        return std::exp(-q * path.ruin_time) * path.overshoot;
    });
}

McEstimate estimate_ruin_probability_mc(const ModelSpec& model, double q, double x, const McConfig& cfg) {
    validate_mc(model, q, x, cfg);
    const double horizon = horizon_from(q, cfg);
    return accumulate(cfg.n_paths, [&](std::uint64_t idx) {
        PathRng rng(cfg.seed, idx);
        const PathOutcome path = model.sigma > 0.0
                                     ? simulate_perturbed(model, x, horizon, cfg, rng)
                                     : simulate_classical(model, x, horizon, rng);
        return path.ruined ? 1.0 : 0.0;
    });
}

} // namespace rci
