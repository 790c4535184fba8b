#include "rci/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace rci {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
// Gauss weights for kXgk indices 1, 3, 5, 7.
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b, value, error;
};

struct PanelWorse {
    bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.error < rhs.error; }
};

Panel gauss_kronrod(const Fn& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double k15 = kWgk[7] * f0;
    double g7 = kWg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(mid + dx) + f(mid - dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1)
            g7 += kWg[i / 2] * fsum;
    }
    k15 *= half;
    g7 *= half;

    Panel p;
    p.a = a;
    p.b = b;
    p.value = k15;
    p.error = std::abs(k15 - g7);
    return p;
}

double integrate_finite(const Fn& f, double a, double b, const QuadratureConfig& cfg) {
    if (!(b > a))
        return 0.0;

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    Panel first = gauss_kronrod(f, a, b);
    double total_value = first.value;
    double total_error = first.error;
    queue.push(first);

    int splits = 0;
    while (total_error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total_value))) {
        if (splits >= cfg.max_subdivisions)
            throw NumericError("integrate: tolerance not reached within max_subdivisions");
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval no longer splittable in double precision; accept it.
            if (queue.empty())
                break;
            total_error -= worst.error; // stop counting its error against the budget
            continue;
        }
        Panel left = gauss_kronrod(f, worst.a, mid);
        Panel right = gauss_kronrod(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }
    return total_value;
}

// Truncation point for a decaying tail: walk geometrically from the lower
// limit until |f| stays below 1e-14 of the largest magnitude seen.
double tail_cutoff(const Fn& f, double a) {
    const double start = std::abs(f(a));
    double ref = std::isfinite(start) ? start : 0.0;
    const double scale = std::max(1.0, std::abs(a));

    int quiet = 0;
    for (int k = 0; k < 64; ++k) {
        const double probe = a + scale * std::ldexp(1.0, k);
        const double magnitude = std::abs(f(probe));
        if (std::isfinite(magnitude))
            ref = std::max(ref, magnitude);
        if (magnitude <= 1e-14 * ref) {
            ++quiet;
            if (quiet >= 2)
                return probe;
        } else {
            quiet = 0;
        }
    }
    if (ref == 0.0)
        return a + scale; // identically zero as far as probed
    throw NumericError("integrate: integrand does not decay on the semi-infinite range");
}

} // namespace

double integrate(const Fn& f, double a, double b, const QuadratureConfig& cfg) {
    if (std::isnan(a) || std::isnan(b))
        throw std::invalid_argument("integrate: NaN integration limit");
    if (cfg.abs_tol <= 0 || cfg.rel_tol <= 0 || cfg.max_subdivisions < 1)
        throw std::invalid_argument("integrate: invalid quadrature configuration");
    if (std::isinf(b)) {
        const double cutoff = tail_cutoff(f, a);
        return integrate_finite(f, a, cutoff, cfg);
    }
    return integrate_finite(f, a, b, cfg);
}

double find_root(const Fn& f, double lo, double hi, double tol) {
    if (!(hi > lo))
        throw std::invalid_argument("find_root: empty bracket");
    double fa = f(lo);
    double fb = f(hi);
    if (fa == 0.0)
        return lo;
    if (fb == 0.0)
        return hi;
    if (fa * fb > 0.0)
        throw std::invalid_argument("find_root: no sign change over bracket");

    // Brent's method.
    double a = lo, b = hi, c = lo, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(fb) <= tol || std::abs(xm) <= tol1)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw NumericError("find_root: no convergence after 200 iterations");
}

double convolve_at(const Fn& f, const Fn& g, double x, const QuadratureConfig& cfg,
                   double p_g, double p_f) {
    if (!(x >= 0.0))
        throw std::invalid_argument("convolve_at: x must be nonnegative");
    if (x == 0.0)
        return 0.0;
    if (p_g < 1.0 || p_f < 1.0)
        throw std::invalid_argument("convolve_at: softening powers must be >= 1");

    QuadratureConfig half_cfg = cfg;
    half_cfg.abs_tol = 0.5 * cfg.abs_tol;

    const double half = 0.5 * x;
    // int_0^{x/2} g(y) f(x-y) dy with y = w^{p_g}
    const double wg_top = std::pow(half, 1.0 / p_g);
    const double lower = integrate(
        [&](double w) {
            const double y = std::pow(w, p_g);
            return p_g * std::pow(w, p_g - 1.0) * g(y) * f(x - y);
        },
        0.0, wg_top, half_cfg);
    // int_0^{x/2} f(u) g(x-u) du with u = w^{p_f}
    const double wf_top = std::pow(half, 1.0 / p_f);
    const double upper = integrate(
        [&](double w) {
            const double u = std::pow(w, p_f);
            return p_f * std::pow(w, p_f - 1.0) * f(u) * g(x - u);
        },
        0.0, wf_top, half_cfg);
    return lower + upper;
}

namespace {

// Cached lgamma(beta + alpha*k) sequence for the current (alpha, beta) pair.
struct MlGammaCache {
    double alpha = -1.0;
    double beta = -1.0;
    std::vector<double> lg;

    double at(double a, double b, int k) {
        if (a != alpha || b != beta) {
            alpha = a;
            beta = b;
            lg.clear();
        }
        while (static_cast<int>(lg.size()) <= k)
            lg.push_back(std::lgamma(beta + alpha * static_cast<double>(lg.size())));
        return lg[static_cast<std::size_t>(k)];
    }
};

double ml_series(double alpha, double beta, double z) {
    thread_local MlGammaCache cache;
    const double lnz = std::log(z);
    double sum = 0.0;
    int small_terms = 0;
    for (int k = 0; k < 600; ++k) {
        const double term = std::exp(static_cast<double>(k) * lnz - cache.at(alpha, beta, k));
        sum += term;
        // Positive-term series: stop after three consecutive negligible terms.
        if (term < 1e-16 * sum) {
            if (++small_terms >= 3)
                return sum;
        } else {
            small_terms = 0;
        }
    }
    throw NumericError("mittag_leffler: series did not converge in 600 terms");
}

double ml_asymptotic(double alpha, double beta, double z) {
    const double z_root = std::pow(z, 1.0 / alpha);
    if (z_root > 700.0)
        throw NumericError("mittag_leffler: argument overflows exp range");
    double value = std::exp(z_root) * std::pow(z, (1.0 - beta) / alpha) / alpha;
    // Algebraic correction terms; 1/Gamma at nonpositive integers vanishes.
    for (int k = 1; k <= 6; ++k) {
        const double gamma_arg = beta - alpha * static_cast<double>(k);
        if (gamma_arg <= 0.0 && std::abs(gamma_arg - std::round(gamma_arg)) < 1e-12)
            continue;
        value -= std::pow(z, -static_cast<double>(k)) / std::tgamma(gamma_arg);
    }
    return value;
}

} // namespace

double mittag_leffler(double alpha, double beta, double z) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("mittag_leffler: alpha and beta must be positive");
    if (z < 0.0)
        throw std::invalid_argument("mittag_leffler: negative argument unsupported");
    if (z == 0.0)
        return 1.0 / std::tgamma(beta);
    if (z > 150.0)
        return ml_asymptotic(alpha, beta, z);
    return ml_series(alpha, beta, z);
}

namespace {

// Stehfest coefficients for an even term count n.
const std::vector<long double>& stehfest_coefficients(int n) {
    thread_local int cached_n = 0;
    thread_local std::vector<long double> cached;
    thread_local std::vector<long double> cached_prev;
    thread_local int cached_prev_n = 0;

    auto build = [](int terms) {
        const int half = terms / 2;
        std::vector<long double> v(static_cast<std::size_t>(terms) + 1, 0.0L);
        for (int k = 1; k <= terms; ++k) {
            long double acc = 0.0L;
            const int j_lo = (k + 1) / 2;
            const int j_hi = std::min(k, half);
            for (int j = j_lo; j <= j_hi; ++j) {
                const long double ln_term = static_cast<long double>(half) * std::log(static_cast<long double>(j))
                                            + std::lgamma(2.0L * j + 1.0L)
                                            - std::lgamma(static_cast<long double>(half - j) + 1.0L)
                                            - std::lgamma(static_cast<long double>(j) + 1.0L)
                                            - std::lgamma(static_cast<long double>(j))
                                            - std::lgamma(static_cast<long double>(k - j) + 1.0L)
                                            - std::lgamma(static_cast<long double>(2 * j - k) + 1.0L);
                acc += std::exp(ln_term);
            }
            v[static_cast<std::size_t>(k)] = ((half + k) % 2 == 0 ? acc : -acc);
        }
        return v;
    };

    if (cached_n == n)
        return cached;
    if (cached_prev_n == n)
        return cached_prev;
    cached_prev = std::move(cached);
    cached_prev_n = cached_n;
    cached = build(n);
    cached_n = n;
    return cached;
}

double gaver_stehfest(const LFn& F, double t, int n) {
    const auto& v = stehfest_coefficients(n);
    const long double ln2_over_t = 0.69314718055994530942L / static_cast<long double>(t);
    long double acc = 0.0L;
    for (int k = 1; k <= n; ++k)
        acc += v[static_cast<std::size_t>(k)] * F(ln2_over_t * k);
    return static_cast<double>(ln2_over_t * acc);
}

} // namespace

double laplace_invert(const LFn& F, double t, int n_terms) {
    if (!(t > 0.0))
        throw std::invalid_argument("laplace_invert: t must be positive");
    if (n_terms < 6 || n_terms > 32 || n_terms % 2 != 0)
        throw std::invalid_argument("laplace_invert: n_terms must be even and in [6, 32]");

    const double full = gaver_stehfest(F, t, n_terms);
    const double reduced = gaver_stehfest(F, t, n_terms - 2);
    const double gap = std::abs(full - reduced);
    if (gap > 1e-3 * std::max(std::abs(full), std::abs(reduced)) && gap > 1e-12)
        throw NumericError("laplace_invert: term counts disagree (cancellation suspected); "
                           "tilt the transform if the inverse grows or decays exponentially");
    return full;
}

} // namespace rci
