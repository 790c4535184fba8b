// Command-line front end for the RCI premium engine: single premium queries,
// parameter sweeps, the figure catalog, and the Monte Carlo validation
// campaign. Talks to the engine exclusively through the C API in rci.h.
#include "rci.h"

#include "rci/figures.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
    throw CliError{code, message};
}

[[noreturn]] void fail_status(rci_status status, const std::string& context) {
    fail(status == RCI_ERR_INVALID ? kExitUsage : kExitNumeric,
         context + ": " + rci_last_error());
}

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

// Owning wrapper for the opaque model handle.
class Model {
  public:
    Model() = default;
    explicit Model(rci_model* handle) : handle_(handle) {}
    ~Model() { rci_model_free(handle_); }
    Model(Model&& other) noexcept : handle_(other.handle_) { other.handle_ = nullptr; }
    Model& operator=(Model&& other) noexcept {
        if (this != &other) {
            rci_model_free(handle_);
            handle_ = other.handle_;
            other.handle_ = nullptr;
        }
        return *this;
    }
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;
    const rci_model* get() const { return handle_; }

  private:
    rci_model* handle_ = nullptr;
};

struct ModelArgs {
    std::string kind = "classical-exp";
    double lambda = 1.0;
    double mu = 1.0;
    double sigma = 0.0;
    double alpha = 1.5;
    std::optional<double> c;
    std::optional<double> theta;
};

void add_model_flags(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--model", args.kind, "Risk model: classical-exp, perturbed-exp or stable")
        ->check(CLI::IsMember({"classical-exp", "perturbed-exp", "stable"}));
    cmd->add_option("--lambda", args.lambda, "Poisson claim intensity");
    cmd->add_option("--mu", args.mu, "Exponential claim rate (mean claim 1/mu)");
    cmd->add_option("--sigma", args.sigma, "Diffusion volatility (perturbed-exp)");
    cmd->add_option("--alpha", args.alpha, "Stability index in (1,2) (stable)");
    auto* c_opt = cmd->add_option("--c", args.c, "Premium rate");
    cmd->add_option("--theta", args.theta, "Safety loading; c = (1+theta) lambda/mu")
        ->excludes(c_opt);
}

Model build_model(const ModelArgs& args) {
    rci_model* handle = nullptr;
    rci_status status = RCI_ERR_INVALID;
    if (args.kind == "stable") {
        if (args.theta)
            fail(kExitUsage, "model: --theta is not defined for the stable model; use --c");
        if (!args.c)
            fail(kExitUsage, "model: stable model requires --c");
        status = rci_model_stable(args.alpha, *args.c, &handle);
    } else if (args.kind == "perturbed-exp") {
        if (args.c)
            status = rci_model_perturbed_exp(args.lambda, args.mu, args.sigma, *args.c, &handle);
        else if (args.theta)
            status = rci_model_perturbed_exp_loading(args.lambda, args.mu, args.sigma, *args.theta, &handle);
        else
            fail(kExitUsage, "model: provide --c or --theta");
    } else {
        if (args.c)
            status = rci_model_classical_exp(args.lambda, args.mu, *args.c, &handle);
        else if (args.theta)
            status = rci_model_classical_exp_loading(args.lambda, args.mu, *args.theta, &handle);
        else
            fail(kExitUsage, "model: provide --c or --theta");
    }
    if (status != RCI_OK)
        fail_status(status, "model");
    return Model(handle);
}

void warn_low_q(double q) {
    if (q > 0.0 && q < 1e-4)
        std::cerr << "warning: q below 1e-4; premiums grow like the undiscounted value "
                     "and quadratures lose accuracy\n";
}

// ---------------------------------------------------------------------------
// premium

struct PremiumArgs {
    ModelArgs model;
    double q = 0.05;
    double x = 2.5;
    std::string contract = "extreme-loss";
    double m = 0.0;
    double a = 0.5;
    bool allow_a_ge_1 = false;
};

int cmd_premium(const PremiumArgs& args) {
    if (args.q == 0.0)
        fail(kExitUsage, "premium: q = 0 has no finite value (the expected discounted "
                         "injections diverge); choose q >= 1e-8");
    warn_low_q(args.q);
    const Model model = build_model(args.model);
    rci_breakdown b{};
    rci_status status;
    if (args.contract == "proportional")
        status = rci_premium_proportional(model.get(), args.q, args.x, args.a,
                                          args.allow_a_ge_1 ? 1 : 0, &b);
    else
        status = rci_premium_extreme_loss(model.get(), args.q, args.x, args.m, &b);
    if (status != RCI_OK)
        fail_status(status, "premium");

    std::cout << "premium      " << fmt(b.premium) << "\n"
              << "phi_term     " << fmt(b.phi_term) << "\n"
              << "kappa_term   " << fmt(b.kappa_term) << "\n"
              << "delta_factor " << fmt(b.delta_factor) << "\n"
              << "i_factor     " << fmt(b.i_factor) << "\n"
              << "i_m_value    " << fmt(b.i_m_value) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// curve

struct CurveArgs {
    ModelArgs model;
    std::string variable = "m";
    double start = 0.0;
    double stop = 1.0;
    double step = 0.1;
    double q = 0.05;
    double x = 2.5;
    std::string contract = "extreme-loss";
    double m = 0.0;
    double a = 0.5;
    std::string out = "curve.csv";
};

const char* kCsvHeader = "variable,value,q,x,m_or_a,theta,premium,phi_term,kappa_term,delta_factor\n";

// One evaluated sweep row; the fields mirror the CSV columns.
struct CurveRow {
    double value, q, x, m_or_a;
    std::optional<double> theta;
    rci_breakdown b;
};

void write_rows(std::ostream& out, const std::string& variable, const std::vector<CurveRow>& rows) {
    out << kCsvHeader;
    for (const auto& row : rows) {
        out << variable << ',' << fmt(row.value) << ',' << fmt(row.q) << ',' << fmt(row.x) << ','
            << fmt(row.m_or_a) << ',' << (row.theta ? fmt(*row.theta) : std::string())
            << ',' << fmt(row.b.premium) << ',' << fmt(row.b.phi_term) << ','
            << fmt(row.b.kappa_term) << ',' << fmt(row.b.delta_factor) << '\n';
    }
}

// Evaluate rows in parallel but keep the output in grid order.
void parallel_fill(std::size_t count, const std::function<void(std::size_t)>& work) {
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            work(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
                if (failed.load())
                    return;
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true))
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<double> sweep_grid(double start, double stop, double step) {
    if (!(step > 0.0))
        fail(kExitUsage, "curve: step must be positive");
    if (!(start < stop))
        fail(kExitUsage, "curve: empty sweep (need start < stop)");
    std::vector<double> grid;
    const int count = rci::sweep_count(start, stop, step);
    for (int i = 0; i < count; ++i) {
        const double value = start + step * i;
        if (value > stop + 0.5 * step)
            break;
        grid.push_back(value);
    }
    return grid;
}

CurveRow evaluate_row(const rci_model* model, double value, double q, double x,
                      const std::string& contract, double m, double a, bool allow_ge1,
                      std::optional<double> theta) {
    CurveRow row{value, q, x, contract == "proportional" ? a : m, theta, {}};
    const rci_status status =
        contract == "proportional"
            ? rci_premium_proportional(model, q, x, a, allow_ge1 ? 1 : 0, &row.b)
            : rci_premium_extreme_loss(model, q, x, m, &row.b);
    if (status != RCI_OK)
        fail_status(status, "curve");
    return row;
}

int cmd_curve(const CurveArgs& args, const std::vector<std::string>& explicit_flags) {
    for (const auto& flag : explicit_flags) {
        if (flag == args.variable)
            fail(kExitUsage, "curve: swept variable --" + flag + " must not be fixed as well");
    }
    const auto grid = sweep_grid(args.start, args.stop, args.step);
    warn_low_q(args.variable == "q" ? args.start : args.q);

    std::vector<CurveRow> rows(grid.size());
    if (args.variable == "theta") {
        if (args.model.kind == "stable")
            fail(kExitUsage, "curve: theta sweeps need an exponential-claims model");
        parallel_fill(grid.size(), [&](std::size_t i) {
            const double theta = grid[i];
            ModelArgs margs = args.model;
            margs.c.reset();
            margs.theta = theta;
            const Model model = build_model(margs);
            rows[i] = evaluate_row(model.get(), theta, args.q, args.x, args.contract,
                                   args.m, args.a, false, theta);
        });
    } else {
        if (args.variable == "m" && args.contract == "proportional")
            fail(kExitUsage, "curve: variable m applies to the extreme-loss contract");
        const Model model = build_model(args.model);
        const std::optional<double> theta = args.model.theta;
        parallel_fill(grid.size(), [&](std::size_t i) {
            const double value = grid[i];
            const double q = args.variable == "q" ? value : args.q;
            const double x = args.variable == "x" ? value : args.x;
            const double m = args.variable == "m" ? value : args.m;
            rows[i] = evaluate_row(model.get(), value, q, x, args.contract, m, args.a, false, theta);
        });
    }

    std::ofstream out(args.out, std::ios::binary);
    if (!out)
        fail(kExitUsage, "curve: cannot open output file " + args.out);
    write_rows(out, args.variable, rows);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// figures

int cmd_figures(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        fail(kExitUsage, "figures: cannot create output directory " + out_dir);

    for (const auto& panel : rci::figure_panels()) {
        struct RowSpec {
            double sweep_value, q, m, theta, x_or_family;
        };
        std::vector<RowSpec> specs;
        const int count = rci::sweep_count(panel.sweep_start, panel.sweep_stop, panel.sweep_step);
        for (const double family_value : panel.family_values) {
            for (int i = 0; i < count; ++i) {
                const double sweep_value = panel.sweep_start + panel.sweep_step * i;
                const double theta = panel.sweep == 't'
                                         ? sweep_value
                                         : (panel.family == 't' ? family_value : panel.theta);
                specs.push_back({sweep_value,
                                 panel.family == 'q' ? family_value : panel.q,
                                 panel.sweep == 'm' ? sweep_value
                                                    : (panel.family == 'm' ? family_value : panel.m),
                                 theta,
                                 panel.family == 'x' ? family_value : panel.x});
            }
        }
        std::vector<CurveRow> rows(specs.size());
        parallel_fill(specs.size(), [&](std::size_t i) {
            const RowSpec& spec = specs[i];
            rci_model* raw = nullptr;
            if (rci_model_classical_exp_loading(1.0, 1.0, spec.theta, &raw) != RCI_OK)
                fail_status(RCI_ERR_INVALID, "figures");
            const Model model{raw};
            const double x = panel.x_is_4c ? 4.0 * rci_model_premium_rate(model.get())
                                           : spec.x_or_family;
            rows[i] = evaluate_row(model.get(), spec.sweep_value, spec.q, x, "extreme-loss",
                                   spec.m, 0.0, false, spec.theta);
        });
        const auto path = std::filesystem::path(out_dir) / (std::string(panel.name) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out)
            fail(kExitUsage, "figures: cannot open " + path.string());
        write_rows(out, panel.sweep == 'm' ? "m" : "theta", rows);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
    ModelArgs model;
    double q = 0.05;
    double x = 2.5;
    std::int64_t paths = 200000;
    std::uint64_t seed = 42;
    double dt = 1e-3;
    double horizon_eps = 1e-4;
    std::string out;
};

struct TargetResult {
    std::string quantity;
    std::string param;
    double formula;
    std::optional<double> corrected;
    double mc_mean;
    double mc_se;
};

std::string z_text(double deviation, double se) {
    if (!(se > 0.0))
        return "n/a";
    return fmt(deviation / se);
}

int cmd_validate(const ValidateArgs& args) {
    if (args.model.kind == "stable")
        fail(kExitUsage, "validate: Monte Carlo validation needs an exponential-claims model");
    warn_low_q(args.q);
    const Model model = build_model(args.model);
    const bool classical = args.model.kind == "classical-exp";
    const double mu = args.model.mu;
    const double lambda = args.model.lambda;
    const double c = rci_model_premium_rate(model.get());

    rci_mc_config mc{args.paths, args.horizon_eps, args.dt, args.seed};

    const auto formula_kappa = [&](double x) {
        double v = 0.0;
        if (rci_kappa(model.get(), args.q, x, &v) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: kappa");
        return v;
    };
    const auto fp_kappa = [&](double x) {
        double v = 0.0;
        if (rci_kappa_first_passage(model.get(), args.q, x, &v) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: kappa_first_passage");
        return v;
    };

    // For the classical model every target's deviation is carried by the
    // e^{-mu x} term of the convolution kappa; corrected values add it back.
    const double kappa_gap = fp_kappa(args.x) - formula_kappa(args.x);

    std::vector<TargetResult> results;

    { // kappa
        rci_mc_estimate est{};
        if (rci_mc_kappa(model.get(), args.q, args.x, &mc, &est) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: mc kappa");
        results.push_back({"kappa", "-", formula_kappa(args.x),
                           classical ? std::optional<double>(fp_kappa(args.x)) : std::nullopt,
                           est.mean, est.std_error});
    }
    for (const double m : {0.0, 1.0}) { // varphi
        double formula = 0.0;
        if (rci_varphi(model.get(), args.q, args.x, m, &formula) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: varphi");
        rci_mc_estimate est{};
        if (rci_mc_varphi(model.get(), args.q, args.x, m, &mc, &est) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: mc varphi");
        std::optional<double> corrected;
        if (classical)
            corrected = formula + kappa_gap * std::exp(-mu * m) * (m + 1.0 / mu);
        results.push_back({"varphi", "m=" + fmt(m), formula, corrected, est.mean, est.std_error});
    }
    for (const double m : {0.0, 0.5, 1.0}) { // extreme-loss premium
        rci_breakdown b{};
        if (rci_premium_extreme_loss(model.get(), args.q, args.x, m, &b) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: premium");
        rci_mc_estimate est{};
        if (rci_mc_premium_extreme_loss(model.get(), args.q, args.x, m, &mc, &est) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: mc premium");
        std::optional<double> corrected;
        if (classical)
            corrected = b.premium
                        + kappa_gap * (std::exp(-mu * m) * (m + 1.0 / mu) + b.delta_factor);
        results.push_back({"pi1", "m=" + fmt(m), b.premium, corrected, est.mean, est.std_error});
    }
    { // proportional premium, a = 0.5
        rci_breakdown b{};
        if (rci_premium_proportional(model.get(), args.q, args.x, 0.5, 0, &b) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: premium");
        rci_mc_estimate est{};
        if (rci_mc_premium_proportional(model.get(), args.q, args.x, 0.5, &mc, &est) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: mc premium");
        std::optional<double> corrected;
        if (classical)
            corrected = b.premium + 0.5 * kappa_gap * (1.0 / mu + b.delta_factor);
        results.push_back({"pi2", "a=0.5", b.premium, corrected, est.mean, est.std_error});
    }

    // Simulator self-test against the classical ruin probability.
    rci_mc_estimate ruin{};
    if (rci_mc_ruin_probability(model.get(), args.q, args.x, &mc, &ruin) != RCI_OK)
        fail_status(RCI_ERR_NUMERIC, "validate: mc ruin probability");
    const double ruin_exact =
        classical ? lambda / (c * mu) * std::exp(-(mu - lambda / c) * args.x)
                  : std::numeric_limits<double>::quiet_NaN();

    // Delta dual evaluation.
    rci_delta_diag diag{};
    if (rci_delta_diagnostics(model.get(), args.q, 0.5, &diag) != RCI_OK)
        fail_status(RCI_ERR_NUMERIC, "validate: delta diagnostics");

    // kappa small-x gap table.
    const std::vector<double> gap_xs = {0.1, 0.25, 0.5, 1.0, 1.5, 2.5, 4.5};
    struct GapRow {
        double x, formula, first_passage, mc_mean, mc_se;
    };
    std::vector<GapRow> gap_rows;
    for (const double x : gap_xs) {
        rci_mc_estimate est{};
        if (rci_mc_kappa(model.get(), args.q, x, &mc, &est) != RCI_OK)
            fail_status(RCI_ERR_NUMERIC, "validate: mc kappa");
        gap_rows.push_back({x, formula_kappa(x), fp_kappa(x), est.mean, est.std_error});
    }

    std::ostringstream report;
    report << "# rci validation report\n";
    report << "# model: " << args.model.kind << " lambda=" << fmt(lambda) << " mu=" << fmt(mu)
           << " sigma=" << fmt(args.model.sigma) << " c=" << fmt(c) << "\n";
    report << "# q=" << fmt(args.q) << " x=" << fmt(args.x) << " paths=" << args.paths
           << " seed=" << args.seed << " dt=" << fmt(args.dt)
           << " horizon_eps=" << fmt(args.horizon_eps) << "\n";
    report << "# note: figure panels reading 'x = 4.0c' take the surplus as four times the\n";
    report << "#       premium rate; the literal reading x = 4.0 is the recorded alternative.\n";
    report << "#\n";
    report << "## simulator self-test\n";
    if (classical) {
        report << "ruin_probability mc=" << fmt(ruin.mean) << " se=" << fmt(ruin.std_error)
               << " exact=" << fmt(ruin_exact) << " z=" << z_text(ruin.mean - ruin_exact, ruin.std_error)
               << "\n";
    } else {
        report << "ruin_probability mc=" << fmt(ruin.mean) << " se=" << fmt(ruin.std_error)
               << " (no closed form for sigma > 0)\n";
    }
    report << "\n## formula vs monte carlo\n";
    report << "quantity param formula corrected mc_mean mc_se z_formula z_corrected\n";
    for (const auto& r : results) {
        report << r.quantity << ' ' << r.param << ' ' << fmt(r.formula) << ' '
               << (r.corrected ? fmt(*r.corrected) : "-") << ' ' << fmt(r.mc_mean) << ' '
               << fmt(r.mc_se) << ' ' << z_text(r.mc_mean - r.formula, r.mc_se) << ' '
               << (r.corrected ? z_text(r.mc_mean - *r.corrected, r.mc_se) : "-") << "\n";
    }
    report << "\n## delta dual evaluation (m=0.5)\n";
    if (diag.closed_form_applicable) {
        report << "delta_primary=" << fmt(diag.primary) << " delta_closed_form=" << fmt(diag.closed_form)
               << " rel_gap=" << fmt(diag.rel_gap) << "\n";
        report << "(primary is I_m/(1-I) from the kernel integrals; the reduced closed\n";
        report << " form drops an m-proportional term, so a nonzero gap is expected for m>0)\n";
    } else {
        report << "delta_primary=" << fmt(diag.primary)
               << " (sigma = 0: the reduced form coincides with the primary value)\n";
    }
    report << "\n## kappa small-x gap (convolution form vs first-passage form)\n";
    report << "x kappa_formula kappa_first_passage gap_predicted mc_mean mc_se z_vs_formula z_vs_fp\n";
    for (const auto& g : gap_rows) {
        report << fmt(g.x) << ' ' << fmt(g.formula) << ' ' << fmt(g.first_passage) << ' '
               << fmt(g.first_passage - g.formula) << ' ' << fmt(g.mc_mean) << ' ' << fmt(g.mc_se)
               << ' ' << z_text(g.mc_mean - g.formula, g.mc_se) << ' '
               << z_text(g.mc_mean - g.first_passage, g.mc_se) << "\n";
    }
    report << "\n## machine-readable\n";
    report << "csv,quantity,param,formula,corrected,mc_mean,mc_se\n";
    for (const auto& r : results) {
        report << "csv," << r.quantity << ',' << r.param << ',' << fmt(r.formula) << ','
               << (r.corrected ? fmt(*r.corrected) : "") << ',' << fmt(r.mc_mean) << ','
               << fmt(r.mc_se) << "\n";
    }
    for (const auto& g : gap_rows) {
        report << "csv,kappa_gap,x=" << fmt(g.x) << ',' << fmt(g.formula) << ','
               << fmt(g.first_passage) << ',' << fmt(g.mc_mean) << ',' << fmt(g.mc_se) << "\n";
    }

    if (args.out.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream out(args.out, std::ios::binary);
        if (!out)
            fail(kExitUsage, "validate: cannot open output file " + args.out);
        out << report.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Net premiums for reinsurance by capital injections on spectrally "
                 "negative Levy risk models"};
    app.require_subcommand(1);

    PremiumArgs premium_args;
    auto* premium_cmd = app.add_subcommand("premium", "Evaluate one premium with its breakdown");
    add_model_flags(premium_cmd, premium_args.model);
    premium_cmd->add_option("--q", premium_args.q, "Discount rate (> 0)");
    premium_cmd->add_option("--x", premium_args.x, "Initial surplus");
    premium_cmd->add_option("--contract", premium_args.contract, "extreme-loss or proportional")
        ->check(CLI::IsMember({"extreme-loss", "proportional"}));
    premium_cmd->add_option("--m", premium_args.m, "Retention level (extreme-loss)");
    premium_cmd->add_option("--a", premium_args.a, "Ceded fraction (proportional)");
    premium_cmd->add_flag("--allow-a-ge-1", premium_args.allow_a_ge_1,
                          "Permit a >= 1 (full recovery and beyond)");

    CurveArgs curve_args;
    auto* curve_cmd = app.add_subcommand("curve", "Sweep one variable and write a CSV");
    add_model_flags(curve_cmd, curve_args.model);
    curve_cmd->add_option("--variable", curve_args.variable, "Swept variable: m, theta, q or x")
        ->check(CLI::IsMember({"m", "theta", "q", "x"}));
    curve_cmd->add_option("--start", curve_args.start, "Sweep start")->required();
    curve_cmd->add_option("--stop", curve_args.stop, "Sweep stop")->required();
    curve_cmd->add_option("--step", curve_args.step, "Sweep step")->required();
    curve_cmd->add_option("--q", curve_args.q, "Discount rate");
    curve_cmd->add_option("--x", curve_args.x, "Initial surplus");
    curve_cmd->add_option("--contract", curve_args.contract, "extreme-loss or proportional")
        ->check(CLI::IsMember({"extreme-loss", "proportional"}));
    curve_cmd->add_option("--m", curve_args.m, "Retention level");
    curve_cmd->add_option("--a", curve_args.a, "Ceded fraction");
    curve_cmd->add_option("--out", curve_args.out, "Output CSV path")->required();

    std::string figures_dir = "figures";
    auto* figures_cmd = app.add_subcommand("figures", "Write the six premium-curve CSV panels");
    figures_cmd->add_option("--out-dir", figures_dir, "Output directory");

    ValidateArgs validate_args;
    auto* validate_cmd =
        app.add_subcommand("validate", "Monte Carlo validation campaign and report");
    add_model_flags(validate_cmd, validate_args.model);
    validate_cmd->add_option("--q", validate_args.q, "Discount rate");
    validate_cmd->add_option("--x", validate_args.x, "Initial surplus");
    validate_cmd->add_option("--paths", validate_args.paths, "Number of simulated paths");
    validate_cmd->add_option("--seed", validate_args.seed, "Stream seed");
    validate_cmd->add_option("--dt", validate_args.dt, "Euler step (sigma > 0)");
    validate_cmd->add_option("--horizon-eps", validate_args.horizon_eps,
                             "Discount horizon cutoff e^{-qT}");
    validate_cmd->add_option("--out", validate_args.out, "Report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (premium_cmd->parsed())
            return cmd_premium(premium_args);
        if (curve_cmd->parsed()) {
            std::vector<std::string> explicit_flags;
            for (const char* name : {"m", "q", "x", "theta"}) {
                if (curve_cmd->count(std::string("--") + name) > 0)
                    explicit_flags.emplace_back(name);
            }
            return cmd_curve(curve_args, explicit_flags);
        }
        if (figures_cmd->parsed())
            return cmd_figures(figures_dir);
        if (validate_cmd->parsed())
            return cmd_validate(validate_args);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
