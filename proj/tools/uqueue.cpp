// uqueue: expected total time of a customer who must visit two M/M/1 queues.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "output.hpp"
#include "uqueue/errors.hpp"
#include "uqueue/ett.hpp"
#include "uqueue/sim.hpp"

namespace {

using namespace uq;
using cli::Cell;
using cli::TableWriter;

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConvergence = 4;
constexpr const char* kTolEnv = "UQUEUE_REL_TOL";

struct Common {
    double lambda = 0.0;
    double mu = 0.0;
    std::string format = "human";
    std::string out;
    std::optional<double> tol;
    bool verbose = false;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--lambda", c.lambda, "Arrival rate")->required()->check(CLI::NonNegativeNumber);
    sub->add_option("--mu", c.mu, "Service rate")->required()->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"human", "csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", c.out, "Write output to PATH instead of stdout");
    sub->add_option("--tol", c.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", c.verbose, "Print derived quantities to stderr");
}

QuadConfig quad_config(const Common& c) {
    QuadConfig cfg;
    if (const char* env = std::getenv(kTolEnv)) {
        try {
            cfg.rel_tol = std::stod(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(kTolEnv) + " is not a number");
        }
    }
    if (c.tol) cfg.rel_tol = *c.tol;
    cfg.validate();
    return cfg;
}

// Owns the output stream for one command.
class Sink {
public:
    explicit Sink(const Common& c) {
        if (!c.out.empty()) {
            file_ = std::make_unique<std::ofstream>(c.out);
            if (!*file_) throw std::runtime_error("cannot open '" + c.out + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

QueueParams params_of(const Common& c) {
    QueueParams p(c.lambda, c.mu);
    if (c.verbose) std::cerr << "rho = lambda/mu = " << cli::format_number(p.rho()) << '\n';
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expected total time for a customer visiting two M/M/1 queues in either order"};
    app.require_subcommand(1);

    Common ett_opts, cmp_opts, sweep_opts, sim_opts, curve_opts, pij_opts, fluid_opts;
    int a = 0, b = 0;
    std::string order = "ab";
    auto* ett_cmd = app.add_subcommand("ett", "Exact expected total time");
    add_common(ett_cmd, ett_opts, "human");
    ett_cmd->add_option("--a", a, "Length of the queue joined first")->required()->check(CLI::NonNegativeNumber);
    ett_cmd->add_option("--b", b, "Length of the other queue")->required()->check(CLI::NonNegativeNumber);
    ett_cmd->add_option("--order", order, "Which order(s) to evaluate")
        ->check(CLI::IsMember({"ab", "ba", "both"}))
        ->capture_default_str();

    auto* cmp_cmd = app.add_subcommand("compare", "Evaluate both orders and recommend one");
    add_common(cmp_cmd, cmp_opts, "human");
    cmp_cmd->add_option("--a", a)->required()->check(CLI::NonNegativeNumber);
    cmp_cmd->add_option("--b", b)->required()->check(CLI::NonNegativeNumber);

    std::string a_range = "0..5", b_range = "0..5";
    unsigned threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate both orders over a grid of (a, b)");
    add_common(sweep_cmd, sweep_opts, "csv");
    sweep_cmd->add_option("--a", a_range, "Range LO..HI")->capture_default_str();
    sweep_cmd->add_option("--b", b_range, "Range LO..HI")->capture_default_str();
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    long reps = 100000;
    std::uint64_t seed = 1;
    std::uint32_t stream = 0;
    std::string method = "two-stage";
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the expected total time");
    add_common(sim_cmd, sim_opts, "human");
    sim_cmd->add_option("--a", a)->required()->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--b", b)->required()->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber)->capture_default_str();
    sim_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim_cmd->add_option("--stream", stream, "RNG stream id")->capture_default_str();
    sim_cmd->add_option("--method", method, "Simulation model")
        ->check(CLI::IsMember({"two-stage", "full"}))
        ->capture_default_str();
    sim_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    std::string i_range = "0..7";
    double t_max = 10.0;
    int steps = 200;
    auto* curve_cmd = app.add_subcommand("curves", "Expected length EL_i(t) on a uniform time grid");
    add_common(curve_cmd, curve_opts, "csv");
    curve_cmd->add_option("--i", i_range, "Initial counts LO..HI")->capture_default_str();
    curve_cmd->add_option("--t-max", t_max)->check(CLI::PositiveNumber)->capture_default_str();
    curve_cmd->add_option("--steps", steps)->check(CLI::PositiveNumber)->capture_default_str();

    int i0 = 0, j0 = 0;
    double t0 = 0.0;
    auto* pij_cmd = app.add_subcommand("pij", "Transient probability p_ij(t)");
    add_common(pij_cmd, pij_opts, "human");
    pij_cmd->add_option("--i", i0)->required()->check(CLI::NonNegativeNumber);
    pij_cmd->add_option("--j", j0)->required()->check(CLI::NonNegativeNumber);
    pij_cmd->add_option("--t", t0)->required()->check(CLI::NonNegativeNumber);

    auto* fluid_cmd = app.add_subcommand("fluid", "Deterministic drift approximations");
    add_common(fluid_cmd, fluid_opts, "human");
    fluid_cmd->add_option("--a", a)->required()->check(CLI::NonNegativeNumber);
    fluid_cmd->add_option("--b", b)->required()->check(CLI::NonNegativeNumber);
    std::string fluid_mode = "both";
    fluid_cmd->add_option("--mode", fluid_mode, "linear drift, exact EL curve, or both")
        ->check(CLI::IsMember({"linear", "curve", "both"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*ett_cmd) {
            const QueueParams p = params_of(ett_opts);
            const QuadConfig cfg = quad_config(ett_opts);
            std::vector<std::pair<std::string, TransientValue>> rows;
            if (order != "ba") rows.emplace_back("ab", ett_with_error({p, a, b}, cfg));
            if (order != "ab") rows.emplace_back("ba", ett_with_error({p, b, a}, cfg));
            Sink sink(ett_opts);
            TableWriter table(sink.stream(), cli::parse_format(ett_opts.format),
                              {"order", "a", "b", "ett", "error_estimate"});
            for (const auto& [label, v] : rows)
                table.row({label, long{a}, long{b}, v.value, v.error_estimate});
        } else if (*cmp_cmd) {
            const QueueParams p = params_of(cmp_opts);
            const QuadConfig cfg = quad_config(cmp_opts);
            const EttReport r = compare_orders(p, a, b, cfg);
            Sink sink(cmp_opts);
            TableWriter table(sink.stream(), cli::parse_format(cmp_opts.format),
                              {"a", "b", "ett_ab", "ett_ba", "gap", "error_estimate",
                               "recommendation", "case"});
            table.row({long{a}, long{b}, r.ett_ab, r.ett_ba, r.ett_ab - r.ett_ba, r.error_estimate,
                       std::string(to_string(r.recommended_order)),
                       std::string(to_string(r.case_label))});
        } else if (*sweep_cmd) {
            const QueueParams p = params_of(sweep_opts);
            const QuadConfig cfg = quad_config(sweep_opts);
            const IntRange ar = IntRange::parse(a_range);
            const IntRange br = IntRange::parse(b_range);
            Sink sink(sweep_opts);
            TableWriter table(sink.stream(), cli::parse_format(sweep_opts.format),
                              {"a", "b", "ett_ab", "ett_ba", "winner", "case"});
            sweep(p, ar, br, cfg,
                  [&](const SweepRow& r) {
                      table.row({long{r.a}, long{r.b}, r.ett_ab, r.ett_ba,
                                 std::string(to_string(r.winner)),
                                 std::string(to_string(r.case_label))});
                  },
                  threads);
        } else if (*sim_cmd) {
            const QueueParams p = params_of(sim_opts);
            SimConfig cfg;
            cfg.replications = reps;
            cfg.seed = seed;
            cfg.stream_id = stream;
            cfg.method = method == "full" ? SimMethod::FullEvent : SimMethod::TwoStage;
            cfg.threads = threads;
            const SimEstimate est = simulate_ett({p, a, b}, cfg);
            Sink sink(sim_opts);
            TableWriter table(sink.stream(), cli::parse_format(sim_opts.format),
                              {"mean", "std_error", "replications", "seed"});
            table.row({est.mean, est.std_error, est.replications, std::to_string(est.seed)});
        } else if (*curve_cmd) {
            const QueueParams p = params_of(curve_opts);
            const QuadConfig cfg = quad_config(curve_opts);
            const IntRange ir = IntRange::parse(i_range);
            Sink sink(curve_opts);
            TableWriter table(sink.stream(), cli::parse_format(curve_opts.format), {"t", "i", "el"});
            for (int i = ir.lo; i <= ir.hi; ++i) {
                for (int k = 0; k <= steps; ++k) {
                    const double t = t_max * k / steps;
                    table.row({t, long{i}, expected_length(i, t, p, cfg)});
                }
            }
        } else if (*pij_cmd) {
            const QueueParams p = params_of(pij_opts);
            const QuadConfig cfg = quad_config(pij_opts);
            const double prob = transient_prob({i0, j0, t0}, p, cfg);
            Sink sink(pij_opts);
            TableWriter table(sink.stream(), cli::parse_format(pij_opts.format), {"i", "j", "t", "p"});
            table.row({long{i0}, long{j0}, t0, prob});
        } else if (*fluid_cmd) {
            const QueueParams p = params_of(fluid_opts);
            const QuadConfig cfg = quad_config(fluid_opts);
            std::vector<std::string> columns{"a", "b"};
            std::vector<Cell> cells{long{a}, long{b}};
            if (fluid_mode != "curve") {
                columns.emplace_back("fluid_linear");
                cells.emplace_back(fluid_linear(p, a, b));
            }
            if (fluid_mode != "linear") {
                columns.emplace_back("fluid_curve");
                cells.emplace_back(fluid_curve(p, a, b, cfg));
            }
            Sink sink(fluid_opts);
            TableWriter table(sink.stream(), cli::parse_format(fluid_opts.format), columns);
            table.row(cells);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what()
                  << "\nhint: analytic results need 0 < lambda < mu; try `uqueue simulate`\n";
        return kExitDomain;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const EnvelopeViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
