#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "dephent/cli.hpp"
#include "dephent/io.hpp"

namespace {

using namespace dephent::cli;

void add_effort(CLI::App* cmd, SearchEffort& e) {
    cmd->add_option("--povm-restarts", e.povm_restarts, "random POVM restarts")->check(CLI::NonNegativeNumber);
    cmd->add_option("--povm-iters", e.povm_max_iters, "POVM optimizer iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--ree-restarts", e.ree_restarts, "random separable-ansatz restarts")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--ree-terms", e.ree_terms, "separable-ansatz terms (0 means d^2)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--ree-iters", e.ree_max_iters, "REE optimizer iteration cap")->check(CLI::PositiveNumber);
    cmd->add_flag("!--no-ree", e.ree, "skip the entanglement bracket");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherence-to-entanglement bounds for pure dephasing"};
    app.require_subcommand(1);

    BoundsOptions bounds;
    std::optional<double> bounds_tol;
    auto* b = app.add_subcommand("bounds", "evaluate the bounds on an instance file");
    b->add_option("--input", bounds.input, "instance JSON")->required();
    b->add_option("--output", bounds.output, "output stem; writes <stem>.json and <stem>.csv");
    b->add_option("--seed", bounds.seed, "search seed");
    b->add_option("--parallelism", bounds.parallelism, "worker threads")->check(CLI::PositiveNumber);
    b->add_option("--tolerance", bounds_tol, "analytic chain tolerance")->check(CLI::PositiveNumber);
    add_effort(b, bounds.effort);

    VerifyOptions verify;
    std::optional<double> verify_tol;
    std::string dims_text;
    auto* v = app.add_subcommand("verify", "run the proof-chain suite on seeded random instances");
    v->add_option("--count", verify.count, "number of instances");
    v->add_option("--dims", dims_text, "comma-separated SxE list, e.g. 2x2,2x3");
    v->add_option("--seed", verify.seed, "master seed");
    v->add_option("--parallelism", verify.parallelism, "worker threads")->check(CLI::PositiveNumber);
    v->add_option("--tolerance", verify_tol, "analytic chain tolerance")->check(CLI::PositiveNumber);
    v->add_option("--output", verify.output, "summary JSON");
    add_effort(v, verify.effort);

    SweepOptions sweep;
    auto* s = app.add_subcommand("sweep", "spin-boson bound curves");
    s->add_option("--preset", sweep.preset, "alpha-scan, temperature-scan or custom")
        ->check(CLI::IsMember({"alpha-scan", "temperature-scan", "custom"}));
    s->add_option("--s", sweep.s_values, "Ohmicity values")->delimiter(',');
    s->add_option("--T", sweep.t_over_lambda, "T/Lambda values")->delimiter(',');
    s->add_option("--alpha", sweep.alphas, "mixedness values")->delimiter(',');
    s->add_option("--lambda-t-max", sweep.lambda_t_max, "last Lambda t")->check(CLI::NonNegativeNumber);
    s->add_option("--step", sweep.lambda_t_step, "Lambda t spacing")->check(CLI::PositiveNumber);
    s->add_flag("--best-effort-s", sweep.best_effort_s, "allow non-integer Ohmicity");
    s->add_option("--output", sweep.output, "CSV path; peaks go to <stem>.peaks.json");

    OracleOptions oracle;
    auto* o = app.add_subcommand("oracle-compare", "compare the analytic fidelity with a discrete-mode oracle");
    o->add_option("--s", oracle.s, "Ohmicity");
    o->add_option("--T", oracle.t_over_lambda, "T/Lambda")->check(CLI::NonNegativeNumber);
    o->add_option("--modes", oracle.modes, "number of bath modes")->check(CLI::PositiveNumber);
    o->add_option("--omega-max", oracle.omega_max, "highest mode frequency over Lambda")
        ->check(CLI::PositiveNumber);
    o->add_option("--omega-min", oracle.omega_min, "lowest mode frequency over Lambda")
        ->check(CLI::NonNegativeNumber);
    o->add_option("--lambda-t-max", oracle.lambda_t_max, "last Lambda t")->check(CLI::NonNegativeNumber);
    o->add_option("--step", oracle.lambda_t_step, "Lambda t spacing")->check(CLI::PositiveNumber);
    o->add_option("--fock-cap", oracle.fock_cap, "per-mode Fock level cap")->check(CLI::PositiveNumber);
    o->add_option("--tolerance", oracle.tolerance, "verdict threshold on max relative error")
        ->check(CLI::PositiveNumber);
    o->add_flag("--best-effort-s", oracle.best_effort_s, "allow non-integer Ohmicity");
    o->add_option("--output", oracle.output, "CSV path; verdict goes to <stem>.verdict.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (b->parsed()) {
            bounds.tolerance = bounds_tol;
            return cmd_bounds(bounds, std::cout);
        }
        if (v->parsed()) {
            verify.tolerance = verify_tol;
            if (!dims_text.empty()) verify.dims = parse_dims(dims_text);
            if (verify.count < 1) throw std::invalid_argument("verify: --count must be at least 1");
            return cmd_verify(verify, std::cout);
        }
        if (s->parsed()) return cmd_sweep(sweep, std::cout);
        if (o->parsed()) return cmd_oracle_compare(oracle, std::cout);
    } catch (const dephent::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
