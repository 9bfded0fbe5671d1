#include "dephent/cli.hpp"

#include <cmath>
#include <sstream>

#include "dephent/io.hpp"
#include "dephent/parallel.hpp"
#include "dephent/random_instances.hpp"

namespace dephent::cli {

using nlohmann::json;

namespace {

constexpr InstanceKind kKinds[] = {InstanceKind::Generic, InstanceKind::Family, InstanceKind::PurePure,
                                   InstanceKind::Diagonal};

// Keeps a few levels of the Fock cap free for the displacement margin.
constexpr int kMarginReserve = 40;

std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
    return base.parent_path() / (base.stem().string() + suffix);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
    Rng rng = stream_rng(seed, index);
    return rng();
}

}  // namespace

EvaluateOptions evaluate_options(const SearchEffort& effort, std::uint64_t seed, unsigned parallelism,
                                 std::optional<double> tolerance) {
    EvaluateOptions o;
    o.povm_search.restarts = effort.povm_restarts;
    o.povm_search.max_iters = effort.povm_max_iters;
    o.povm_search.seed = seed;
    o.povm_search.parallelism = parallelism;
    o.compute_ree = effort.ree;
    o.ree_search.restarts = effort.ree_restarts;
    o.ree_search.terms = effort.ree_terms;
    o.ree_search.max_iters = effort.ree_max_iters;
    o.ree_search.seed = seed;
    o.ree_search.parallelism = parallelism;
    if (tolerance) o.tolerances.analytic = *tolerance;
    return o;
}

int cmd_bounds(const BoundsOptions& opts, std::ostream& log) {
    const Instance inst = read_instance(opts.input);
    EvaluateOptions eval = evaluate_options(opts.effort, opts.seed, opts.parallelism, opts.tolerance);
    eval.strategy = inst.strategy;
    eval.fixed_povm = inst.povm;
    std::vector<BoundReport> reports;
    bool ok = true;
    for (double t : inst.times) {
        reports.push_back(evaluate_instance(inst.model, inst.rho_S, inst.rho_E, t, eval));
        const BoundReport& r = reports.back();
        log << "t=" << format_double(t) << " lower_clamped=" << format_double(r.lower_clamped)
            << " upper=" << format_double(r.upper) << " chain_ok=" << (r.chain_ok() ? "true" : "false") << "\n";
        for (const auto& name : r.failures()) log << "  chain failure: " << name << "\n";
        ok = ok && r.chain_ok();
    }
    if (!opts.output.empty()) {
        write_reports(with_suffix(opts.output, ".json"), with_suffix(opts.output, ".csv"), reports);
    }
    return ok ? kExitOk : kExitFailure;
}

std::vector<DimPair> parse_dims(const std::string& text) {
    std::vector<DimPair> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos) throw std::invalid_argument("dims entry '" + item + "' is not of the form SxE");
        try {
            std::size_t used = 0;
            const long ds = std::stol(item.substr(0, x), &used);
            if (used != x) throw std::invalid_argument("bad");
            const std::string rest = item.substr(x + 1);
            const long de = std::stol(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("bad");
            if (ds < 2 || de < 1) throw std::invalid_argument("bad");
            out.emplace_back(ds, de);
        } catch (const std::exception&) {
            throw std::invalid_argument("dims entry '" + item + "' is not of the form SxE with S >= 2, E >= 1");
        }
    }
    if (out.empty()) throw std::invalid_argument("dims list is empty");
    return out;
}

json VerifySummary::to_json(const VerifyOptions& opts) const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "verify_summary";
    j["count"] = count;
    j["seed"] = opts.seed;
    json dims = json::array();
    for (const auto& [ds, de] : opts.dims) dims.push_back(std::to_string(ds) + "x" + std::to_string(de));
    j["dims"] = std::move(dims);
    json checks = json::object();
    for (const auto& [name, t] : this->checks) {
        checks[name] = {{"applicable", t.applicable}, {"passed", t.passed}, {"worst_slack", t.worst_slack}};
    }
    j["checks"] = std::move(checks);
    j["failures"] = failures;
    j["all_passed"] = all_passed;
    return j;
}

VerifySummary run_verify(const VerifyOptions& opts) {
    if (opts.count < 1) throw std::invalid_argument("verify: count must be at least 1");
    if (opts.dims.empty()) throw std::invalid_argument("verify: dims list is empty");
    const auto n = static_cast<std::size_t>(opts.count);
    std::vector<std::optional<BoundReport>> reports(n);
    std::vector<InstanceKind> kinds(n);
    // Instances run in parallel; each search inside stays single-threaded.
    parallel_for(n, opts.parallelism, [&](std::size_t k) {
        const auto& [ds, de] = opts.dims[k % opts.dims.size()];
        kinds[k] = kKinds[(k / opts.dims.size()) % 4];
        Rng rng = stream_rng(opts.seed, k);
        const RandomInstance inst = random_instance(ds, de, kinds[k], rng);
        const EvaluateOptions eval = evaluate_options(opts.effort, derived_seed(opts.seed, k), 1, opts.tolerance);
        reports[k] = evaluate_instance(inst.model, inst.rho_S, inst.rho_E, inst.t, eval);
    });
    VerifySummary s;
    s.count = opts.count;
    for (std::size_t k = 0; k < n; ++k) {
        const BoundReport& r = *reports[k];
        for (const auto& c : r.chain) {
            CheckTally& t = s.checks[c.name];
            if (!c.applicable) continue;
            if (t.applicable == 0 || c.slack < t.worst_slack) t.worst_slack = c.slack;
            ++t.applicable;
            if (c.ok) {
                ++t.passed;
            } else {
                s.all_passed = false;
                s.failures.push_back("instance " + std::to_string(k) + " (" + to_string(kinds[k]) + ", " +
                                     std::to_string(r.d_S) + "x" + std::to_string(r.d_E) + "): " + c.name);
            }
        }
    }
    return s;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& log) {
    const VerifySummary s = run_verify(opts);
    for (const auto& [name, t] : s.checks) {
        log << name << ": " << t.passed << "/" << t.applicable << " (worst slack " << format_double(t.worst_slack)
            << ")\n";
    }
    for (const auto& f : s.failures) log << "FAIL " << f << "\n";
    if (!opts.output.empty()) write_text_file(opts.output, s.to_json(opts).dump(2) + "\n");
    return s.all_passed ? kExitOk : kExitFailure;
}

std::vector<SpinBosonParams> sweep_grid(const SweepOptions& opts) {
    std::vector<double> s_values = opts.s_values;
    std::vector<double> ratios = opts.t_over_lambda;
    std::vector<double> alphas = opts.alphas;
    if (opts.preset == "alpha-scan") {
        if (s_values.empty()) s_values = {2.0, 3.0};
        if (ratios.empty()) ratios = {1.0};
        if (alphas.empty()) alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
    } else if (opts.preset == "temperature-scan") {
        if (s_values.empty()) s_values = {2.0, 3.0};
        if (ratios.empty()) ratios = {0.5, 1.0, 2.0};
        if (alphas.empty()) alphas = {0.5};
    } else if (opts.preset != "custom") {
        throw std::invalid_argument("sweep: unknown preset '" + opts.preset + "'");
    }
    if (s_values.empty() || ratios.empty() || alphas.empty()) {
        throw std::invalid_argument("sweep: custom preset needs --s, --T and --alpha values");
    }
    const std::vector<double> times = uniform_grid(opts.lambda_t_max, opts.lambda_t_step);
    std::vector<SpinBosonParams> grid;
    for (double s : s_values)
        for (double r : ratios)
            for (double a : alphas) {
                SpinBosonParams p{s, 1.0, r, a, times, opts.best_effort_s};
                p.validate();
                grid.push_back(std::move(p));
            }
    return grid;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& log) {
    const auto grid = sweep_grid(opts);
    std::string csv = std::string(kSweepCsvHeader) + "\n";
    json peaks = json::array();
    for (const auto& p : grid) {
        const auto curve = bound_curve(p);
        for (const auto& c : curve) csv += sweep_csv_row(p, c) + "\n";
        const auto peak = detect_peak(curve);
        json entry = {{"s", p.s}, {"T_over_Lambda", p.t_over_lambda()}, {"alpha", p.alpha}};
        entry["peak_Lambda_t"] = peak ? json(peak->lambda_t) : json(nullptr);
        entry["prominence"] = peak ? json(peak->prominence) : json(nullptr);
        entry["asymptotic_clamped_bound"] = curve.back().clamped;
        peaks.push_back(std::move(entry));
        log << "s=" << format_double(p.s) << " T/Lambda=" << format_double(p.t_over_lambda())
            << " alpha=" << format_double(p.alpha)
            << (peak ? " peak at Lambda t=" + format_double(peak->lambda_t) : std::string(" no peak")) << "\n";
    }
    if (!opts.output.empty()) {
        write_text_file(opts.output, csv);
        json side = {{"schema_version", kSchemaVersion},
                     {"kind", "sweep_peaks"},
                     {"csv_header", kSweepCsvHeader},
                     {"preset", opts.preset},
                     {"curves", std::move(peaks)}};
        write_text_file(with_suffix(opts.output, ".peaks.json"), side.dump(2) + "\n");
    } else {
        log << csv;
    }
    return kExitOk;
}

double default_omega_min(double temperature, int fock_cap) {
    if (temperature <= 0.0) return 0.0;
    const int room = fock_cap - kMarginReserve;
    if (room < 2) throw std::invalid_argument("oracle: Fock cap too small");
    // thermal levels ~ ln(1e8) T / omega
    return std::log(1e8) * temperature / (room - 1);
}

OracleComparison run_oracle_compare(const OracleOptions& opts) {
    SpinBosonParams p{opts.s, 1.0, opts.t_over_lambda, 0.0, uniform_grid(opts.lambda_t_max, opts.lambda_t_step),
                      opts.best_effort_s};
    p.validate();
    OracleComparison out;
    out.omega_min = opts.omega_min.value_or(default_omega_min(p.temperature, opts.fock_cap));
    const DiscreteBath bath = sample_bath(p, opts.modes, opts.omega_max, out.omega_min, opts.fock_cap);
    const std::vector<double> oracle = oracle_fidelity_curve(bath, p.times, p.temperature);
    if (out.omega_min > 0.0 && p.temperature > 0.0) {
        const double t = p.times.back();
        out.infrared_bound = t * t * std::pow(out.omega_min, p.s + 2.0) / (2.0 * p.temperature * (p.s + 2.0));
    }
    for (std::size_t k = 0; k < p.times.size(); ++k) {
        const double analytic = analytic_fidelity(p.times[k], p);
        const double rel = std::abs(oracle[k] - analytic) / std::max(std::abs(analytic), 1e-300);
        out.rows.push_back({p.times[k], analytic, oracle[k], rel});
        out.max_rel_error = std::max(out.max_rel_error, rel);
    }
    out.pass = out.max_rel_error <= opts.tolerance;
    return out;
}

int cmd_oracle_compare(const OracleOptions& opts, std::ostream& log) {
    const OracleComparison cmp = run_oracle_compare(opts);
    std::string csv = "s,T_over_Lambda,Lambda_t,B_analytic,B_oracle,rel_error\n";
    for (const auto& r : cmp.rows) {
        csv += format_double(opts.s) + "," + format_double(opts.t_over_lambda) + "," + format_double(r.lambda_t) +
               "," + format_double(r.analytic) + "," + format_double(r.oracle) + "," + format_double(r.rel_error) +
               "\n";
    }
    if (!opts.output.empty()) {
        write_text_file(opts.output, csv);
        json verdict = {{"schema_version", kSchemaVersion},
                        {"kind", "oracle_verdict"},
                        {"s", opts.s},
                        {"T_over_Lambda", opts.t_over_lambda},
                        {"modes", opts.modes},
                        {"omega_max", opts.omega_max},
                        {"omega_min", cmp.omega_min},
                        {"infrared_bound", cmp.infrared_bound},
                        {"tolerance", opts.tolerance},
                        {"max_rel_error", cmp.max_rel_error},
                        {"pass", cmp.pass}};
        write_text_file(with_suffix(opts.output, ".verdict.json"), verdict.dump(2) + "\n");
    }
    log << "max relative error " << format_double(cmp.max_rel_error) << " (tolerance "
        << format_double(opts.tolerance) << ", omega_min " << format_double(cmp.omega_min) << ", infrared bound "
        << format_double(cmp.infrared_bound) << "): " << (cmp.pass ? "PASS" : "FAIL") << "\n";
    return cmp.pass ? kExitOk : kExitFailure;
}

}  // namespace dephent::cli
