// cli.hpp: command implementations behind the dephent executable
//
// Exit codes: 0 success, 2 usage or schema error, 3 chain or verdict failure.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dephent/bounds.hpp"
#include "dephent/spin_boson.hpp"

namespace dephent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

// Search effort shared by bounds and verify.
struct SearchEffort {
    int povm_restarts = 16;
    int povm_max_iters = 500;
    int ree_restarts = 4;
    int ree_terms = 0;
    int ree_max_iters = 1000;
    bool ree = true;
};

EvaluateOptions evaluate_options(const SearchEffort& effort, std::uint64_t seed, unsigned parallelism,
                                 std::optional<double> tolerance);

struct BoundsOptions {
    std::filesystem::path input;
    std::filesystem::path output;  // writes <output>.json and <output>.csv
    std::uint64_t seed = 0;
    unsigned parallelism = 1;
    std::optional<double> tolerance;  // analytic chain slack override
    SearchEffort effort;
};

int cmd_bounds(const BoundsOptions& opts, std::ostream& log);

using DimPair = std::pair<Eigen::Index, Eigen::Index>;

// "2x2,2x3" -> {(2,2), (2,3)}
std::vector<DimPair> parse_dims(const std::string& text);

struct VerifyOptions {
    int count = 1000;
    std::vector<DimPair> dims = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {3, 4}};
    std::uint64_t seed = 0;
    unsigned parallelism = 1;
    std::optional<double> tolerance;
    // Lighter REE search than bounds: every REE chain check is already met by a structured seed.
    SearchEffort effort{16, 500, 2, 16, 300, true};
    std::filesystem::path output;  // summary JSON; empty to skip writing
};

struct CheckTally {
    int applicable = 0;
    int passed = 0;
    double worst_slack = 0.0;  // most negative rhs - lhs seen among applicable cases
};

struct VerifySummary {
    int count = 0;
    std::map<std::string, CheckTally> checks;
    std::vector<std::string> failures;  // "instance <k> (<kind>, <dS>x<dE>): <check>"
    bool all_passed = true;

    nlohmann::json to_json(const VerifyOptions& opts) const;
};

// Instance k uses dims[k % n_dims] and instance kind (k / n_dims) % 4.
VerifySummary run_verify(const VerifyOptions& opts);
int cmd_verify(const VerifyOptions& opts, std::ostream& log);

struct SweepOptions {
    std::string preset = "alpha-scan";  // alpha-scan, temperature-scan or custom
    std::vector<double> s_values;
    std::vector<double> t_over_lambda;
    std::vector<double> alphas;
    double lambda_t_max = 10.0;
    double lambda_t_step = 0.05;
    bool best_effort_s = false;
    std::filesystem::path output;  // CSV; peaks go to <output stem>.peaks.json
};

std::vector<SpinBosonParams> sweep_grid(const SweepOptions& opts);
int cmd_sweep(const SweepOptions& opts, std::ostream& log);

struct OracleOptions {
    double s = 3.0;
    double t_over_lambda = 1.0;
    int modes = 500;
    double omega_max = 10.0;  // in units of Lambda
    std::optional<double> omega_min;
    double lambda_t_max = 5.0;
    double lambda_t_step = 0.1;
    int fock_cap = 256;
    double tolerance = 1e-2;
    bool best_effort_s = false;
    std::filesystem::path output;
};

struct OracleRow {
    double lambda_t;
    double analytic;
    double oracle;
    double rel_error;
};

struct OracleComparison {
    std::vector<OracleRow> rows;
    double max_rel_error = 0.0;
    bool pass = false;
    double omega_min = 0.0;
    double infrared_bound = 0.0;  // bound on |ln B| from modes below omega_min
};

// Lowest frequency whose thermal truncation fits in fock_cap with room for the displacement margin.
double default_omega_min(double temperature, int fock_cap);

OracleComparison run_oracle_compare(const OracleOptions& opts);
int cmd_oracle_compare(const OracleOptions& opts, std::ostream& log);

}  // namespace dephent::cli
