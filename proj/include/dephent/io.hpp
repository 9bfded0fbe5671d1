// io.hpp: instance files, report serialization and certificates
//
// Matrices are stored as {"re": [[...]], "im": [[...]]}, row-major, one inner
// array per row. Every file written here carries "schema_version"; readers
// reject any other version.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dephent/bounds.hpp"
#include "dephent/spin_boson.hpp"

namespace dephent {

inline constexpr int kSchemaVersion = 1;

// Raised for malformed or schema-violating input; the CLI maps it to exit code 2.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Instance {
    DephasingModel model;
    State rho_S;
    State rho_E;
    std::vector<double> times;
    PovmStrategy strategy = PovmStrategy::Optimized;
    std::optional<PovmX> povm;
};

nlohmann::json matrix_to_json(const MatrixXc& m);
MatrixXc matrix_from_json(const nlohmann::json& j, const std::string& field);

Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);
Instance read_instance(const std::filesystem::path& path);

nlohmann::json report_to_json(const BoundReport& r);
BoundReport report_from_json(const nlohmann::json& j);

// Column order of the BoundReport CSV.
const std::vector<std::string>& report_csv_columns();
std::string report_csv_header();
std::string report_csv_row(const BoundReport& r);

void write_reports(const std::filesystem::path& json_path, const std::filesystem::path& csv_path,
                   const std::vector<BoundReport>& reports);
std::vector<BoundReport> read_reports_json(const std::filesystem::path& path);

nlohmann::json povm_to_json(const PovmX& m);
PovmX povm_from_json(const nlohmann::json& j);

nlohmann::json ansatz_to_json(const SeparableAnsatz& a);
SeparableAnsatz ansatz_from_json(const nlohmann::json& j);

inline constexpr const char* kSweepCsvHeader =
    "s,T_over_Lambda,alpha,Lambda_t,B_vac,B_th,B,raw_bound,clamped_bound";

std::string sweep_csv_row(const SpinBosonParams& p, const CurvePoint& c);

// Shortest round-trip decimal form.
std::string format_double(double v);

// Checks "schema_version" and throws SchemaError on mismatch.
void require_schema_version(const nlohmann::json& j, const std::string& what);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dephent
