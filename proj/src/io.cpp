#include "dephent/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dephent {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& name) {
    if (!j.is_object() || !j.contains(name)) throw SchemaError("missing field '" + name + "'");
    return j.at(name);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw SchemaError("field '" + what + "' must be a number");
    return j.get<double>();
}

Eigen::Index count(const json& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<long long>() < 1) {
        throw SchemaError("field '" + what + "' must be a positive integer");
    }
    return static_cast<Eigen::Index>(j.get<long long>());
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const std::string& name) {
    if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
    return j.at(name).get<double>();
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

template <typename Fn>
auto schema_guard(Fn&& fn, const std::string& what) {
    try {
        return fn();
    } catch (const SchemaError&) {
        throw;
    } catch (const json::exception& e) {
        throw SchemaError(what + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(what + ": " + e.what());
    } catch (const std::domain_error& e) {
        throw SchemaError(what + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void require_schema_version(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
        throw SchemaError(what + ": missing integer schema_version");
    }
    const int v = j.at("schema_version").get<int>();
    if (v != kSchemaVersion) {
        throw SchemaError(what + ": schema_version " + std::to_string(v) + " is not the supported version " +
                          std::to_string(kSchemaVersion));
    }
}

json matrix_to_json(const MatrixXc& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array();
        json ir = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            rr.push_back(m(i, k).real());
            ir.push_back(m(i, k).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return {{"re", std::move(re)}, {"im", std::move(im)}};
}

MatrixXc matrix_from_json(const json& j, const std::string& name) {
    const json& re = field(j, "re");
    const bool has_im = j.contains("im");
    if (!re.is_array() || re.empty()) throw SchemaError("'" + name + ".re' must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(re.size());
    if (!re.front().is_array()) throw SchemaError("'" + name + ".re' rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(re.front().size());
    if (has_im && (!j.at("im").is_array() || static_cast<Eigen::Index>(j.at("im").size()) != rows)) {
        throw SchemaError("'" + name + ".im' must match the shape of '" + name + ".re'");
    }
    MatrixXc m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& rr = re.at(static_cast<std::size_t>(i));
        if (!rr.is_array() || static_cast<Eigen::Index>(rr.size()) != cols) {
            throw SchemaError("'" + name + "' is not rectangular");
        }
        const json* ir = has_im ? &j.at("im").at(static_cast<std::size_t>(i)) : nullptr;
        if (ir && (!ir->is_array() || static_cast<Eigen::Index>(ir->size()) != cols)) {
            throw SchemaError("'" + name + ".im' is not rectangular");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            const double a = number(rr.at(kk), name + ".re");
            const double b = ir ? number(ir->at(kk), name + ".im") : 0.0;
            m(i, k) = {a, b};
        }
    }
    return m;
}

Instance instance_from_json(const json& j) {
    return schema_guard(
        [&] {
            require_schema_version(j, "instance");
            const Eigen::Index ds = count(field(j, "d_S"), "d_S");
            const Eigen::Index de = count(field(j, "d_E"), "d_E");
            const json& energies = field(j, "pointer_energies");
            if (!energies.is_array() || static_cast<Eigen::Index>(energies.size()) != ds) {
                throw SchemaError("'pointer_energies' must list d_S numbers");
            }
            std::vector<double> eps;
            for (const auto& e : energies) eps.push_back(number(e, "pointer_energies"));
            const MatrixXc h_env = matrix_from_json(field(j, "H_E"), "H_E");
            if (h_env.rows() != de || h_env.cols() != de) throw SchemaError("'H_E' must be d_E x d_E");
            const json& v = field(j, "V");
            if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != ds) {
                throw SchemaError("'V' must list d_S coupling matrices");
            }
            std::vector<MatrixXc> couplings;
            for (std::size_t i = 0; i < v.size(); ++i) {
                couplings.push_back(matrix_from_json(v[i], "V[" + std::to_string(i) + "]"));
                if (couplings.back().rows() != de || couplings.back().cols() != de) {
                    throw SchemaError("'V[" + std::to_string(i) + "]' must be d_E x d_E");
                }
            }
            const MatrixXc rs = matrix_from_json(field(j, "rho_S"), "rho_S");
            const MatrixXc re = matrix_from_json(field(j, "rho_E"), "rho_E");
            if (rs.rows() != ds || rs.cols() != ds) throw SchemaError("'rho_S' must be d_S x d_S");
            if (re.rows() != de || re.cols() != de) throw SchemaError("'rho_E' must be d_E x d_E");
            const json& times = field(j, "times");
            if (!times.is_array() || times.empty()) throw SchemaError("'times' must be a non-empty array");
            std::vector<double> ts;
            for (const auto& t : times) ts.push_back(number(t, "times"));

            Instance inst{DephasingModel(std::move(eps), h_env, std::move(couplings)), State(rs), State(re),
                          std::move(ts), PovmStrategy::Optimized, std::nullopt};
            if (j.contains("povm_strategy")) {
                inst.strategy = povm_strategy_from_string(j.at("povm_strategy").get<std::string>());
            }
            if (j.contains("povm")) inst.povm = povm_from_json(j.at("povm"));
            if (inst.strategy == PovmStrategy::Fixed && !inst.povm) {
                throw SchemaError("'povm_strategy' fixed requires a 'povm' field");
            }
            if (inst.povm && inst.povm->dim() != de) throw SchemaError("'povm' elements must be d_E x d_E");
            return inst;
        },
        "instance");
}

json instance_to_json(const Instance& inst) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["d_S"] = inst.model.system_dim();
    j["d_E"] = inst.model.env_dim();
    j["pointer_energies"] = inst.model.pointer_energies();
    j["H_E"] = matrix_to_json(inst.model.env_hamiltonian());
    j["V"] = json::array();
    for (const auto& v : inst.model.couplings()) j["V"].push_back(matrix_to_json(v));
    j["rho_S"] = matrix_to_json(inst.rho_S.matrix());
    j["rho_E"] = matrix_to_json(inst.rho_E.matrix());
    j["times"] = inst.times;
    j["povm_strategy"] = to_string(inst.strategy);
    if (inst.povm) j["povm"] = povm_to_json(*inst.povm);
    return j;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Instance read_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

json report_to_json(const BoundReport& r) {
    json j;
    j["t"] = r.t;
    j["d_S"] = r.d_S;
    j["d_E"] = r.d_E;
    j["C_r_initial"] = r.C_r_initial;
    j["C_r_final"] = r.C_r_final;
    j["H_I"] = r.H_I;
    j["H_I_given_M"] = r.H_I_given_M;
    j["p"] = optional_number(r.p);
    j["fidelity_B"] = optional_number(r.fidelity_B);
    j["lower_general"] = r.lower_general;
    j["lower_qubit"] = optional_number(r.lower_qubit);
    j["lower_clamped"] = r.lower_clamped;
    j["neg_cond_entropy"] = r.neg_cond_entropy;
    j["mutual_info"] = r.mutual_info;
    j["upper"] = r.upper;
    j["S_sigma_S"] = r.S_sigma_S;
    j["S_sigma_E"] = r.S_sigma_E;
    j["S_sigma_SE"] = r.S_sigma_SE;
    j["holevo_chi"] = r.holevo_chi;
    j["accessible_info_estimate"] = r.accessible_info_estimate;
    j["heuristic_info"] = r.heuristic_info;
    j["jain"] = optional_number(r.jain);
    j["ree_bracket_low"] = optional_number(r.ree_bracket_low);
    j["ree_bracket_high"] = optional_number(r.ree_bracket_high);
    j["ppt"] = r.ppt ? json(*r.ppt) : json(nullptr);
    j["povm_strategy"] = to_string(r.strategy);
    j["povm_origin"] = r.povm_origin;
    json chain = json::array();
    for (const auto& c : r.chain) {
        chain.push_back({{"name", c.name}, {"applicable", c.applicable}, {"ok", c.ok}, {"slack", c.slack}});
    }
    j["chain"] = std::move(chain);
    j["chain_ok"] = r.chain_ok();
    return j;
}

BoundReport report_from_json(const json& j) {
    return schema_guard(
        [&] {
            BoundReport r;
            r.t = j.at("t").get<double>();
            r.d_S = j.at("d_S").get<Eigen::Index>();
            r.d_E = j.at("d_E").get<Eigen::Index>();
            r.C_r_initial = j.at("C_r_initial").get<double>();
            r.C_r_final = j.at("C_r_final").get<double>();
            r.H_I = j.at("H_I").get<double>();
            r.H_I_given_M = j.at("H_I_given_M").get<double>();
            r.p = read_optional(j, "p");
            r.fidelity_B = read_optional(j, "fidelity_B");
            r.lower_general = j.at("lower_general").get<double>();
            r.lower_qubit = read_optional(j, "lower_qubit");
            r.lower_clamped = j.at("lower_clamped").get<double>();
            r.neg_cond_entropy = j.at("neg_cond_entropy").get<double>();
            r.mutual_info = j.at("mutual_info").get<double>();
            r.upper = j.at("upper").get<double>();
            r.S_sigma_S = j.at("S_sigma_S").get<double>();
            r.S_sigma_E = j.at("S_sigma_E").get<double>();
            r.S_sigma_SE = j.at("S_sigma_SE").get<double>();
            r.holevo_chi = j.at("holevo_chi").get<double>();
            r.accessible_info_estimate = j.at("accessible_info_estimate").get<double>();
            r.heuristic_info = j.at("heuristic_info").get<double>();
            r.jain = read_optional(j, "jain");
            r.ree_bracket_low = read_optional(j, "ree_bracket_low");
            r.ree_bracket_high = read_optional(j, "ree_bracket_high");
            if (j.contains("ppt") && !j.at("ppt").is_null()) r.ppt = j.at("ppt").get<bool>();
            r.strategy = povm_strategy_from_string(j.at("povm_strategy").get<std::string>());
            r.povm_origin = j.at("povm_origin").get<std::string>();
            for (const auto& c : j.at("chain")) {
                r.chain.push_back({c.at("name").get<std::string>(), c.at("applicable").get<bool>(),
                                   c.at("ok").get<bool>(), c.at("slack").get<double>()});
            }
            return r;
        },
        "bound report");
}

const std::vector<std::string>& report_csv_columns() {
    static const std::vector<std::string> columns = {
        "schema_version", "t", "d_S", "d_E", "C_r_initial", "C_r_final", "H_I", "H_I_given_M", "p", "fidelity_B",
        "lower_general", "lower_qubit", "lower_clamped", "neg_cond_entropy", "mutual_info", "upper", "S_sigma_S",
        "S_sigma_E", "S_sigma_SE", "holevo_chi", "accessible_info_estimate", "heuristic_info", "jain",
        "ree_bracket_low", "ree_bracket_high", "ppt", "povm_strategy", "povm_origin", "chain_ok", "failed_checks"};
    return columns;
}

std::string report_csv_header() {
    std::string out;
    for (const auto& c : report_csv_columns()) out += (out.empty() ? "" : ",") + c;
    return out;
}

std::string report_csv_row(const BoundReport& r) {
    std::string failed;
    for (const auto& name : r.failures()) failed += (failed.empty() ? "" : ";") + name;
    const std::vector<std::string> cells = {std::to_string(kSchemaVersion),
                                            format_double(r.t),
                                            std::to_string(r.d_S),
                                            std::to_string(r.d_E),
                                            format_double(r.C_r_initial),
                                            format_double(r.C_r_final),
                                            format_double(r.H_I),
                                            format_double(r.H_I_given_M),
                                            csv_optional(r.p),
                                            csv_optional(r.fidelity_B),
                                            format_double(r.lower_general),
                                            csv_optional(r.lower_qubit),
                                            format_double(r.lower_clamped),
                                            format_double(r.neg_cond_entropy),
                                            format_double(r.mutual_info),
                                            format_double(r.upper),
                                            format_double(r.S_sigma_S),
                                            format_double(r.S_sigma_E),
                                            format_double(r.S_sigma_SE),
                                            format_double(r.holevo_chi),
                                            format_double(r.accessible_info_estimate),
                                            format_double(r.heuristic_info),
                                            csv_optional(r.jain),
                                            csv_optional(r.ree_bracket_low),
                                            csv_optional(r.ree_bracket_high),
                                            r.ppt ? (*r.ppt ? "true" : "false") : "",
                                            to_string(r.strategy),
                                            r.povm_origin,
                                            r.chain_ok() ? "true" : "false",
                                            failed};
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
    return out;
}

void write_reports(const std::filesystem::path& json_path, const std::filesystem::path& csv_path,
                   const std::vector<BoundReport>& reports) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "bound_reports";
    j["reports"] = json::array();
    for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
    write_text_file(json_path, j.dump(2) + "\n");
    std::string csv = report_csv_header() + "\n";
    for (const auto& r : reports) csv += report_csv_row(r) + "\n";
    write_text_file(csv_path, csv);
}

std::vector<BoundReport> read_reports_json(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    require_schema_version(j, "bound reports");
    std::vector<BoundReport> out;
    for (const auto& r : field(j, "reports")) out.push_back(report_from_json(r));
    return out;
}

json povm_to_json(const PovmX& m) {
    json elements = json::array();
    for (const auto& e : m.elements()) elements.push_back(matrix_to_json(e));
    return {{"schema_version", kSchemaVersion}, {"kind", "povm"}, {"elements", std::move(elements)}};
}

PovmX povm_from_json(const json& j) {
    return schema_guard(
        [&] {
            require_schema_version(j, "povm");
            std::vector<MatrixXc> elements;
            const json& list = field(j, "elements");
            if (!list.is_array() || list.empty()) throw SchemaError("'elements' must be a non-empty array");
            for (std::size_t k = 0; k < list.size(); ++k) {
                elements.push_back(matrix_from_json(list[k], "elements[" + std::to_string(k) + "]"));
            }
            return PovmX(std::move(elements));
        },
        "povm");
}

json ansatz_to_json(const SeparableAnsatz& a) {
    json terms = json::array();
    for (std::size_t k = 0; k < a.weights.size(); ++k) {
        terms.push_back({{"weight", a.weights[k]},
                         {"system", matrix_to_json(a.factors[k].first)},
                         {"environment", matrix_to_json(a.factors[k].second)}});
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "separable_ansatz"},
            {"dims", a.dims},
            {"blend", a.blend},
            {"terms", std::move(terms)}};
}

SeparableAnsatz ansatz_from_json(const json& j) {
    return schema_guard(
        [&] {
            require_schema_version(j, "ansatz");
            SeparableAnsatz a;
            a.dims = field(j, "dims").get<Dims>();
            a.blend = number(field(j, "blend"), "blend");
            for (const auto& t : field(j, "terms")) {
                a.weights.push_back(number(field(t, "weight"), "weight"));
                a.factors.emplace_back(matrix_from_json(field(t, "system"), "system").col(0),
                                       matrix_from_json(field(t, "environment"), "environment").col(0));
            }
            a.validate();
            return a;
        },
        "ansatz");
}

std::string sweep_csv_row(const SpinBosonParams& p, const CurvePoint& c) {
    return format_double(p.s) + "," + format_double(p.t_over_lambda()) + "," + format_double(p.alpha) + "," +
           format_double(c.lambda_t) + "," + format_double(std::exp(c.ln_b_vac)) + "," +
           format_double(std::exp(c.ln_b_th)) + "," + format_double(c.b) + "," + format_double(c.raw) + "," +
           format_double(c.clamped);
}

}  // namespace dephent
