#include "clonesim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace clonesim {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& node, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : node.items()) {
        bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw ConfigError(join(path, key), "unknown key");
    }
}

double number(const json& node, const std::string& path) {
    if (!node.is_number()) throw ConfigError(path, "expected a number");
    double v = node.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

std::uint64_t count_value(const json& node, const std::string& path) {
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer()) {
        std::int64_t v = node.get<std::int64_t>();
        if (v < 0) throw ConfigError(path, "must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    if (node.is_number_float()) {
        double v = node.get<double>();
        if (v >= 0.0 && v < 1.8e19 && std::floor(v) == v) return static_cast<std::uint64_t>(v);
    }
    throw ConfigError(path, "expected a non-negative integer");
}

std::string text(const json& node, const std::string& path) {
    if (!node.is_string()) throw ConfigError(path, "expected a string");
    return node.get<std::string>();
}

void check_units(const json& node, const std::string& path) {
    if (!node.contains("units")) return;
    std::string u = text(node.at("units"), join(path, "units"));
    if (u != "rad" && u != "radians") throw ConfigError(join(path, "units"), "angles are radians only, got '" + u + "'");
}

std::array<double, 2> pair_of(const json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 2) throw ConfigError(path, "expected a two-element array");
    return {number(node[0], path + "[0]"), number(node[1], path + "[1]")};
}

void set_if(const json& node, const std::string& path, const char* key, double& dst) {
    if (node.contains(key)) dst = number(node.at(key), join(path, key));
}

int sign_of(const json& node, const std::string& path) {
    double s = number(node, path);
    if (s != 1.0 && s != -1.0) throw ConfigError(path, "must be +1 or -1");
    return static_cast<int>(s);
}

// ParameterError text already starts with "field: ".
ConfigError from_parameter(const std::string& path, const ParameterError& e) {
    std::string msg = e.what();
    const std::string prefix = e.field() + ": ";
    if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
    return ConfigError(join(path, e.field()), msg);
}

double partner(double r) { return std::sqrt(std::max(0.0, 1.0 - r * r)); }

ClonerParams parse_model(const json& node) {
    const std::string path = "model";
    require_object(node, path);
    if (!node.contains("variant")) throw ConfigError("model.variant", "missing");
    const std::string variant = text(node.at("variant"), "model.variant");
    check_units(node, path);
    ClonerParams model;
    if (variant == "SpecialBS") {
        reject_unknown(node, path, {"variant", "units", "R0", "R1", "sign", "plate"});
        SpecialBsParams p = ideal_special_bs();
        set_if(node, path, "R0", p.R0);
        if (node.contains("R1")) p.R1 = number(node.at("R1"), "model.R1");
        if (node.contains("sign")) p.sign = sign_of(node.at("sign"), "model.sign");
        if (node.contains("plate")) p.plate = pair_of(node.at("plate"), "model.plate");
        model = p;
    } else if (variant == "MachZehnder") {
        reject_unknown(node, path, {"variant", "units", "theta_V", "theta_H", "residual_phase_offsets"});
        MachZehnderParams p = ideal_mach_zehnder();
        set_if(node, path, "theta_V", p.theta_V);
        set_if(node, path, "theta_H", p.theta_H);
        if (node.contains("residual_phase_offsets")) {
            p.residual_phase_offsets = pair_of(node.at("residual_phase_offsets"), "model.residual_phase_offsets");
        }
        model = p;
    } else if (variant == "Hybrid") {
        reject_unknown(node, path, {"variant", "units", "r", "t", "r0", "t0", "r1", "t1", "eta0", "eta1", "nu0", "nu1"});
        HybridParams p = ideal_hybrid();
        auto amp_pair = [&](const char* rk, const char* tk, double& r, double& t) {
            if (node.contains(rk)) {
                r = number(node.at(rk), join(path, rk));
                t = partner(r);
            }
            set_if(node, path, tk, t);
        };
        amp_pair("r", "t", p.r, p.t);
        amp_pair("r0", "t0", p.r0, p.t0);
        amp_pair("r1", "t1", p.r1, p.t1);
        set_if(node, path, "eta0", p.eta0);
        set_if(node, path, "eta1", p.eta1);
        set_if(node, path, "nu0", p.nu0);
        set_if(node, path, "nu1", p.nu1);
        model = p;
    } else if (variant == "Fiber") {
        reject_unknown(node, path,
                       {"variant", "units", "R_vrc0", "R_vrc1", "sign", "analysis_phases", "detector_R", "phase_drift"});
        FiberParams p = ideal_fiber();
        set_if(node, path, "R_vrc0", p.R_vrc0);
        set_if(node, path, "R_vrc1", p.R_vrc1);
        if (node.contains("sign")) p.sign = sign_of(node.at("sign"), "model.sign");
        if (node.contains("analysis_phases") && !node.at("analysis_phases").is_null()) {
            p.analysis_phases = pair_of(node.at("analysis_phases"), "model.analysis_phases");
        }
        if (node.contains("detector_R")) p.detector_R = pair_of(node.at("detector_R"), "model.detector_R");
        set_if(node, path, "phase_drift", p.phase_drift);
        model = p;
    } else {
        throw ConfigError("model.variant", "unknown variant '" + variant + "'");
    }
    try {
        validate(model);
    } catch (const ParameterError& e) {
        throw from_parameter(path, e);
    }
    return model;
}

NoiseConfig parse_noise(const json& node) {
    require_object(node, "noise");
    reject_unknown(node, "noise", {"overlap_M", "phase_jitter_sigma", "jitter_reset_period", "average_samples", "units"});
    check_units(node, "noise");
    NoiseConfig n;
    set_if(node, "noise", "overlap_M", n.overlap_M);
    set_if(node, "noise", "phase_jitter_sigma", n.phase_jitter_sigma);
    if (node.contains("jitter_reset_period")) {
        n.jitter_reset_period = count_value(node.at("jitter_reset_period"), "noise.jitter_reset_period");
    }
    if (node.contains("average_samples")) {
        n.average_samples = count_value(node.at("average_samples"), "noise.average_samples");
    }
    try {
        n.validate();
    } catch (const ParameterError& e) {
        throw from_parameter("noise", e);
    }
    return n;
}

Qubit make_qubit(double theta, double phi, const std::string& path) {
    try {
        return Qubit(theta, phi);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

Qubit parse_input(const json& node) {
    require_object(node, "input");
    reject_unknown(node, "input", {"theta", "phi", "units"});
    check_units(node, "input");
    double theta = Qubit::kHalfPi;
    double phi = 0.0;
    set_if(node, "input", "theta", theta);
    set_if(node, "input", "phi", phi);
    return make_qubit(theta, phi, "input.theta");
}

std::vector<double> parse_axis(const json& node, const std::string& path) {
    std::vector<double> out;
    if (node.is_number()) {
        out.push_back(number(node, path));
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
    } else if (node.is_object()) {
        reject_unknown(node, path, {"start", "stop", "count", "endpoint"});
        for (const char* k : {"start", "stop", "count"}) {
            if (!node.contains(k)) throw ConfigError(join(path, k), "missing");
        }
        double start = number(node.at("start"), join(path, "start"));
        double stop = number(node.at("stop"), join(path, "stop"));
        std::uint64_t count = count_value(node.at("count"), join(path, "count"));
        bool endpoint = true;
        if (node.contains("endpoint")) {
            if (!node.at("endpoint").is_boolean()) throw ConfigError(join(path, "endpoint"), "expected a boolean");
            endpoint = node.at("endpoint").get<bool>();
        }
        if (count > 1000000) throw ConfigError(join(path, "count"), "at most 1000000 points");
        double div = endpoint ? static_cast<double>(count) - 1.0 : static_cast<double>(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            out.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / div);
        }
    } else {
        throw ConfigError(path, "expected a number, a list or {start, stop, count}");
    }
    if (out.empty()) throw ConfigError(path, "empty sweep");
    return out;
}

SweepSpec parse_sweep(const json& node) {
    require_object(node, "sweep");
    reject_unknown(node, "sweep", {"theta", "phi", "units"});
    check_units(node, "sweep");
    SweepSpec s;
    s.theta = node.contains("theta") ? parse_axis(node.at("theta"), "sweep.theta") : std::vector<double>{Qubit::kHalfPi};
    s.phi = node.contains("phi") ? parse_axis(node.at("phi"), "sweep.phi") : std::vector<double>{0.0};
    for (std::size_t i = 0; i < s.theta.size(); ++i) make_qubit(s.theta[i], 0.0, "sweep.theta[" + std::to_string(i) + "]");
    return s;
}

DetectorBank parse_detectors(const json& node) {
    const std::string path = "counting.detectors";
    DetectorBank d;
    if (node.is_number()) {
        d = DetectorBank::uniform(number(node, path));
    } else {
        require_object(node, path);
        reject_unknown(node, path, {"eta_1p", "eta_1m", "eta_2p", "eta_2m"});
        set_if(node, path, "eta_1p", d.eta_1p);
        set_if(node, path, "eta_1m", d.eta_1m);
        set_if(node, path, "eta_2p", d.eta_2p);
        set_if(node, path, "eta_2m", d.eta_2m);
    }
    try {
        d.validate();
    } catch (const ParameterError& e) {
        throw from_parameter(path, e);
    }
    return d;
}

CountingSpec parse_counting(const json& node, std::optional<std::uint64_t>& seed) {
    require_object(node, "counting");
    reject_unknown(node, "counting", {"n_pairs", "detectors", "seed", "balance"});
    if (!node.contains("n_pairs")) throw ConfigError("counting.n_pairs", "missing");
    CountingSpec c;
    c.n_pairs = count_value(node.at("n_pairs"), "counting.n_pairs");
    if (c.n_pairs == 0) throw ConfigError("counting.n_pairs", "must be >= 1");
    if (node.contains("detectors")) c.detectors = parse_detectors(node.at("detectors"));
    if (node.contains("seed")) seed = count_value(node.at("seed"), "counting.seed");
    if (node.contains("balance") && !node.at("balance").is_null()) {
        try {
            c.balance = parse_balance_method(text(node.at("balance"), "counting.balance"));
        } catch (const ParameterError& e) {
            throw ConfigError("counting.balance", e.what());
        }
        if (*c.balance == BalanceMethod::basis_swap && c.n_pairs < 4) {
            throw ConfigError("counting.n_pairs", "basis_swap needs at least 4 pairs");
        }
    }
    return c;
}

OptimizeSpec parse_optimize(const json& node, const ClonerParams& model) {
    require_object(node, "optimize");
    reject_unknown(node, "optimize", {"objective", "free"});
    OptimizeSpec o;
    if (node.contains("objective")) {
        try {
            o.objective = parse_objective(text(node.at("objective"), "optimize.objective"));
        } catch (const ParameterError& e) {
            throw ConfigError("optimize.objective", e.what());
        }
    }
    if (!node.contains("free")) throw ConfigError("optimize.free", "missing");
    const json& free = node.at("free");
    require_object(free, "optimize.free");
    if (free.empty()) throw ConfigError("optimize.free", "at least one free parameter is required");
    const auto names = parameter_names(model);
    for (const auto& [name, range] : free.items()) {
        const std::string path = "optimize.free." + name;
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw ConfigError(path, "not a tunable parameter of " + std::string(variant_name(model)));
        }
        auto [lo, hi] = pair_of(range, path);
        if (!(lo < hi)) throw ConfigError(path, "empty search interval");
        o.free.push_back({name, lo, hi});
    }
    return o;
}

OutputSpec parse_output(const json& node) {
    require_object(node, "output");
    reject_unknown(node, "output", {"format", "path"});
    OutputSpec o;
    if (node.contains("format")) o.format = parse_format(text(node.at("format"), "output.format"));
    if (node.contains("path")) o.path = text(node.at("path"), "output.path");
    return o;
}

double nan_if_missing(const std::optional<FidelityEstimate>& e, double FidelityEstimate::*field) {
    return e ? (*e).*field : kNaN;
}

CoincidenceRecord counts_for(const ExperimentConfig& config, const Qubit& q, std::uint64_t row_seed) {
    return simulate_counts(config.model, config.noise, q, config.counting->n_pairs, config.counting->detectors,
                           row_seed, config.workers);
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("output.format", "expected csv or json, got '" + name + "'");
}

ExperimentConfig parse_config(const json& doc) {
    require_object(doc, "");
    reject_unknown(doc, "",
                   {"label", "model", "noise", "input", "sweep", "counting", "optimize", "output", "seed", "workers",
                    "units"});
    check_units(doc, "");
    ExperimentConfig c;
    if (!doc.contains("model")) throw ConfigError("model", "missing");
    c.model = parse_model(doc.at("model"));
    c.label = doc.contains("label") ? text(doc.at("label"), "label") : std::string(variant_name(c.model));
    if (c.label.empty()) throw ConfigError("label", "must not be empty");
    if (c.label.find_first_of(",\"\n\r") != std::string::npos) {
        throw ConfigError("label", "must not contain commas, quotes or line breaks");
    }
    if (doc.contains("noise")) c.noise = parse_noise(doc.at("noise"));

    const bool has_input = doc.contains("input");
    const bool has_sweep = doc.contains("sweep");
    if (has_input && has_sweep) throw ConfigError("input", "give either input or sweep, not both");
    if (has_input) c.input = parse_input(doc.at("input"));
    if (has_sweep) c.sweep = parse_sweep(doc.at("sweep"));
    if (!has_input && !has_sweep && !doc.contains("optimize")) throw ConfigError("input", "missing (or give a sweep)");

    std::optional<std::uint64_t> counting_seed;
    if (doc.contains("seed")) c.seed = count_value(doc.at("seed"), "seed");
    if (doc.contains("counting")) c.counting = parse_counting(doc.at("counting"), counting_seed);
    if (counting_seed) c.seed = *counting_seed;
    if (doc.contains("workers")) {
        std::uint64_t w = count_value(doc.at("workers"), "workers");
        if (w == 0 || w > 1024) throw ConfigError("workers", "must lie in [1, 1024]");
        c.workers = static_cast<unsigned>(w);
    }
    if (doc.contains("optimize")) c.optimize = parse_optimize(doc.at("optimize"), c.model);
    if (doc.contains("output")) c.output = parse_output(doc.at("output"));
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed config '" + path.string() + "': " + e.what());
    }
    return parse_config(doc);
}

std::vector<Qubit> inputs_of(const ExperimentConfig& config) {
    if (config.input) return {*config.input};
    if (!config.sweep) return {Qubit::equatorial(0.0)};
    std::vector<Qubit> out;
    out.reserve(config.sweep->theta.size() * config.sweep->phi.size());
    for (double t : config.sweep->theta) {
        for (double p : config.sweep->phi) out.emplace_back(t, p);
    }
    return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    const auto inputs = inputs_of(config);
    std::vector<ResultRow> rows;
    rows.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const Qubit& q = inputs[i];
        const std::uint64_t row_seed = derive_seed(config.seed, i);
        CloneReport rep = evaluate(config.model, config.noise, q, row_seed);
        ResultRow row{q.theta(), q.phi(), rep.F1, rep.F2, rep.P_succ, std::nullopt};
        if (config.counting) {
            CoincidenceRecord rec = counts_for(config, q, row_seed);
            std::optional<FidelityEstimate> est;
            if (config.counting->balance) {
                MeasurementSetup setup{config.model, config.noise, q, config.counting->n_pairs, row_seed, config.workers};
                est = balance_detectors(*config.counting->balance, setup, config.counting->detectors, rec);
            } else {
                est = fidelity_from_counts(rec);
            }
            row.counts = CountColumns{rec.c_pp,
                                      rec.c_pm,
                                      rec.c_mp,
                                      rec.c_mm,
                                      nan_if_missing(est, &FidelityEstimate::F1),
                                      nan_if_missing(est, &FidelityEstimate::F2),
                                      success_probability_estimate(rec)};
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ResultRow> sweep_phase(const ExperimentConfig& config) {
    if (!config.sweep) throw ConfigError("sweep", "the sweep command needs a sweep section");
    if (config.sweep->phi.empty()) throw ConfigError("sweep.phi", "empty sweep");
    return run_experiment(config);
}

std::vector<ResultRow> run_montecarlo(const ExperimentConfig& config) {
    if (!config.counting) throw ConfigError("counting", "the montecarlo command needs a counting section");
    return run_experiment(config);
}

std::vector<CompareRow> compare(const std::vector<ExperimentConfig>& configs) {
    if (configs.size() < 2) throw ConfigError("", "compare needs at least two configs");
    std::set<std::string> labels;
    for (const auto& c : configs) {
        if (!labels.insert(c.label).second) throw ConfigError("label", "duplicate label '" + c.label + "'");
    }
    std::vector<CompareRow> out;
    for (const auto& c : configs) {
        const auto rows = run_experiment(c);
        CompareRow r{c.label, std::string(variant_name(c.model)), 0.0, 0.0, 0.0, 0.0};
        std::uint64_t coincidences = 0;
        std::uint64_t pairs = 0;
        for (const auto& row : rows) {
            r.F1 += row.F1;
            r.F2 += row.F2;
            r.P_succ += row.P_succ;
            if (row.counts) {
                coincidences += row.counts->c_pp + row.counts->c_pm + row.counts->c_mp + row.counts->c_mm;
                pairs += c.counting->n_pairs;
            }
        }
        const double n = static_cast<double>(rows.size());
        r.F1 /= n;
        r.F2 /= n;
        r.P_succ /= n;
        r.rate_proxy = pairs > 0 ? static_cast<double>(coincidences) / static_cast<double>(pairs) : r.P_succ;
        out.push_back(r);
    }
    return out;
}

OptimizationResult run_optimize(const ExperimentConfig& config) {
    if (!config.optimize) throw ConfigError("optimize", "the optimize command needs an optimize section");
    try {
        return optimize_symmetry(config.model, config.optimize->free, config.optimize->objective, config.noise);
    } catch (const ParameterError& e) {
        throw from_parameter("optimize", e);
    }
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

double rounded(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

namespace {

const char* kBaseHeader = "theta,phi,F1,F2,P_succ";
const char* kCountHeader = ",C_pp,C_pm,C_mp,C_mm,F1_hat,F2_hat,P_hat";

ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return rounded(v);
}

double from_json_number(const ordered_json& v) { return v.is_null() ? kNaN : v.get<double>(); }

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& s) {
    if (s == "nan") return kNaN;
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::string json_text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    const bool counted = std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.counts.has_value(); });
    std::string out = kBaseHeader;
    if (counted) out += kCountHeader;
    out += "\n";
    for (const auto& r : rows) {
        out += format_number(r.theta) + "," + format_number(r.phi) + "," + format_number(r.F1) + "," +
               format_number(r.F2) + "," + format_number(r.P_succ);
        if (counted) {
            const CountColumns c = r.counts.value_or(CountColumns{0, 0, 0, 0, kNaN, kNaN, kNaN});
            out += "," + std::to_string(c.c_pp) + "," + std::to_string(c.c_pm) + "," + std::to_string(c.c_mp) + "," +
                   std::to_string(c.c_mm) + "," + format_number(c.F1_hat) + "," + format_number(c.F2_hat) + "," +
                   format_number(c.P_hat);
        }
        out += "\n";
    }
    return out;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
    ordered_json doc = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json o;
        o["theta"] = json_number(r.theta);
        o["phi"] = json_number(r.phi);
        o["F1"] = json_number(r.F1);
        o["F2"] = json_number(r.F2);
        o["P_succ"] = json_number(r.P_succ);
        if (r.counts) {
            o["C_pp"] = r.counts->c_pp;
            o["C_pm"] = r.counts->c_pm;
            o["C_mp"] = r.counts->c_mp;
            o["C_mm"] = r.counts->c_mm;
            o["F1_hat"] = json_number(r.counts->F1_hat);
            o["F2_hat"] = json_number(r.counts->F2_hat);
            o["P_hat"] = json_number(r.counts->P_hat);
        }
        doc.push_back(std::move(o));
    }
    return json_text(doc);
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("", "empty CSV");
    const bool counted = line == std::string(kBaseHeader) + kCountHeader;
    if (!counted && line != kBaseHeader) throw ConfigError("", "unexpected CSV header '" + line + "'");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != (counted ? 12u : 5u)) throw ConfigError("", "malformed CSV row '" + line + "'");
        try {
            ResultRow r{parse_cell(cells[0]), parse_cell(cells[1]), parse_cell(cells[2]), parse_cell(cells[3]),
                        parse_cell(cells[4]), std::nullopt};
            if (counted) {
                r.counts = CountColumns{std::stoull(cells[5]),   std::stoull(cells[6]),   std::stoull(cells[7]),
                                        std::stoull(cells[8]),   parse_cell(cells[9]),    parse_cell(cells[10]),
                                        parse_cell(cells[11])};
            }
            rows.push_back(r);
        } catch (const std::logic_error& e) {
            throw ConfigError("", "malformed CSV row '" + line + "': " + e.what());
        }
    }
    return rows;
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ConfigError("", "expected a JSON array of rows");
    std::vector<ResultRow> rows;
    try {
        for (const auto& o : doc) {
            ResultRow r{from_json_number(o.at("theta")), from_json_number(o.at("phi")), from_json_number(o.at("F1")),
                        from_json_number(o.at("F2")),    from_json_number(o.at("P_succ")), std::nullopt};
            if (o.contains("C_pp")) {
                r.counts = CountColumns{o.at("C_pp").get<std::uint64_t>(),  o.at("C_pm").get<std::uint64_t>(),
                                        o.at("C_mp").get<std::uint64_t>(),  o.at("C_mm").get<std::uint64_t>(),
                                        from_json_number(o.at("F1_hat")), from_json_number(o.at("F2_hat")),
                                        from_json_number(o.at("P_hat"))};
            }
            rows.push_back(r);
        }
    } catch (const ordered_json::exception& e) {
        throw ConfigError("", std::string("malformed JSON row: ") + e.what());
    }
    return rows;
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
    std::string out = "label,variant,F1,F2,P_succ,rate_proxy\n";
    for (const auto& r : rows) {
        out += r.label + "," + r.variant + "," + format_number(r.F1) + "," + format_number(r.F2) + "," +
               format_number(r.P_succ) + "," + format_number(r.rate_proxy) + "\n";
    }
    return out;
}

std::string compare_to_json(const std::vector<CompareRow>& rows) {
    ordered_json doc = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json o;
        o["label"] = r.label;
        o["variant"] = r.variant;
        o["F1"] = json_number(r.F1);
        o["F2"] = json_number(r.F2);
        o["P_succ"] = json_number(r.P_succ);
        o["rate_proxy"] = json_number(r.rate_proxy);
        doc.push_back(std::move(o));
    }
    return json_text(doc);
}

std::string optimization_to_csv(const OptimizationResult& result) {
    const auto names = parameter_names(result.params);
    std::string header = "variant,objective,objective_value,best_grid_value,F1,F2,P_succ,evaluations";
    std::string row = std::string(variant_name(result.params)) + "," + std::string(objective_name(result.objective)) +
                      "," + format_number(result.objective_value) + "," + format_number(result.best_grid_value) + "," +
                      format_number(result.F1) + "," + format_number(result.F2) + "," + format_number(result.P_succ) +
                      "," + std::to_string(result.evaluations);
    for (const auto& n : names) {
        header += "," + n;
        row += "," + format_number(get_parameter(result.params, n));
    }
    return header + "\n" + row + "\n";
}

std::string optimization_to_json(const OptimizationResult& result) {
    ordered_json o;
    o["variant"] = std::string(variant_name(result.params));
    o["objective"] = std::string(objective_name(result.objective));
    o["objective_value"] = json_number(result.objective_value);
    o["best_grid_value"] = json_number(result.best_grid_value);
    o["F1"] = json_number(result.F1);
    o["F2"] = json_number(result.F2);
    o["P_succ"] = json_number(result.P_succ);
    o["evaluations"] = result.evaluations;
    ordered_json params = ordered_json::object();
    for (const auto& n : parameter_names(result.params)) params[n] = json_number(get_parameter(result.params, n));
    o["params"] = std::move(params);
    return json_text(ordered_json::array({o}));
}

std::string emit_rows(const std::vector<ResultRow>& rows, OutputFormat format) {
    return format == OutputFormat::csv ? rows_to_csv(rows) : rows_to_json(rows);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output '" + path + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing output '" + path + "'");
}

}  // namespace clonesim
