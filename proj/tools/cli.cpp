#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "geophase/drives.hpp"
#include "geophase/error.hpp"
#include "geophase/gates.hpp"
#include "geophase/io.hpp"
#include "geophase/oracle.hpp"
#include "geophase/robustness.hpp"

namespace geophase::cli {

namespace {

using io::json;

enum class ValueType { number, integer, boolean, text, number_list };

struct OptionSpec {
    std::string key;  // JSON config key
    std::string flag;
    ValueType type;
    std::string help;
};

// Options shared by several commands.
const std::vector<OptionSpec> kOutputOptions = {
    {"format", "--format", ValueType::text, "Output format: json or csv"},
    {"out", "--out", ValueType::text, "Write output to this path instead of stdout"},
};

const std::vector<OptionSpec> kDriveOptions = {
    {"omega_over_delta", "--omega-over-delta", ValueType::number, "Constant drive strength Omega_D/delta"},
    {"delta", "--delta", ValueType::number, "Detuning delta"},
    {"phi_l", "--phi-l", ValueType::number, "Laser phase phi_L"},
    {"periods", "--periods", ValueType::number, "Drive duration in periods 2 pi/|delta|"},
    {"drive", "--drive", ValueType::text, "Drive JSON file (replaces the constant-drive options)"},
    {"duration", "--duration", ValueType::number, "Evaluation time (defaults to the drive duration)"},
    {"conditioner", "--conditioner", ValueType::text, "Spin conditioner: odd-parity-projector, jz or jy"},
    {"samples", "--samples", ValueType::integer, "Quadrature samples per period"},
};

const std::vector<OptionSpec> kOracleOptions = {
    {"n_max", "--n-max", ValueType::integer, "Fock truncation"},
    {"steps", "--steps", ValueType::integer, "Oracle time steps"},
    {"initial_fock", "--initial-fock", ValueType::integer, "Initial oscillator Fock state"},
    {"fixed_n_max", "--fixed-n-max", ValueType::boolean, "Do not raise n_max for large loops"},
    {"leakage_threshold", "--leakage-threshold", ValueType::number, "Allowed population in |n_max>"},
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<OptionSpec> options;
};

std::vector<OptionSpec> concat(std::initializer_list<std::vector<OptionSpec>> parts) {
    std::vector<OptionSpec> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<CommandSpec> command_specs() {
    return {
        {"phase", "Geometric, dynamic and total phase of a drive",
         concat({kDriveOptions, kOracleOptions, kOutputOptions,
                 {{"require_closed", "--require-closed", ValueType::boolean, "Fail unless the loop closes"},
                  {"closure_tolerance", "--closure-tolerance", ValueType::number, "Loop closure tolerance"},
                  {"oracle", "--oracle", ValueType::boolean, "Also run the Fock-space oracle"}}})},
        {"gate", "Two-qubit gate of a drive, phase or conditioner",
         concat({kDriveOptions, kOutputOptions,
                 {{"target_phase", "--target-phase", ValueType::number, "Design a constant drive for this phase"},
                  {"gamma", "--gamma", ValueType::number, "Gate phase (parity) or Jy^2 angle (jy)"},
                  {"gamma0", "--gamma0", ValueType::number, "Phase functional gamma0"},
                  {"correct_to_cz", "--correct-to-cz", ValueType::boolean, "Apply the local CZ correction"},
                  {"closure_tolerance", "--closure-tolerance", ValueType::number, "Loop closure tolerance"}}})},
        {"oracle-verify", "Compare the Fock-space oracle with the analytic phases",
         concat({kDriveOptions, kOracleOptions, kOutputOptions})},
        {"sweep", "Parameter sweeps and robustness studies",
         concat({kOutputOptions,
                 {{"kind", "--kind", ValueType::text, "eta, timing, noncyclic or area"},
                  {"parameter", "--parameter", ValueType::text, "eta sweeps: omega_over_delta, phi_l or delta"},
                  {"grid", "--grid", ValueType::number_list, "Comma-separated grid values"},
                  {"omega_over_delta", "--omega-over-delta", ValueType::number, "Base Omega_D/delta"},
                  {"delta", "--delta", ValueType::number, "Base detuning"},
                  {"phi_l", "--phi-l", ValueType::number, "Base laser phase"},
                  {"samples", "--samples", ValueType::integer, "Quadrature samples per period"},
                  {"oracle", "--oracle", ValueType::boolean, "Add oracle columns"},
                  {"n_max", "--n-max", ValueType::integer, "Fock truncation"},
                  {"steps", "--steps", ValueType::integer, "Oracle time steps"}}})},
        {"design", "Constant drive reaching a target gate phase",
         concat({kOutputOptions,
                 {{"target_phase", "--target-phase", ValueType::number, "Target total phase (negative)"},
                  {"delta", "--delta", ValueType::number, "Detuning (positive)"},
                  {"phi_l", "--phi-l", ValueType::number, "Laser phase"}}})},
    };
}

double parse_number(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ValidationError(what + ": '" + text + "' is not a finite number");
    }
    return value;
}

json convert_flag(const std::string& text, ValueType type, const std::string& flag) {
    switch (type) {
        case ValueType::number:
            return parse_number(text, flag);
        case ValueType::integer: {
            long long value = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                throw ValidationError(flag + ": '" + text + "' is not an integer");
            }
            return value;
        }
        case ValueType::number_list: {
            json list = json::array();
            std::stringstream in(text);
            std::string item;
            while (std::getline(in, item, ',')) {
                if (!item.empty()) list.push_back(parse_number(item, flag));
            }
            return list;
        }
        case ValueType::text:
            return text;
        case ValueType::boolean:
            return true;
    }
    return nullptr;
}

// Merged, schema-checked configuration for one command.
class Config {
public:
    Config(json doc, const std::vector<OptionSpec>& options) : doc_(std::move(doc)) {
        for (const auto& o : options) types_.emplace(o.key, o.type);
        for (const auto& [key, value] : doc_.items()) {
            if (key == "command") continue;
            const auto it = types_.find(key);
            if (it == types_.end()) throw ValidationError("unknown config key '" + key + "'");
            check_type(key, value, it->second);
        }
    }

    bool has(const std::string& key) const { return doc_.contains(key); }
    const json& raw(const std::string& key) const { return doc_.at(key); }

    double number(const std::string& key, double fallback) const {
        return has(key) ? doc_.at(key).get<double>() : fallback;
    }
    std::optional<double> number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return doc_.at(key).get<double>();
    }
    int integer(const std::string& key, int fallback) const {
        return has(key) ? doc_.at(key).get<int>() : fallback;
    }
    bool flag(const std::string& key) const { return has(key) && doc_.at(key).get<bool>(); }
    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? doc_.at(key).get<std::string>() : fallback;
    }
    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        if (has(key)) {
            for (const auto& v : doc_.at(key)) out.push_back(v.get<double>());
        }
        return out;
    }

private:
    static void check_type(const std::string& key, const json& v, ValueType type) {
        bool ok = false;
        switch (type) {
            case ValueType::number:
                ok = v.is_number() && std::isfinite(v.get<double>());
                break;
            case ValueType::integer:
                ok = v.is_number_integer() &&
                     std::abs(v.get<long long>()) <= std::numeric_limits<int>::max();
                break;
            case ValueType::boolean:
                ok = v.is_boolean();
                break;
            case ValueType::text:
                // "drive" may also hold an inline drive document.
                ok = v.is_string() || (key == "drive" && v.is_object());
                break;
            case ValueType::number_list:
                ok = v.is_array();
                if (ok) {
                    for (const auto& x : v) ok = ok && x.is_number();
                }
                break;
        }
        if (!ok) throw ValidationError("config key '" + key + "' has the wrong type");
    }

    json doc_;
    std::map<std::string, ValueType> types_;
};

json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + what + " '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + " '" + path + "' is not valid JSON: " + e.what());
    }
}

int positive_int(const Config& c, const std::string& key, int fallback, int minimum = 1) {
    const int v = c.integer(key, fallback);
    if (v < minimum) throw ValidationError(key + " must be at least " + std::to_string(minimum));
    return v;
}

// ---------------------------------------------------------------------------
// Drive resolution

struct ResolvedDrive {
    DriveProfile drive;
    double tau;
    std::optional<ConstantDriveParams> constant;  // when the drive is a single detuned exponential
    int samples;                                  // total analytic sample budget over [0, tau]
};

std::optional<ConstantDriveParams> as_constant(const DriveProfile& drive) {
    if (drive.segments().size() != 1) return std::nullopt;
    const auto& s = drive.segments().front();
    if (s.kind != DriveSegment::Kind::exponential || s.frequency == 0.0) return std::nullopt;
    return ConstantDriveParams(std::abs(s.amplitude), s.frequency, std::arg(-s.amplitude));
}

ResolvedDrive resolve_drive(const Config& c) {
    static const char* constant_keys[] = {"omega_over_delta", "delta", "phi_l", "periods"};
    std::optional<DriveProfile> drive;
    if (c.has("drive")) {
        for (const char* k : constant_keys) {
            if (c.has(k)) throw ValidationError(std::string("'drive' cannot be combined with '") + k + "'");
        }
        const json& spec = c.raw("drive");
        json doc = spec.is_string() ? read_json_file(spec.get<std::string>(), "drive file") : spec;
        // A design report carries its drive under "drive".
        if (doc.is_object() && doc.value("command", "") == "design" && doc.contains("drive")) doc = doc.at("drive");
        drive = io::drive_from_json(doc);
    } else {
        const double periods = c.number("periods", 1.0);
        if (!(periods > 0.0)) throw ValidationError("periods must be positive");
        const auto params =
            ConstantDriveParams::from_ratio(c.number("omega_over_delta", 0.5), c.number("delta", 1.0),
                                            c.number("phi_l", 0.0));
        drive = DriveProfile::constant(params, periods * params.period());
    }
    if (c.has("conditioner")) drive = drive->with_conditioner(SpinConditioner::from_name(c.text("conditioner", "")));

    const double tau = c.number("duration", drive->total_duration());
    if (!(tau > 0.0) || tau > drive->total_duration() * (1.0 + 1e-12)) {
        throw ValidationError("duration must lie in (0, drive duration]");
    }
    const auto constant = as_constant(*drive);
    const int per_period = positive_int(c, "samples", kDefaultSamplesPerPeriod, 2);
    const double periods = constant ? tau / constant->period() : 1.0;
    const int samples = std::max(2, static_cast<int>(std::ceil(per_period * std::max(1.0, periods))) + 1);
    return {*drive, tau, constant, samples};
}

OracleSettings oracle_settings(const Config& c) {
    OracleSettings s;
    s.n_max = positive_int(c, "n_max", kDefaultNMax, 2);
    s.steps = positive_int(c, "steps", kDefaultOracleSteps, 10);
    s.auto_escalate = !c.flag("fixed_n_max");
    return s;
}

PropagateOptions propagate_options(const Config& c, int columns) {
    PropagateOptions o;
    o.initial_fock = positive_int(c, "initial_fock", 0, 0);
    o.columns = std::max(columns, o.initial_fock + 1);
    o.leakage_threshold = c.number("leakage_threshold", kLeakageThreshold);
    if (!(o.leakage_threshold > 0.0)) throw ValidationError("leakage_threshold must be positive");
    return o;
}

FockPropagation run_oracle(const ResolvedDrive& d, const Config& c) {
    const auto settings = oracle_settings(c);
    const auto opts = propagate_options(c, 1);
    const FockSpace space = choose_fock_space(d.drive, d.tau, settings);
    if (opts.initial_fock >= space.n_max()) throw ValidationError("initial_fock must be below n_max");
    return propagate(d.drive, d.tau, space, settings.steps, opts);
}

json decomposition_row(const PhaseDecomposition& p) { return io::to_json(p); }

json reference_json(const ConstantDriveParams& p, double tau) {
    const double r = p.omega_over_delta();
    const double total = analytic_total_phase(r, p.delta, tau);
    const double dynamic = analytic_dynamic_phase(r, p.delta, tau);
    return io::to_json(decompose(total - dynamic, dynamic));
}

struct Output {
    json doc;
    std::string csv;
};

std::string csv_decomposition(const std::string& label, const PhaseDecomposition& d) {
    return label + "," + io::format_number(d.total) + "," + io::format_number(d.geometric) + "," +
           io::format_number(d.dynamic) + "," + (d.eta ? io::format_number(*d.eta) : std::string()) + "," +
           std::string(phase_class_name(d.classification)) + "\n";
}

std::array<PhaseDecomposition, 4> per_state_phases(const ResolvedDrive& d) {
    const auto betas = d.drive.conditioner().basis_eigenvalues();
    std::array<PhaseDecomposition, 4> out{};
    for (std::size_t s = 0; s < 4; ++s) out[s] = drive_phases(d.drive, d.tau, d.samples, (*betas)[s]);
    return out;
}

// ---------------------------------------------------------------------------
// Commands

Output cmd_phase(const Config& c) {
    const auto d = resolve_drive(c);
    const double tol = c.number("closure_tolerance", 1e-9);
    const double residual = closure_residual(d.drive, d.tau);
    if (c.flag("require_closed") && !(residual <= tol)) {
        std::ostringstream msg;
        msg << "drive does not close: closure residual " << io::format_number(residual) << " exceeds tolerance "
            << io::format_number(tol);
        throw NotClosedError(msg.str(), residual);
    }

    const auto unit = drive_phases(d.drive, d.tau, d.samples, 1.0);
    json doc{{"schema_version", kReportSchemaVersion},
             {"command", "phase"},
             {"conditioner", std::string(d.drive.conditioner().name())},
             {"tau", io::round_sig(d.tau)},
             {"closure_residual", io::round_sig(residual)},
             {"closed", residual <= tol},
             {"gamma0", io::round_sig(gamma0(d.drive, d.tau, d.samples))},
             {"analytic", decomposition_row(unit)}};
    std::string csv = "label,total,geometric,dynamic,eta,classification\n" + csv_decomposition("analytic", unit);

    if (d.constant) {
        doc["reference"] = reference_json(*d.constant, d.tau);
        const double r = d.constant->omega_over_delta();
        const double total = analytic_total_phase(r, d.constant->delta, d.tau);
        const double dynamic = analytic_dynamic_phase(r, d.constant->delta, d.tau);
        csv += csv_decomposition("reference", decompose(total - dynamic, dynamic));
    } else {
        doc["reference"] = nullptr;
    }

    if (d.drive.conditioner().is_diagonal()) {
        const auto states = per_state_phases(d);
        json list = json::array();
        for (std::size_t s = 0; s < 4; ++s) {
            json row = decomposition_row(states[s]);
            row["state"] = std::string(kBasisLabels[s]);
            list.push_back(row);
            csv += csv_decomposition(std::string(kBasisLabels[s]), states[s]);
        }
        doc["states"] = list;
    } else {
        doc["states"] = nullptr;
    }

    if (c.flag("oracle")) {
        const auto prop = run_oracle(d, c);
        doc["oracle"] = io::oracle_report(prop);
        if (d.drive.conditioner().is_diagonal()) {
            const auto phases = oracle_phases(prop);
            for (std::size_t s = 0; s < 4; ++s) {
                csv += csv_decomposition("oracle_" + std::string(kBasisLabels[s]),
                                         decompose(phases.geometric[s], phases.dynamic[s]));
            }
        }
    }
    return {doc, csv};
}

Output gate_output(const TwoQubitGate& gate, json extra) {
    json doc{{"schema_version", kReportSchemaVersion}, {"command", "gate"}, {"gate", io::to_json(gate)}};
    for (auto& [k, v] : extra.items()) doc[k] = v;
    std::string csv = io::gate_to_csv(gate);
    for (const auto& [k, v] : extra.items()) {
        if (v.is_number()) csv += "#" + k + "," + io::format_number(v.get<double>()) + "\n";
        if (v.is_boolean()) csv += "#" + k + "," + (v.get<bool>() ? "true" : "false") + "\n";
        if (v.is_string()) csv += "#" + k + "," + v.get<std::string>() + "\n";
    }
    return {doc, csv};
}

Output cmd_gate(const Config& c) {
    const auto conditioner = SpinConditioner::from_name(c.text("conditioner", "odd-parity-projector"));
    const bool drive_given = c.has("drive") || c.has("omega_over_delta") || c.has("periods");
    const int sources = int(c.has("target_phase")) + int(c.has("gamma")) + int(c.has("gamma0")) + int(drive_given);
    if (sources != 1) {
        throw ValidationError("gate needs exactly one of --target-phase, --gamma, --gamma0 or a drive");
    }

    json extra{{"conditioner", std::string(conditioner.name())}};
    std::optional<TwoQubitGate> gate;

    if (!conditioner.is_diagonal()) {
        if (!(c.has("gamma") || c.has("gamma0"))) {
            throw UnsupportedError("the jy conditioner takes --gamma or --gamma0");
        }
        // A drive with phase functional gamma0 produces exp(+i gamma0 Jy^2).
        const double angle = c.has("gamma") ? *c.number("gamma") : -*c.number("gamma0");
        gate = jy_squared_gate(angle);
        const Matrix4c jy = conditioner.matrix();
        const Matrix4c dense = expm(MatrixXc(std::complex<double>(0.0, -angle) * (jy * jy)));
        extra["jy_angle"] = io::round_sig(angle);
        extra["dense_expm_deviation"] = io::round_sig((gate->matrix() - dense).norm());
        extra["dense_expm_fidelity"] = io::round_sig(gate_fidelity(gate->matrix(), dense));
    } else if (c.has("gamma")) {
        if (conditioner.kind() != ConditionerKind::odd_parity_projector) {
            throw ValidationError("--gamma applies to the parity conditioner; use --gamma0 for jz");
        }
        gate = phase_gate(*c.number("gamma"));
        extra["gamma"] = io::round_sig(*c.number("gamma"));
    } else if (c.has("gamma0")) {
        const auto g = collective_gate_from_gamma0(conditioner, *c.number("gamma0"));
        gate = g.gate;
        extra["gamma0"] = io::round_sig(g.gamma0);
    } else {
        ResolvedDrive d = [&] {
            if (!c.has("target_phase")) return resolve_drive(c);
            const auto params = design_constant_drive(*c.number("target_phase"), c.number("delta", 1.0),
                                                      c.number("phi_l", 0.0));
            const auto drive = DriveProfile::constant(params, params.period(), conditioner);
            const int samples = positive_int(c, "samples", kDefaultSamplesPerPeriod, 2) + 1;
            extra["designed_omega_over_delta"] = io::round_sig(params.omega_over_delta());
            extra["target_phase"] = io::round_sig(*c.number("target_phase"));
            return ResolvedDrive{drive, params.period(), params, samples};
        }();
        const auto g = collective_gate(d.drive, d.tau, conditioner, d.samples, c.number("closure_tolerance", 1e-9));
        gate = g.gate;
        extra["gamma0"] = io::round_sig(g.gamma0);
        extra["closure_residual"] = io::round_sig(g.closure_residual);
    }

    if (c.flag("correct_to_cz")) {
        if (!gate->is_diagonal()) throw UnsupportedError("--correct-to-cz requires a diagonal gate");
        const auto p = gate->diagonal_phases();
        const double theta = -(p[1] - p[0]);
        gate = apply_local_phase_correction(*gate, theta);
        extra["correction_theta"] = io::round_sig(theta);
        extra["fidelity_vs_cz"] = io::round_sig(gate_fidelity(*gate, controlled_z()));
    }
    if (gate->is_diagonal()) extra["nontrivial"] = is_nontrivial(*gate);
    extra["unitarity_defect"] = io::round_sig(unitarity_defect(MatrixXc(gate->matrix())));
    return gate_output(*gate, extra);
}

Output cmd_oracle_verify(const Config& c) {
    const auto d = resolve_drive(c);
    const auto prop = run_oracle(d, c);
    json doc{{"schema_version", kReportSchemaVersion},
             {"command", "oracle-verify"},
             {"conditioner", std::string(d.drive.conditioner().name())},
             {"oracle", io::oracle_report(prop)}};
    std::string csv = "state,oracle_total,oracle_dynamic,oracle_geometric,analytic_total,analytic_dynamic,"
                      "analytic_geometric,deviation\n";

    if (d.drive.conditioner().is_diagonal()) {
        const auto states = per_state_phases(d);
        const auto phases = oracle_phases(prop);
        json rows = json::array();
        double worst = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            const double dev = std::max({std::abs(phases.total[s] - states[s].total),
                                         std::abs(phases.dynamic[s] - states[s].dynamic),
                                         std::abs(phases.geometric[s] - states[s].geometric)});
            worst = std::max(worst, dev);
            rows.push_back(json{{"state", std::string(kBasisLabels[s])},
                                {"analytic", decomposition_row(states[s])},
                                {"deviation", io::round_sig(dev)}});
            csv += std::string(kBasisLabels[s]) + "," + io::format_number(phases.total[s]) + "," +
                   io::format_number(phases.dynamic[s]) + "," + io::format_number(phases.geometric[s]) + "," +
                   io::format_number(states[s].total) + "," + io::format_number(states[s].dynamic) + "," +
                   io::format_number(states[s].geometric) + "," + io::format_number(dev) + "\n";
        }
        doc["comparison"] = rows;
        doc["max_deviation"] = io::round_sig(worst);
        csv += "#max_deviation," + io::format_number(worst) + "\n";
    } else {
        doc["comparison"] = nullptr;
    }

    if (d.constant && d.drive.segments().size() == 1) {
        const auto check = verify_magnus_form(d.drive, d.tau, prop.space, prop.steps);
        doc["magnus"] = io::to_json(check);
        csv += "#magnus_deviation," + io::format_number(check.deviation) + "\n";
    } else {
        doc["magnus"] = nullptr;
    }
    csv += "#leakage," + io::format_number(prop.leakage) + "\n";
    csv += "#unitarity_defect," + io::format_number(prop.unitarity_defect) + "\n";
    return {doc, csv};
}

Output cmd_sweep(const Config& c) {
    const std::string kind = c.text("kind", "eta");
    const auto grid = c.numbers("grid");
    if (grid.empty()) throw ValidationError("sweep grid is empty");
    const auto base = ConstantDriveParams::from_ratio(c.number("omega_over_delta", 0.5), c.number("delta", 1.0),
                                                      c.number("phi_l", 0.0));
    std::optional<OracleSettings> oracle;
    if (c.flag("oracle")) oracle = oracle_settings(c);
    const int samples = positive_int(c, "samples", kDefaultSamplesPerPeriod, 2);

    SweepReport report;
    if (kind == "eta") {
        SweepSpec spec;
        spec.parameter = sweep_parameter_from_name(c.text("parameter", "omega_over_delta"));
        spec.grid = grid;
        spec.base = base;
        spec.oracle = oracle;
        spec.samples_per_period = samples;
        report = eta_invariance_sweep(spec);
    } else if (kind == "timing") {
        report = timing_error_sweep(base, grid, oracle);
    } else if (kind == "noncyclic") {
        std::vector<double> times;
        for (double x : grid) times.push_back(x * base.period());
        report = noncyclic_scan(base, times, oracle, samples);
    } else if (kind == "area") {
        if (oracle) throw UnsupportedError("area studies have no oracle columns");
        report = area_invariance_study(equal_area_loops(base, grid), samples);
    } else {
        throw ValidationError("unknown sweep kind '" + kind + "'");
    }
    return {io::to_json(report), io::sweep_to_csv(report)};
}

Output cmd_design(const Config& c) {
    if (!c.has("target_phase")) throw ValidationError("design needs --target-phase");
    const double target = *c.number("target_phase");
    const auto params = design_constant_drive(target, c.number("delta", 1.0), c.number("phi_l", 0.0));
    const auto drive = DriveProfile::constant(params, params.period());
    const double achieved = analytic_total_phase(params.omega_over_delta(), params.delta, params.period());
    json doc{{"schema_version", kReportSchemaVersion},
             {"command", "design"},
             {"target_phase", io::round_sig(target)},
             {"achieved_phase", io::round_sig(achieved)},
             {"params", io::to_json(params)},
             {"drive", io::drive_to_json(drive)}};
    std::string csv = "name,value\n";
    csv += "target_phase," + io::format_number(target) + "\n";
    csv += "achieved_phase," + io::format_number(achieved) + "\n";
    csv += "omega_d," + io::format_number(params.omega_d) + "\n";
    csv += "delta," + io::format_number(params.delta) + "\n";
    csv += "phi_l," + io::format_number(params.phi_l) + "\n";
    csv += "omega_over_delta," + io::format_number(params.omega_over_delta()) + "\n";
    csv += "period," + io::format_number(params.period()) + "\n";
    return {doc, csv};
}

Output dispatch(const std::string& command, const Config& c) {
    if (command == "phase") return cmd_phase(c);
    if (command == "gate") return cmd_gate(c);
    if (command == "oracle-verify") return cmd_oracle_verify(c);
    if (command == "sweep") return cmd_sweep(c);
    return cmd_design(c);
}

void emit(const Output& result, const Config& c, std::ostream& out) {
    const std::string format = c.text("format", "json");
    std::string text;
    if (format == "json") {
        text = io::dump(result.doc);
    } else if (format == "csv") {
        text = result.csv;
    } else {
        throw ValidationError("unknown format '" + format + "' (expected json or csv)");
    }
    if (!c.has("out")) {
        out << text;
        return;
    }
    const std::string path = c.text("out", "");
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot write '" + path + "'");
    file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geometric and dynamic phases of driven oscillator loops and the resulting two-qubit gates"};
    app.require_subcommand(1);

    const auto specs = command_specs();
    struct Bound {
        const CommandSpec* spec;
        CLI::App* sub;
        std::map<std::string, std::string> text;
        std::map<std::string, bool> flags;
        std::map<std::string, CLI::Option*> options;
        std::string config_path;
    };
    std::vector<std::unique_ptr<Bound>> bound;
    for (const auto& spec : specs) {
        auto b = std::make_unique<Bound>();
        b->spec = &spec;
        b->sub = app.add_subcommand(spec.name, spec.help);
        b->sub->add_option("--config", b->config_path, "JSON config file; flags override its values");
        for (const auto& o : spec.options) {
            if (o.type == ValueType::boolean) {
                b->options[o.key] = b->sub->add_flag(o.flag, b->flags[o.key], o.help);
            } else {
                b->options[o.key] = b->sub->add_option(o.flag, b->text[o.key], o.help);
            }
        }
        bound.push_back(std::move(b));
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    for (const auto& b : bound) {
        if (!b->sub->parsed()) continue;
        const std::string& command = b->spec->name;
        try {
            json doc = json::object();
            if (!b->config_path.empty()) {
                doc = read_json_file(b->config_path, "config file");
                if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
                if (doc.contains("command") && doc.at("command") != command) {
                    throw ValidationError("config file is for command '" + doc.at("command").dump() + "'");
                }
            }
            for (const auto& o : b->spec->options) {
                if (b->options.at(o.key)->count() == 0) continue;
                doc[o.key] = o.type == ValueType::boolean ? json(b->flags.at(o.key))
                                                          : convert_flag(b->text.at(o.key), o.type, o.flag);
            }
            const Config config(doc, b->spec->options);
            emit(dispatch(command, config), config, out);
            return kExitOk;
        } catch (const ValidationError& e) {
            err << "error: " << e.what() << "\n";
            return kExitValidation;
        } catch (const NumericalError& e) {
            err << "numerical error: " << e.what() << "\n";
            return kExitNumerical;
        } catch (const json::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitValidation;
        } catch (const std::exception& e) {
            err << "numerical error: " << e.what() << "\n";
            return kExitNumerical;
        }
    }
    return kExitValidation;
}

}  // namespace geophase::cli
