#include "geophase/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase::io {

namespace {

json number(double x) { return std::isfinite(x) ? json(round_sig(x)) : json(nullptr); }

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

json complex_pair(std::complex<double> z) { return json::array({number(z.real()), number(z.imag())}); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError("missing key '" + key + "' in " + where);
    if (!obj.at(key).is_number()) throw ValidationError("key '" + key + "' in " + where + " must be a number");
    return obj.at(key).get<double>();
}

std::complex<double> require_complex(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError("missing key '" + key + "' in " + where);
    const auto& v = obj.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError("key '" + key + "' in " + where + " must be [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

std::string cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace

double round_sig(double x) {
    if (x == 0.0) return 0.0;  // drop negative zero
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
    return buf;
}

json to_json(const PhaseDecomposition& d) {
    return json{{"total", number(d.total)},
                {"geometric", number(d.geometric)},
                {"dynamic", number(d.dynamic)},
                {"eta", optional_number(d.eta)},
                {"classification", std::string(phase_class_name(d.classification))}};
}

json to_json(const TwoQubitGate& gate) {
    json matrix = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) row.push_back(complex_pair(gate.matrix()(i, j)));
        matrix.push_back(row);
    }
    json basis = json::array();
    for (auto label : kBasisLabels) basis.push_back(std::string(label));
    json doc{{"schema_version", kReportSchemaVersion}, {"basis", basis}, {"matrix", matrix}};
    if (gate.phases()) {
        json phases = json::array();
        for (double p : *gate.phases()) phases.push_back(number(p));
        doc["phases"] = phases;
    } else {
        doc["phases"] = nullptr;
    }
    return doc;
}

json to_json(const ConstantDriveParams& p) {
    return json{{"omega_d", number(p.omega_d)},
                {"delta", number(p.delta)},
                {"phi_l", number(p.phi_l)},
                {"omega_over_delta", number(p.omega_over_delta())},
                {"period", number(p.period())}};
}

json to_json(const SweepReport& report) {
    json meta = json::object();
    for (const auto& [k, v] : report.metadata) meta[k] = v;
    json summary = json::object();
    for (const auto& [k, v] : report.summary) summary[k] = number(v);
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back(json{{"value", number(r.value)},
                            {"total", number(r.total)},
                            {"geometric", number(r.geometric)},
                            {"dynamic", number(r.dynamic)},
                            {"eta", optional_number(r.eta)},
                            {"reference", optional_number(r.reference)},
                            {"phase_error", optional_number(r.phase_error)},
                            {"fidelity", optional_number(r.fidelity)},
                            {"oracle_total", optional_number(r.oracle_total)},
                            {"oracle_dynamic", optional_number(r.oracle_dynamic)},
                            {"oracle_geometric", optional_number(r.oracle_geometric)},
                            {"oracle_eta", optional_number(r.oracle_eta)},
                            {"oracle_deviation", optional_number(r.oracle_deviation)}});
    }
    return json{{"schema_version", kReportSchemaVersion},
                {"kind", report.kind},
                {"parameter", std::string(sweep_parameter_name(report.parameter))},
                {"metadata", meta},
                {"rows", rows},
                {"summary", summary}};
}

json to_json(const MagnusCheck& check) {
    return json{{"deviation", number(check.deviation)},
                {"phase", number(check.phase)},
                {"alpha", complex_pair(check.alpha.value())},
                {"leakage", number(check.leakage)},
                {"block_size", check.block_size}};
}

json oracle_report(const FockPropagation& prop) {
    json states = json::array();
    const std::size_t last = prop.times.size() - 1;
    for (int s = 0; s < 4; ++s) {
        json entry{{"state", std::string(kBasisLabels[static_cast<std::size_t>(s)])}};
        const auto overlap = prop.overlap(s, last);
        entry["overlap"] = complex_pair(overlap);
        try {
            const double total = extract_total_phase(prop, s);
            const double dynamic = prop.dynamic_phase(s, last);
            entry["total"] = number(total);
            entry["dynamic"] = number(dynamic);
            entry["geometric"] = number(total - dynamic);
        } catch (const UndefinedPhaseError&) {
            entry["total"] = nullptr;
            entry["dynamic"] = number(prop.dynamic_phase(s, last));
            entry["geometric"] = nullptr;
        }
        states.push_back(entry);
    }
    return json{{"schema_version", kReportSchemaVersion},
                {"n_max", prop.space.n_max()},
                {"steps", prop.steps},
                {"tau", number(prop.tau)},
                {"initial_fock", prop.initial_fock},
                {"leakage", number(prop.leakage)},
                {"unitarity_defect", number(prop.unitarity_defect)},
                {"states", states}};
}

json drive_to_json(const DriveProfile& drive) {
    json segments = json::array();
    for (const auto& s : drive.segments()) {
        if (s.kind == DriveSegment::Kind::custom) {
            throw UnsupportedError("custom drive segments cannot be serialized");
        }
        json seg{{"duration", number(s.duration)}, {"amplitude", complex_pair(s.amplitude)}};
        if (s.frequency == 0.0) {
            seg["kind"] = "constant";
        } else {
            seg["kind"] = "exponential";
            seg["frequency"] = number(s.frequency);
        }
        segments.push_back(seg);
    }
    return json{{"schema_version", kReportSchemaVersion},
                {"conditioner", std::string(drive.conditioner().name())},
                {"segments", segments}};
}

DriveProfile drive_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("drive document must be a JSON object");
    reject_unknown_keys(doc, {"schema_version", "conditioner", "segments", "constant"}, "drive");
    if (doc.contains("schema_version") && doc.at("schema_version") != kReportSchemaVersion) {
        throw ValidationError("unsupported drive schema_version");
    }
    const auto conditioner = SpinConditioner::from_name(
        doc.contains("conditioner") ? doc.at("conditioner").get<std::string>() : "odd-parity-projector");
    if (doc.contains("segments") == doc.contains("constant")) {
        throw ValidationError("drive needs exactly one of 'segments' or 'constant'");
    }
    if (doc.contains("constant")) {
        const auto& c = doc.at("constant");
        if (!c.is_object()) throw ValidationError("'constant' must be an object");
        reject_unknown_keys(c, {"omega_over_delta", "delta", "phi_l", "periods"}, "constant drive");
        const double ratio = require_number(c, "omega_over_delta", "constant drive");
        const double delta = c.contains("delta") ? require_number(c, "delta", "constant drive") : 1.0;
        const double phi = c.contains("phi_l") ? require_number(c, "phi_l", "constant drive") : 0.0;
        const double periods = c.contains("periods") ? require_number(c, "periods", "constant drive") : 1.0;
        const auto params = ConstantDriveParams::from_ratio(ratio, delta, phi);
        return DriveProfile::constant(params, periods * params.period(), conditioner);
    }
    const auto& segs = doc.at("segments");
    if (!segs.is_array() || segs.empty()) throw ValidationError("'segments' must be a nonempty array");
    std::vector<DriveSegment> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        const std::string where = "segment " + std::to_string(i);
        if (!s.is_object()) throw ValidationError(where + " must be an object");
        reject_unknown_keys(s, {"kind", "duration", "amplitude", "frequency"}, where);
        const std::string kind = s.contains("kind") ? s.at("kind").get<std::string>() : "constant";
        const double duration = require_number(s, "duration", where);
        const auto amplitude = require_complex(s, "amplitude", where);
        if (kind == "constant") {
            if (s.contains("frequency")) throw ValidationError(where + ": constant segments take no frequency");
            out.push_back(DriveSegment::constant(duration, amplitude));
        } else if (kind == "exponential") {
            out.push_back(DriveSegment::exponential(duration, amplitude, require_number(s, "frequency", where)));
        } else {
            throw ValidationError(where + ": unknown kind '" + kind + "'");
        }
    }
    return DriveProfile(std::move(out), conditioner);
}

std::string sweep_to_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "value,total,geometric,dynamic,eta,reference,phase_error,fidelity,"
           "oracle_total,oracle_dynamic,oracle_geometric,oracle_eta,oracle_deviation\n";
    for (const auto& r : report.rows) {
        out << format_number(r.value) << ',' << format_number(r.total) << ',' << format_number(r.geometric) << ','
            << format_number(r.dynamic) << ',' << cell(r.eta) << ',' << cell(r.reference) << ','
            << cell(r.phase_error) << ',' << cell(r.fidelity) << ',' << cell(r.oracle_total) << ','
            << cell(r.oracle_dynamic) << ',' << cell(r.oracle_geometric) << ',' << cell(r.oracle_eta) << ','
            << cell(r.oracle_deviation) << '\n';
    }
    for (const auto& [k, v] : report.summary) out << "#summary," << k << ',' << format_number(v) << '\n';
    for (const auto& [k, v] : report.metadata) out << "#meta," << k << ',' << v << '\n';
    return out.str();
}

std::string gate_to_csv(const TwoQubitGate& gate) {
    std::ostringstream out;
    out << "row,col,re,im\n";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto z = gate.matrix()(i, j);
            out << i << ',' << j << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
        }
    }
    return out.str();
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace geophase::io
