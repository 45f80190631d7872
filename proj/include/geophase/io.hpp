#pragma once

// JSON and CSV encodings of drives, gates, phase decompositions, oracle runs
// and sweep reports. Every top-level document carries "schema_version".
// Numbers are rounded to 12 significant digits so output is byte-stable.
//
// Drive document:
//   { "schema_version": 1,
//     "conditioner": "odd-parity-projector" | "jz" | "jy",
//     "segments": [ { "kind": "constant",    "duration": d, "amplitude": [re, im] },
//                   { "kind": "exponential", "duration": d, "amplitude": [re, im],
//                     "frequency": w } ] }
// or, in place of "segments", a constant detuned drive:
//     "constant": { "omega_over_delta": r, "delta": d, "phi_l": p, "periods": k }

#include <string>

#include <nlohmann/json.hpp>

#include "geophase/drives.hpp"
#include "geophase/gates.hpp"
#include "geophase/oracle.hpp"
#include "geophase/phasespace.hpp"
#include "geophase/robustness.hpp"

namespace geophase::io {

using nlohmann::json;

inline constexpr int kSignificantDigits = 12;

/// x rounded to 12 significant digits (identity on 0, inf, nan).
double round_sig(double x);

/// x printed with 12 significant digits ("%.12g").
std::string format_number(double x);

json to_json(const PhaseDecomposition& d);
json to_json(const TwoQubitGate& gate);
json to_json(const ConstantDriveParams& p);
json to_json(const SweepReport& report);
json to_json(const MagnusCheck& check);

/// Oracle run summary: parameters, per-basis-state phases, leakage, defects.
json oracle_report(const FockPropagation& prop);

json drive_to_json(const DriveProfile& drive);

/// Parses and validates a drive document; unknown keys are rejected.
DriveProfile drive_from_json(const json& doc);

/// One header line, one line per row, then "#summary,<name>,<value>" lines.
/// Missing optional cells are left empty.
std::string sweep_to_csv(const SweepReport& report);

/// "row,col,re,im" lines for the 16 matrix entries.
std::string gate_to_csv(const TwoQubitGate& gate);

/// Serializes with 2-space indentation and a trailing newline.
std::string dump(const json& doc);

}  // namespace geophase::io
