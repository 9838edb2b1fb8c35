#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sloworbit/spectral.hpp"
#include "sloworbit/theorems.hpp"
#include "sloworbit/verification.hpp"

namespace sloworbit {

enum class ReportFormat { Json, Csv };

/// Stable hash of a configuration (FNV-1a over its compact JSON dump), as 16 hex digits.
std::string config_hash(const nlohmann::json& config);
/// Tolerance constants every report embeds.
nlohmann::json tolerances_json();

/// Json: the object pretty-printed. Csv: {"columns": [...], "rows": [[...], ...]} with %.17g numbers.
void emit_report(const nlohmann::json& results, ReportFormat format, const std::filesystem::path& file);
std::string format_number(double v);

nlohmann::json timeset_json(const TimeSet& u);
TimeSet timeset_from_json(const nlohmann::json& j, double dt);

nlohmann::json ledger_json(const ConstructionLedger& ledger);
nlohmann::json witness_json(const SlowOrbitWitness& w, const std::string& x_ref, const std::string& xp_ref);

/// Writes witness.json, x.csv, xp.csv and orbit.csv (t,pairing_abs,level_mask) into `dir`.
void write_witness(const SlowOrbitWitness& w, const ModelDescriptor& model, const TimeGrid& tg,
                   const std::filesystem::path& dir, const nlohmann::json& config);
/// Reads a witness written by write_witness; CSV references resolve against the JSON's directory.
SlowOrbitWitness read_witness(const std::filesystem::path& file, const ModelDescriptor& model);

nlohmann::json spectral_json(const SpectralReport& r, const std::vector<DiagramEntry>& diagram);
nlohmann::json scan_csv_rows(const SpectralReport& r);
nlohmann::json pair_json(const ApproxEigenpair& p);
nlohmann::json lemma2_json(const Lemma2Result& r);
nlohmann::json theorem0_json(const Theorem0Evidence& e);
nlohmann::json audit_json(const WitnessAudit& a);
nlohmann::json backward_json(const BackwardReport& r);
nlohmann::json eq2_json(const Eq2Result& r);
nlohmann::json divergence_json(const DivergenceLedger& d);
nlohmann::json weak_l1_json(const WeakL1Report& r);

}  // namespace sloworbit
