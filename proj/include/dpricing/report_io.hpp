#pragma once

// CSV and JSON exports. Money is kept in cents everywhere except the
// comparison CSV, whose columns are in dollars rounded half away from zero
// to two decimals. Other CSV numbers carry four decimals.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpricing/equilibrium.hpp"
#include "dpricing/scenarios.hpp"

namespace dpricing {

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view text);

/// Format from an explicit name, else from the path extension, else `fallback`.
ReportFormat resolve_format(const std::string& explicit_format, const std::string& path,
                            ReportFormat fallback);

/// x rounded to `digits` decimals, ties away from zero.
double round_money(double x, int digits = 2);

/// Fixed-point text with a '.' separator regardless of locale.
std::string fixed(double x, int digits);

void to_json(nlohmann::json& j, const EquilibriumOutcome& o);
void from_json(const nlohmann::json& j, EquilibriumOutcome& o);
void to_json(nlohmann::json& j, const ComparisonReport& r);
void from_json(const nlohmann::json& j, ComparisonReport& r);
void to_json(nlohmann::json& j, const SweepRow& row);
void from_json(const nlohmann::json& j, SweepRow& row);

/// One row per price class per report:
/// case,class_alpha,class_cost_dollars,grid_cost_dollars,total_proposed_dollars,total_eds_dollars,percent_reduction
std::string comparison_csv(const std::vector<ComparisonReport>& reports);

/// axis_value,price_cents_per_kwh,clamp_flag
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Per-user table of an outcome: user,price_cents_per_kwh,energy_kwh,utility_cents,clamp_flag
std::string outcome_csv(const MarketInstance& instance, const EquilibriumOutcome& outcome);

std::string render(const std::vector<ComparisonReport>& reports, ReportFormat format);
std::string render(const std::vector<SweepRow>& rows, ReportFormat format);

/// Human-readable two-case table with truncated percentage changes.
void print_table1(std::ostream& os, const Table1Report& report);
nlohmann::json table1_json(const Table1Report& report);

/// Writes `contents` to `path`, or to `fallback` when path is empty. Throws IoError.
void write_output(const std::string& path, const std::string& contents, std::ostream& fallback);

void emit_report(const std::vector<ComparisonReport>& reports, ReportFormat format,
                 const std::string& path, std::ostream& fallback);
void emit_report(const std::vector<SweepRow>& rows, ReportFormat format, const std::string& path,
                 std::ostream& fallback);

}  // namespace dpricing
