#include "dpricing/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dpricing {

namespace {

using nlohmann::json;

double dollars(double cents) { return round_money(cents / 100.0); }

std::string signed_percent(double pct) {
  const int t = Table1Report::truncated(pct);
  std::string s = std::to_string(t) + "%";
  return t > 0 ? "+" + s : s;
}

void row(std::ostream& os, const char* label, double a, double b, const std::string& note = {}) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-28s %8s %8s", label, fixed(a, 0).c_str(), fixed(b, 0).c_str());
  os << buf;
  if (!note.empty()) os << " (" << note << ")";
  os << '\n';
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format: " + std::string(text));
}

ReportFormat resolve_format(const std::string& explicit_format, const std::string& path,
                            ReportFormat fallback) {
  if (!explicit_format.empty()) return parse_report_format(explicit_format);
  auto ends_with = [&](const char* ext) {
    const std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
  };
  if (ends_with(".json")) return ReportFormat::json;
  if (ends_with(".csv")) return ReportFormat::csv;
  return fallback;
}

double round_money(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(x * scale) / scale;
}

std::string fixed(double x, int digits) {
  double r = round_money(x, digits);
  if (r == 0.0) r = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, r);
  return buf;
}

void to_json(json& j, const EquilibriumOutcome& o) {
  std::vector<std::string> flags;
  for (auto f : o.clamp_flags) flags.emplace_back(to_string(f));
  j = json{{"prices", o.prices},
           {"quantities", o.quantities},
           {"utilities", o.utilities},
           {"total_cost", o.total_cost},
           {"grid_purchase", o.grid_purchase},
           {"budget_used", o.budget_used},
           {"clamp_flags", flags},
           {"warnings", o.warnings},
           {"mode", std::string(to_string(o.mode))},
           {"lambda", o.lambda}};
}

void from_json(const json& j, EquilibriumOutcome& o) {
  j.at("prices").get_to(o.prices);
  j.at("quantities").get_to(o.quantities);
  j.at("utilities").get_to(o.utilities);
  j.at("total_cost").get_to(o.total_cost);
  j.at("grid_purchase").get_to(o.grid_purchase);
  j.at("budget_used").get_to(o.budget_used);
  o.clamp_flags.clear();
  for (const auto& f : j.at("clamp_flags")) o.clamp_flags.push_back(parse_clamp_flag(f.get<std::string>()));
  j.at("warnings").get_to(o.warnings);
  o.mode = parse_response_mode(j.at("mode").get<std::string>());
  j.at("lambda").get_to(o.lambda);
}

void to_json(json& j, const ComparisonReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    classes.push_back(
        {{"alpha", c.alpha}, {"users", c.users}, {"energy_kwh", c.energy}, {"cost_cents", c.cost}});
  }
  json coeffs = json::array();
  for (const auto& c : r.coefficients) coeffs.push_back({{"a", c.a}, {"b", c.b}});
  j = json{{"case", r.label},
           {"classes", classes},
           {"grid_purchase_kwh", r.grid_purchase},
           {"grid_cost_cents", r.grid_cost},
           {"total_proposed_cents", r.total_proposed},
           {"total_eds_cents", r.total_eds},
           {"eds_grid_purchase_kwh", r.eds_grid_purchase},
           {"percent_reduction", r.percent_reduction},
           {"lambda", r.lambda},
           {"coefficients", coeffs},
           {"warnings", r.warnings}};
}

void from_json(const json& j, ComparisonReport& r) {
  j.at("case").get_to(r.label);
  r.classes.clear();
  for (const auto& c : j.at("classes")) {
    r.classes.push_back({c.at("alpha").get<double>(), c.at("users").get<int>(),
                         c.at("energy_kwh").get<double>(), c.at("cost_cents").get<double>()});
  }
  j.at("grid_purchase_kwh").get_to(r.grid_purchase);
  j.at("grid_cost_cents").get_to(r.grid_cost);
  j.at("total_proposed_cents").get_to(r.total_proposed);
  j.at("total_eds_cents").get_to(r.total_eds);
  j.at("eds_grid_purchase_kwh").get_to(r.eds_grid_purchase);
  j.at("percent_reduction").get_to(r.percent_reduction);
  j.at("lambda").get_to(r.lambda);
  r.coefficients.clear();
  for (const auto& c : j.at("coefficients")) {
    r.coefficients.push_back({c.at("a").get<double>(), c.at("b").get<double>()});
  }
  j.at("warnings").get_to(r.warnings);
}

void to_json(json& j, const SweepRow& row) {
  j = json{{"value", row.value},
           {"raw_price", row.raw_price},
           {"price", row.price},
           {"clamp_flag", std::string(to_string(row.flag))}};
}

void from_json(const json& j, SweepRow& row) {
  j.at("value").get_to(row.value);
  j.at("raw_price").get_to(row.raw_price);
  j.at("price").get_to(row.price);
  row.flag = parse_clamp_flag(j.at("clamp_flag").get<std::string>());
}

std::string comparison_csv(const std::vector<ComparisonReport>& reports) {
  std::ostringstream os;
  os << "case,class_alpha,class_cost_dollars,grid_cost_dollars,total_proposed_dollars,"
        "total_eds_dollars,percent_reduction\n";
  for (const auto& r : reports) {
    for (const auto& c : r.classes) {
      os << r.label << ',' << fixed(c.alpha, 4) << ',' << fixed(dollars(c.cost), 2) << ','
         << fixed(dollars(r.grid_cost), 2) << ',' << fixed(dollars(r.total_proposed), 2) << ','
         << fixed(dollars(r.total_eds), 2) << ',' << fixed(r.percent_reduction, 2) << '\n';
    }
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "axis_value,price_cents_per_kwh,clamp_flag\n";
  for (const auto& r : rows) {
    os << fixed(r.value, 4) << ',' << fixed(r.price, 4) << ',' << to_string(r.flag) << '\n';
  }
  return os.str();
}

std::string outcome_csv(const MarketInstance& instance, const EquilibriumOutcome& outcome) {
  std::ostringstream os;
  os << "user,price_cents_per_kwh,energy_kwh,utility_cents,clamp_flag\n";
  for (std::size_t i = 0; i < outcome.prices.size(); ++i) {
    os << instance.users.at(i).id << ',' << fixed(outcome.prices[i], 4) << ','
       << fixed(outcome.quantities[i], 4) << ',' << fixed(outcome.utilities[i], 4) << ','
       << to_string(outcome.clamp_flags[i]) << '\n';
  }
  return os.str();
}

std::string render(const std::vector<ComparisonReport>& reports, ReportFormat format) {
  if (format == ReportFormat::csv) return comparison_csv(reports);
  return json(reports).dump(2) + "\n";
}

std::string render(const std::vector<SweepRow>& rows, ReportFormat format) {
  if (format == ReportFormat::csv) return sweep_csv(rows);
  return json(rows).dump(2) + "\n";
}

void print_table1(std::ostream& os, const Table1Report& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%-28s %8s %8s", "", "case 1", "case 2");
  os << "Required energy: " << fixed(r.required_energy, 0) << " kWh\n" << head << '\n';
  row(os, "Price to EU1 (cents/kWh)", r.uniform.prices[0], r.discriminate.prices[0]);
  row(os, "Energy from EU1 (kWh)", r.uniform.energies[0], r.discriminate.energies[0]);
  row(os, "Price to EU2 (cents/kWh)", r.uniform.prices[1], r.discriminate.prices[1]);
  row(os, "Energy from EU2 (kWh)", r.uniform.energies[1], r.discriminate.energies[1]);
  row(os, "Revenue of EU1 (cents)", r.uniform.revenues[0], r.discriminate.revenues[0],
      signed_percent(r.revenue_change_pct[0]));
  row(os, "Revenue of EU2 (cents)", r.uniform.revenues[1], r.discriminate.revenues[1],
      signed_percent(r.revenue_change_pct[1]));
  row(os, "Cost to the SFA (cents)", r.uniform.total, r.discriminate.total,
      signed_percent(r.total_change_pct));
}

json table1_json(const Table1Report& r) {
  auto one = [](const Table1Case& c) {
    return json{{"prices", c.prices},
                {"energies", c.energies},
                {"revenues_cents", c.revenues},
                {"total_cents", c.total}};
  };
  std::vector<int> truncated;
  for (double p : r.revenue_change_pct) truncated.push_back(Table1Report::truncated(p));
  return json{{"required_energy_kwh", r.required_energy},
              {"uniform", one(r.uniform)},
              {"discriminate", one(r.discriminate)},
              {"revenue_change_pct", r.revenue_change_pct},
              {"revenue_change_pct_truncated", truncated},
              {"total_change_pct", r.total_change_pct},
              {"total_change_pct_truncated", Table1Report::truncated(r.total_change_pct)}};
}

void write_output(const std::string& path, const std::string& contents, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << contents;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}

void emit_report(const std::vector<ComparisonReport>& reports, ReportFormat format,
                 const std::string& path, std::ostream& fallback) {
  write_output(path, render(reports, format), fallback);
}

void emit_report(const std::vector<SweepRow>& rows, ReportFormat format, const std::string& path,
                 std::ostream& fallback) {
  write_output(path, render(rows, format), fallback);
}

}  // namespace dpricing
