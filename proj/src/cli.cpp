#include "dpricing/cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dpricing/config.hpp"
#include "dpricing/oracle.hpp"
#include "dpricing/report_io.hpp"
#include "dpricing/scenarios.hpp"

namespace dpricing {

namespace {

using nlohmann::json;

constexpr double kVerifyPriceTolerance = 1e-4;
constexpr double kVerifyResponseTolerance = 1e-3;

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::string mode;
  bool tune = false;
  std::string axis;
  std::string range;
  std::string name;
  std::optional<int> case_id;
  std::optional<double> lambda;
  int trials = 100;
  std::uint64_t seed = 7;
};

// --format, then the --out extension, then the config's own output settings.
ReportFormat document_format(const Options& o, const ConfigDocument& doc, ReportFormat fallback) {
  const ReportFormat from_config =
      doc.output_format.empty() ? fallback : parse_report_format(doc.output_format);
  if (!o.format.empty()) return parse_report_format(o.format);
  if (!o.out.empty()) return resolve_format("", o.out, from_config);
  return resolve_format(doc.output_format, doc.output_path, fallback);
}

int cmd_solve(const Options& o, std::ostream& out) {
  ConfigDocument doc = load_config(o.config);
  if (!o.mode.empty()) doc.mode = parse_response_mode(o.mode);
  const MarketInstance instance = to_instance(doc);
  const bool tune = o.tune || doc.tune_lambda;

  LambdaTuning result;
  if (tune) {
    result = tune_lambda(instance, doc.target_budget.value_or(instance.params.total_unit_price),
                         doc.mode);
  } else {
    result.lambda = instance.params.lambda;
    result.outcome = solve_spe(instance, doc.mode);
  }

  const std::string path = o.out.empty() ? doc.output_path : o.out;
  const auto format = document_format(o, doc, ReportFormat::json);
  std::string text;
  if (format == ReportFormat::csv) {
    text = outcome_csv(instance, result.outcome);
  } else {
    std::vector<std::string> ids;
    for (const auto& u : instance.users) ids.push_back(u.id);
    json j{{"scenario", doc.scenario},
           {"users", ids},
           {"lambda", result.lambda},
           {"lambda_tuned", result.adjusted},
           {"outcome", result.outcome}};
    text = j.dump(2) + "\n";
  }
  write_output(path, text, out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const ConfigDocument doc = load_config(o.config);
  const MarketInstance instance = to_instance(doc);
  const auto rows = sweep_prices(parse_sweep_axis(o.axis), parse_range(o.range),
                                 instance.users.front(), instance.coefficients.front(),
                                 instance.params);
  const std::string path = o.out.empty() ? doc.output_path : o.out;
  emit_report(rows, document_format(o, doc, ReportFormat::csv), path, out);
  return kExitOk;
}

int cmd_scenario(const Options& o, std::ostream& out) {
  ScenarioConfig sc;
  sc.name = o.name;
  if (o.lambda) sc.params.lambda = *o.lambda;

  if (sc.name == "table1") {
    const Table1Report report = table1_replay();
    if (resolve_format(o.format, o.out, ReportFormat::csv) == ReportFormat::json) {
      write_output(o.out, table1_json(report).dump(2) + "\n", out);
    } else {
      std::ostringstream os;
      print_table1(os, report);
      write_output(o.out, os.str(), out);
    }
    return kExitOk;
  }

  if (sc.name == "fig5") {
    sc.axis = parse_sweep_axis(o.axis.empty() ? "alpha" : o.axis);
    EnergyUser base = EnergyUser::make("template", 150.0, 2.0);
    if (sc.axis == SweepAxis::alpha) {
      sc.values = {1.0, 1.5, 2.0, 2.5, 3.0};
    } else {
      sc.values = {50.0, 100.0, 150.0, 200.0, 250.0};
    }
    if (!o.range.empty()) sc.values = parse_range(o.range);
    const auto rows = sweep_prices(sc.axis, sc.values, base, SfaCostCoefficients{}, sc.params);
    emit_report(rows, resolve_format(o.format, o.out, ReportFormat::csv), o.out, out);
    return kExitOk;
  }

  if (sc.name == "casemix") {
    std::vector<int> cases;
    if (o.case_id) {
      cases.push_back(*o.case_id);
    } else {
      cases = {1, 2, 3, 4, 5, 6};
    }
    std::vector<ComparisonReport> reports;
    for (int c : cases) {
      const MarketInstance instance = build_case_mix(table2_case(c), sc.params);
      reports.push_back(run_comparison(instance, std::to_string(c)));
    }
    emit_report(reports, resolve_format(o.format, o.out, ReportFormat::csv), o.out, out);
    return kExitOk;
  }

  throw ValidationError({"scenario name must be table1, fig5 or casemix, got '" + sc.name + "'"});
}

int cmd_compare(const Options& o, std::ostream& out) {
  const ConfigDocument doc = load_config(o.config);
  const MarketInstance instance = to_instance(doc);
  const ComparisonReport report = run_comparison(instance, doc.scenario, doc.mode);
  const std::string path = o.out.empty() ? doc.output_path : o.out;
  emit_report({report}, document_format(o, doc, ReportFormat::csv), path, out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.trials < 1) throw ValidationError({"--trials must be >= 1"});
  oracle::SuiteConfig config;
  config.trials = o.trials;
  config.seed = o.seed;
  const oracle::SuiteReport r = oracle::run_suite(config);
  const bool passed = r.passed(kVerifyPriceTolerance, kVerifyResponseTolerance);
  json j{{"trials", r.trials},
         {"seed", r.seed},
         {"max_price_deviation", r.max_price_deviation},
         {"max_response_deviation", r.max_response_deviation},
         {"max_quadratic_residual", r.max_quadratic_residual},
         {"price_tolerance", kVerifyPriceTolerance},
         {"response_tolerance", kVerifyResponseTolerance},
         {"passed", passed}};
  write_output(o.out, j.dump(2) + "\n", out);
  return passed ? kExitOk : kExitInvalid;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discriminate energy pricing: equilibrium solver and experiment harness",
               "dpricing"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Solve the pricing equilibrium for a config");
  solve->add_option("--config", o.config, "JSON config file")->required();
  solve->add_flag("--tune-lambda", o.tune, "Lower lambda until the price budget holds");
  solve->add_option("--mode", o.mode, "Response mode: paper or physical");
  solve->add_option("--out", o.out, "Output file (default: stdout)");
  solve->add_option("--format", o.format, "csv or json (default: from extension, else json)");

  auto* sweep = app.add_subcommand("sweep", "Price as a function of alpha or available energy");
  sweep->add_option("--axis", o.axis, "alpha or energy")->required();
  sweep->add_option("--range", o.range, "lo:hi:step")->required();
  sweep->add_option("--config", o.config, "JSON config; the first user is the template")
      ->required();
  sweep->add_option("--out", o.out, "Output file (default: stdout)");
  sweep->add_option("--format", o.format, "csv or json");

  auto* scenario = app.add_subcommand("scenario", "Run a built-in experiment");
  scenario->add_option("--name", o.name, "table1, fig5 or casemix")->required();
  scenario->add_option("--case", o.case_id, "Case mix 1..6 (default: all)");
  scenario->add_option("--lambda", o.lambda, "Override lambda");
  scenario->add_option("--axis", o.axis, "fig5 axis: alpha or energy");
  scenario->add_option("--range", o.range, "fig5 values as lo:hi:step");
  scenario->add_option("--out", o.out, "Output file (default: stdout)");
  scenario->add_option("--format", o.format, "csv or json");

  auto* compare = app.add_subcommand("compare-eds", "Compare against equal distribution pricing");
  compare->add_option("--config", o.config, "JSON config file")->required();
  compare->add_option("--out", o.out, "Output file (default: stdout)");
  compare->add_option("--format", o.format, "csv or json");

  auto* verify = app.add_subcommand("verify", "Check the solver against brute-force scans");
  verify->add_option("--trials", o.trials, "Number of random instances");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--out", o.out, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (*solve) return cmd_solve(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*scenario) return cmd_scenario(o, out);
    if (*compare) return cmd_compare(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  err << app.help();
  return kExitInvalid;
}

}  // namespace dpricing
