#pragma once

// Experiment builders: the two-user pricing illustration, price sweeps over
// inconvenience and available energy, the ten-user behavioural case mixes and
// their comparison against equal-distribution pricing.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpricing/baselines.hpp"
#include "dpricing/equilibrium.hpp"

namespace dpricing {

/// Number of users per inconvenience value, all with the same available energy.
struct CaseMix {
  std::map<double, int> counts;
  double common_energy = 150.0;
};

/// Parameter set used by the case study: E_r 650, c_g 50, C 380, box [10, 38], lambda 1000, k 2.
MarketParams default_params();

/// The six behavioural mixes of ten users over alpha in {1, 2, 3}. Throws DomainError outside 1..6.
CaseMix table2_case(int case_id);

/// Users grouped by ascending alpha, ids eu-01, eu-02, ..., coefficients a = b = 1.
MarketInstance build_case_mix(const CaseMix& mix, const MarketParams& params);

/// Deterministic uniform draws of energy and inconvenience for `n` users.
std::vector<EnergyUser> sample_users(std::size_t n, std::pair<double, double> energy_range,
                                     std::pair<double, double> alpha_range, std::uint64_t seed);

/// Instance from explicit users with default coefficients a = b = 1.
MarketInstance make_instance(std::vector<EnergyUser> users, const MarketParams& params);

struct ClassCost {
  double alpha = 0.0;
  int users = 0;
  double energy = 0.0;  // kWh bought from the class
  double cost = 0.0;    // cents: sum of e c^k + a c + b over the class

  bool operator==(const ClassCost&) const = default;
};

/// Proposed-vs-EDS cost comparison. All money in cents; exports convert to dollars.
struct ComparisonReport {
  std::string label;
  std::vector<ClassCost> classes;
  double grid_purchase = 0.0;  // kWh
  double grid_cost = 0.0;
  double total_proposed = 0.0;
  double total_eds = 0.0;
  double eds_grid_purchase = 0.0;  // kWh
  double percent_reduction = 0.0;
  double lambda = 0.0;
  std::vector<SfaCostCoefficients> coefficients;
  std::vector<std::string> warnings;

  bool operator==(const ComparisonReport&) const = default;
};

ComparisonReport run_comparison(const MarketInstance& instance, std::string label = {},
                                ResponseMode mode = ResponseMode::paper);

enum class SweepAxis { alpha, energy };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepRow {
  double value = 0.0;
  double raw_price = 0.0;  // before projection onto the price box
  double price = 0.0;
  ClampFlag flag = ClampFlag::interior;

  bool operator==(const SweepRow&) const = default;
};

/// Leader price for the template user with one attribute replaced by each value.
std::vector<SweepRow> sweep_prices(SweepAxis axis, const std::vector<double>& values,
                                   const EnergyUser& user_template,
                                   const SfaCostCoefficients& coeff, const MarketParams& params);

/// Parses "lo:hi:step" into the inclusive list lo, lo + step, ..., hi.
std::vector<double> parse_range(const std::string& text);

struct Table1Case {
  PriceVector prices;
  EnergyVector energies;
  std::vector<double> revenues;  // cents
  double total = 0.0;            // cents
};

struct Table1Report {
  double required_energy = 40.0;
  Table1Case uniform;
  Table1Case discriminate;
  std::vector<double> revenue_change_pct;  // exact
  double total_change_pct = 0.0;           // exact

  /// Percent change truncated toward zero, as printed in the table.
  static int truncated(double pct);
};

/// Fixed-quantity replay of the two-user uniform vs discriminate pricing example.
Table1Report table1_replay();

/// Fixed settings for a named run. `seed` is present whenever users are sampled.
struct ScenarioConfig {
  std::string name;
  MarketParams params = default_params();
  std::optional<std::uint64_t> seed;
  SweepAxis axis = SweepAxis::alpha;
  std::vector<double> values;
};

}  // namespace dpricing
