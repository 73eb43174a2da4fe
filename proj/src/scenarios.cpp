#include "dpricing/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace dpricing {

namespace {

std::string user_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "eu-%02zu", index + 1);
  return buf;
}

void check_range(std::pair<double, double> range, const char* what) {
  if (!(range.first > 0.0) || !(range.first <= range.second) || !std::isfinite(range.second)) {
    throw DomainError(std::string(what) + " range must be positive and ordered");
  }
}

double percent_change(double from, double to) { return 100.0 * (to - from) / from; }

}  // namespace

MarketParams default_params() { return MarketParams{}; }

CaseMix table2_case(int case_id) {
  // alpha = 1, 2, 3 user counts per case.
  static constexpr int kCounts[6][3] = {
      {6, 2, 2}, {4, 3, 3}, {2, 4, 4}, {2, 2, 6}, {1, 1, 8}, {0, 0, 10},
  };
  if (case_id < 1 || case_id > 6) {
    throw DomainError("case must be in 1..6, got " + std::to_string(case_id));
  }
  CaseMix mix;
  for (int k = 0; k < 3; ++k) {
    const int n = kCounts[case_id - 1][k];
    if (n > 0) mix.counts[k + 1.0] = n;
  }
  return mix;
}

MarketInstance build_case_mix(const CaseMix& mix, const MarketParams& params) {
  std::vector<EnergyUser> users;
  for (const auto& [alpha, count] : mix.counts) {
    if (count < 0) throw DomainError("case mix counts must be >= 0");
    for (int j = 0; j < count; ++j) {
      users.push_back(EnergyUser::make(user_id(users.size()), mix.common_energy, alpha));
    }
  }
  if (users.empty()) throw DomainError("case mix must contain at least one user");
  return make_instance(std::move(users), params);
}

std::vector<EnergyUser> sample_users(std::size_t n, std::pair<double, double> energy_range,
                                     std::pair<double, double> alpha_range, std::uint64_t seed) {
  check_range(energy_range, "energy");
  check_range(alpha_range, "alpha");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> energy(energy_range.first, energy_range.second);
  std::uniform_real_distribution<double> alpha(alpha_range.first, alpha_range.second);
  std::vector<EnergyUser> users;
  users.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = energy(rng);
    const double a = alpha(rng);
    users.push_back(EnergyUser::make(user_id(i), e, a));
  }
  return users;
}

MarketInstance make_instance(std::vector<EnergyUser> users, const MarketParams& params) {
  MarketInstance instance;
  instance.coefficients.assign(users.size(), SfaCostCoefficients{});
  instance.users = std::move(users);
  instance.params = params;
  return instance;
}

ComparisonReport run_comparison(const MarketInstance& instance, std::string label,
                                ResponseMode mode) {
  const EquilibriumOutcome proposed = solve_spe(instance, mode);
  const EquilibriumOutcome eds = evaluate_eds(instance, mode);
  const auto& p = instance.params;

  ComparisonReport report;
  report.label = std::move(label);
  report.lambda = p.lambda;
  report.coefficients = instance.coefficients;

  std::map<double, ClassCost> classes;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const double alpha = instance.users[i].inconvenience;
    const auto& coeff = instance.coefficients[i];
    const double c = proposed.prices[i];
    auto& cls = classes[alpha];
    cls.alpha = alpha;
    cls.users += 1;
    cls.energy += proposed.quantities[i];
    cls.cost += proposed.quantities[i] * std::pow(c, p.exponent) + coeff.a * c + coeff.b;
  }
  for (auto& [alpha, cls] : classes) report.classes.push_back(cls);

  report.grid_purchase = proposed.grid_purchase;
  report.grid_cost = p.grid_price * proposed.grid_purchase;
  report.total_proposed = proposed.total_cost;
  report.total_eds = eds.total_cost;
  report.eds_grid_purchase = eds.grid_purchase;
  report.percent_reduction = 100.0 * (eds.total_cost - proposed.total_cost) / eds.total_cost;

  for (const auto& w : proposed.warnings) report.warnings.push_back("proposed: " + w);
  for (const auto& w : eds.warnings) report.warnings.push_back("eds: " + w);
  return report;
}

std::string_view to_string(SweepAxis axis) {
  return axis == SweepAxis::alpha ? "alpha" : "energy";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "alpha") return SweepAxis::alpha;
  if (text == "energy") return SweepAxis::energy;
  throw std::invalid_argument("unknown sweep axis: " + std::string(text));
}

std::vector<SweepRow> sweep_prices(SweepAxis axis, const std::vector<double>& values,
                                   const EnergyUser& user_template,
                                   const SfaCostCoefficients& coeff, const MarketParams& params) {
  MarketParams open_box = params;
  open_box.price_min = 0.0;
  open_box.price_max = std::numeric_limits<double>::infinity();

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    EnergyUser user = user_template;
    if (axis == SweepAxis::alpha) {
      user.inconvenience = v;
    } else {
      user.available_energy = v;
      user.strategy_max = v;
    }
    SweepRow row;
    row.value = v;
    if (params.exponent == 2) {
      row.raw_price = stage1_price_unclamped(user, coeff, params);
    } else {
      row.raw_price = stage1_price_general_k(user, coeff, open_box).price;
    }
    const PriceChoice choice = clamp_price(row.raw_price, params);
    row.price = choice.price;
    row.flag = choice.flag;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::istringstream is(text);
  for (std::string token; std::getline(is, token, ':');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) {
      throw DomainError("range must look like lo:hi:step, got '" + text + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) throw DomainError("range must look like lo:hi:step, got '" + text + "'");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || !(lo <= hi)) {
    throw DomainError("range needs lo <= hi and step > 0, got '" + text + "'");
  }
  const double span = std::floor((hi - lo) / step + 1e-9);
  if (span > 1e7) throw DomainError("range has too many points: '" + text + "'");
  const auto count = static_cast<std::size_t>(span);
  std::vector<double> values;
  values.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
  return values;
}

int Table1Report::truncated(double pct) { return static_cast<int>(std::trunc(pct)); }

Table1Report table1_replay() {
  // Two sellers with 50 and 10 kWh available; the leader needs 40 kWh and the
  // quantities are the illustrated ones, not solved responses.
  MarketInstance inst;
  inst.users = {EnergyUser::make("EU1", 50.0, 1.0), EnergyUser::make("EU2", 10.0, 1.0)};
  inst.coefficients.assign(2, SfaCostCoefficients{0.0, 0.0});
  inst.params = default_params();
  inst.params.required_energy = 40.0;
  inst.params.exponent = 1;

  auto replay = [&](PriceVector prices, EnergyVector energies) {
    Table1Case c;
    for (std::size_t i = 0; i < prices.size(); ++i) c.revenues.push_back(prices[i] * energies[i]);
    c.total = sfa_cost(energies, prices, inst).total;
    c.prices = std::move(prices);
    c.energies = std::move(energies);
    return c;
  };

  Table1Report report;
  report.required_energy = inst.params.required_energy;
  report.uniform = replay({20.0, 20.0}, {35.0, 5.0});
  report.discriminate = replay({18.0, 22.0}, {32.0, 8.0});
  for (std::size_t i = 0; i < 2; ++i) {
    report.revenue_change_pct.push_back(
        percent_change(report.uniform.revenues[i], report.discriminate.revenues[i]));
  }
  report.total_change_pct = percent_change(report.uniform.total, report.discriminate.total);
  return report;
}

}  // namespace dpricing
