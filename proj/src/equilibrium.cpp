#include "dpricing/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dpricing {

namespace {

constexpr double kRootTolerance = 1e-9;
constexpr int kMaxBisections = 200;
constexpr double kBudgetTolerance = 1e-6;

void check_user(const EnergyUser& user) {
  if (!(user.inconvenience > 0.0)) {
    throw DomainError("inconvenience must be > 0 (user " + user.id + ")");
  }
}

std::vector<ClampFlag> flags_from_position(const PriceVector& prices, const MarketParams& p) {
  std::vector<ClampFlag> flags;
  flags.reserve(prices.size());
  for (double c : prices) {
    if (c <= p.price_min && p.price_min < p.price_max) {
      flags.push_back(ClampFlag::lower);
    } else if (c >= p.price_max && p.price_min < p.price_max) {
      flags.push_back(ClampFlag::upper);
    } else {
      flags.push_back(ClampFlag::interior);
    }
  }
  return flags;
}

PriceChoice leader_price(const EnergyUser& user, const SfaCostCoefficients& coeff,
                         const MarketParams& params) {
  return params.exponent == 2 ? stage1_price(user, coeff, params)
                              : stage1_price_general_k(user, coeff, params);
}

double price_sum(const MarketInstance& instance, double lambda, bool* all_clamped) {
  MarketParams p = instance.params;
  p.lambda = lambda;
  double sum = 0.0;
  bool clamped = true;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto choice = leader_price(instance.users[i], instance.coefficients[i], p);
    sum += choice.price;
    clamped = clamped && choice.flag != ClampFlag::interior;
  }
  if (all_clamped) *all_clamped = clamped;
  return sum;
}

}  // namespace

std::string_view to_string(ResponseMode mode) {
  return mode == ResponseMode::paper ? "paper" : "physical";
}

std::string_view to_string(ClampFlag flag) {
  switch (flag) {
    case ClampFlag::lower:
      return "lower";
    case ClampFlag::upper:
      return "upper";
    case ClampFlag::interior:
      break;
  }
  return "interior";
}

ResponseMode parse_response_mode(std::string_view text) {
  if (text == "paper") return ResponseMode::paper;
  if (text == "physical") return ResponseMode::physical;
  throw std::invalid_argument("unknown response mode: " + std::string(text));
}

ClampFlag parse_clamp_flag(std::string_view text) {
  if (text == "lower") return ClampFlag::lower;
  if (text == "interior") return ClampFlag::interior;
  if (text == "upper") return ClampFlag::upper;
  throw std::invalid_argument("unknown clamp flag: " + std::string(text));
}

double best_response(double price, const EnergyUser& user, ResponseMode mode) {
  if (!(price >= 0.0)) throw DomainError("best_response: price must be >= 0");
  check_user(user);
  const double e = (price + user.available_energy) / (2.0 * user.inconvenience);
  if (mode == ResponseMode::physical) return std::clamp(e, 0.0, user.strategy_max);
  return e;
}

double stage1_price_unclamped(const EnergyUser& user, const SfaCostCoefficients& coeff,
                              const MarketParams& params) {
  if (params.exponent != 2) {
    throw DomainError("closed-form price requires exponent 2; use stage1_price_general_k");
  }
  check_user(user);
  const double energy = user.available_energy;
  const double disc =
      energy * energy -
      3.0 * (2.0 * user.inconvenience * (coeff.a - params.lambda) - params.grid_price);
  if (disc < 0.0) {
    std::ostringstream os;
    os << "negative discriminant for user " << user.id << ": lambda=" << params.lambda
       << " a=" << coeff.a << " (lambda must exceed a)";
    throw InfeasibleError(os.str());
  }
  const double price = (-energy + std::sqrt(disc)) / 3.0;
  if (price < 0.0) {
    std::ostringstream os;
    os << "negative closed-form price for user " << user.id << ": lambda=" << params.lambda
       << " a=" << coeff.a;
    throw InfeasibleError(os.str());
  }
  return price;
}

PriceChoice clamp_price(double raw, const MarketParams& params) {
  if (raw < params.price_min) return {params.price_min, ClampFlag::lower};
  if (raw > params.price_max) return {params.price_max, ClampFlag::upper};
  return {raw, ClampFlag::interior};
}

PriceChoice stage1_price(const EnergyUser& user, const SfaCostCoefficients& coeff,
                         const MarketParams& params) {
  return clamp_price(stage1_price_unclamped(user, coeff, params), params);
}

double stationarity_residual(double price, const EnergyUser& user,
                             const SfaCostCoefficients& coeff, const MarketParams& params) {
  const int k = params.exponent;
  const double two_alpha = 2.0 * user.inconvenience;
  return (k + 1) * std::pow(price, k) / two_alpha +
         k * user.available_energy * std::pow(price, k - 1) / two_alpha + coeff.a -
         params.grid_price / two_alpha - params.lambda;
}

PriceChoice stage1_price_general_k(const EnergyUser& user, const SfaCostCoefficients& coeff,
                                   const MarketParams& params) {
  if (params.exponent < 1) throw DomainError("exponent must be >= 1");
  check_user(user);

  auto g = [&](double c) { return stationarity_residual(c, user, coeff, params); };

  double lo = 0.0;
  if (!(g(lo) < 0.0)) {
    std::ostringstream os;
    os << "no sign change in stationarity condition for user " << user.id
       << ": residual at zero price is " << g(lo) << " (lambda=" << params.lambda
       << ", a=" << coeff.a << ")";
    throw InfeasibleError(os.str());
  }
  double hi = 1.0;
  for (int i = 0; i < kMaxBisections && g(hi) <= 0.0; ++i) hi *= 2.0;
  if (!(g(hi) > 0.0)) {
    throw InfeasibleError("no sign change in stationarity condition for user " + user.id);
  }

  for (int i = 0; i < kMaxBisections && hi - lo > kRootTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clamp_price(0.5 * (lo + hi), params);
}

EquilibriumOutcome assemble_outcome(const MarketInstance& instance, const PriceVector& prices,
                                    std::vector<ClampFlag> flags, ResponseMode mode) {
  const std::size_t n = instance.size();
  if (prices.size() != n) throw StructuralError("price vector not aligned with users");
  if (flags.empty()) flags = flags_from_position(prices, instance.params);
  if (flags.size() != n) throw StructuralError("clamp flags not aligned with users");

  const auto& p = instance.params;
  EquilibriumOutcome out;
  out.prices = prices;
  out.clamp_flags = std::move(flags);
  out.mode = mode;
  out.lambda = p.lambda;
  out.quantities.resize(n);
  out.utilities.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& user = instance.users[i];
    out.quantities[i] = best_response(prices[i], user, mode);
    out.utilities[i] = utility(out.quantities[i], prices[i], user);
    out.budget_used += prices[i];
    if (mode == ResponseMode::physical &&
        out.quantities[i] < best_response(prices[i], user, ResponseMode::paper)) {
      out.warnings.push_back("response capped at available energy (user " + user.id + ")");
    }
    if (prices[i] < p.price_min || prices[i] > p.price_max) {
      out.warnings.push_back("price outside [price_min, price_max] (user " + user.id + ")");
    }
  }

  const SfaCost cost = sfa_cost(out.quantities, prices, instance);
  out.total_cost = cost.total;
  double supplied = 0.0;
  for (double e : out.quantities) supplied += e;
  out.grid_purchase = p.required_energy - supplied;

  if (cost.oversupply) {
    out.warnings.emplace_back("oversupply: users supply more than the required energy");
  }
  if (out.budget_used > p.total_unit_price) {
    std::ostringstream os;
    os << "budget exceeded: sum of prices " << out.budget_used << " > " << p.total_unit_price;
    out.warnings.push_back(os.str());
  }
  return out;
}

EquilibriumOutcome solve_spe(const MarketInstance& instance, ResponseMode mode) {
  require_valid(instance);
  const std::size_t n = instance.size();
  PriceVector prices(n);
  std::vector<ClampFlag> flags(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto choice = leader_price(instance.users[i], instance.coefficients[i], instance.params);
    prices[i] = choice.price;
    flags[i] = choice.flag;
  }
  return assemble_outcome(instance, prices, std::move(flags), mode);
}

LambdaTuning tune_lambda(const MarketInstance& instance, double target_budget,
                         ResponseMode mode) {
  require_valid(instance);
  const auto& p = instance.params;
  const double floor_budget = static_cast<double>(instance.size()) * p.price_min;
  if (target_budget < floor_budget) {
    std::ostringstream os;
    os << "target budget " << target_budget << " below N * price_min = " << floor_budget;
    throw InfeasibleError(os.str());
  }

  LambdaTuning result;
  result.lambda = p.lambda;
  if (price_sum(instance, p.lambda, nullptr) <= target_budget) {
    result.outcome = solve_spe(instance, mode);
    return result;
  }

  double max_a = 0.0;
  for (const auto& c : instance.coefficients) max_a = std::max(max_a, c.a);
  double lo = std::nextafter(max_a, p.lambda);
  double hi = p.lambda;

  bool lo_clamped = false;
  double lo_sum = price_sum(instance, lo, &lo_clamped);
  if (lo_sum > target_budget) {
    std::ostringstream os;
    os << "no lambda above max a meets budget " << target_budget << " (minimum sum " << lo_sum
       << ")";
    throw InfeasibleError(os.str());
  }

  int iterations = 0;
  while (iterations < kMaxBisections && target_budget - lo_sum > kBudgetTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++iterations;
    bool mid_clamped = false;
    const double s = price_sum(instance, mid, &mid_clamped);
    if (s <= target_budget) {
      lo = mid;
      lo_sum = s;
      lo_clamped = mid_clamped;
    } else {
      hi = mid;
    }
  }

  MarketInstance tuned = instance;
  tuned.params.lambda = lo;
  result.lambda = lo;
  result.adjusted = true;
  result.iterations = iterations;
  result.outcome = solve_spe(tuned, mode);
  if (lo_clamped && target_budget - lo_sum > kBudgetTolerance) {
    result.outcome.warnings.emplace_back("lambda tuning stopped with every price on a clamp");
  }
  return result;
}

}  // namespace dpricing
