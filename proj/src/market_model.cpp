#include "dpricing/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpricing/equilibrium.hpp"

namespace dpricing {

namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::ostringstream os;
  os << "invalid input:";
  for (const auto& v : violations) os << "\n  - " << v;
  return os.str();
}

void check_aligned(std::size_t n, const EnergyVector& energies, const PriceVector& prices) {
  if (energies.size() != n || prices.size() != n) {
    std::ostringstream os;
    os << "vectors not aligned with instance: " << n << " users, " << energies.size()
       << " energies, " << prices.size() << " prices";
    throw StructuralError(os.str());
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

EnergyUser EnergyUser::make(std::string id, double energy, double inconvenience) {
  return EnergyUser{std::move(id), energy, inconvenience, energy};
}

double utility(double energy, double price, const EnergyUser& user) {
  if (!(energy >= 0.0)) throw DomainError("utility: energy must be >= 0");
  if (!(price >= 0.0)) throw DomainError("utility: price must be >= 0");
  return energy * price + (user.available_energy - user.inconvenience * energy) * energy;
}

SfaCost sfa_cost(const EnergyVector& energies, const PriceVector& prices,
                 const MarketInstance& instance) {
  const std::size_t n = instance.size();
  check_aligned(n, energies, prices);
  if (instance.coefficients.size() != n) {
    throw StructuralError("coefficients not aligned with users");
  }
  const auto& p = instance.params;
  double total = 0.0;
  double supplied = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& coeff = instance.coefficients[i];
    total += energies[i] * std::pow(prices[i], p.exponent) + coeff.a * prices[i] + coeff.b;
    supplied += energies[i];
  }
  const double shortfall = p.required_energy - supplied;
  total += p.grid_price * shortfall;
  return SfaCost{total, shortfall < 0.0};
}

double lagrangian(const PriceVector& prices, const MarketInstance& instance) {
  EnergyVector responses(prices.size());
  for (std::size_t i = 0; i < prices.size() && i < instance.size(); ++i) {
    responses[i] = best_response(prices[i], instance.users[i], ResponseMode::paper);
  }
  const double cost = sfa_cost(responses, prices, instance).total;
  double budget_slack = instance.params.total_unit_price;
  for (double c : prices) budget_slack -= c;
  return cost + instance.params.lambda * budget_slack;
}

std::vector<std::string> validate(const MarketInstance& instance) {
  std::vector<std::string> out;
  const auto& p = instance.params;

  if (instance.users.empty()) out.emplace_back("users must be nonempty");
  if (instance.coefficients.size() != instance.users.size()) {
    out.emplace_back("coefficients must have the same length as users");
  }

  for (const auto& u : instance.users) {
    const std::string tag = " (user " + u.id + ")";
    if (!std::isfinite(u.available_energy) || u.available_energy <= 0.0) {
      out.push_back("available energy must be > 0" + tag);
    }
    if (!std::isfinite(u.inconvenience) || u.inconvenience <= 0.0) {
      out.push_back("inconvenience must be > 0" + tag);
    }
    if (u.strategy_max != u.available_energy) {
      out.push_back("strategy max must equal available energy" + tag);
    }
  }

  double max_a = 0.0;
  for (std::size_t i = 0; i < instance.coefficients.size(); ++i) {
    const auto& c = instance.coefficients[i];
    const std::string tag = " (index " + std::to_string(i) + ")";
    if (!std::isfinite(c.a) || c.a <= 0.0) out.push_back("cost coefficient a must be > 0" + tag);
    if (!std::isfinite(c.b) || c.b <= 0.0) out.push_back("cost coefficient b must be > 0" + tag);
    if (std::isfinite(c.a)) max_a = std::max(max_a, c.a);
  }

  if (!(p.price_min > 0.0)) out.emplace_back("price_min must be > 0");
  if (!(p.price_min <= p.price_max)) out.emplace_back("price_min must be <= price_max");
  if (!(p.price_max < p.grid_price)) out.emplace_back("price_max must be < grid_price");
  if (!(p.required_energy > 0.0)) out.emplace_back("required_energy must be > 0");
  if (!(p.total_unit_price >= p.price_min)) {
    out.emplace_back("total_unit_price must be >= price_min");
  }
  if (!std::isfinite(p.lambda) || !(p.lambda > max_a)) {
    out.emplace_back("lambda must exceed every cost coefficient a");
  }
  if (p.exponent < 1) out.emplace_back("exponent must be >= 1");
  return out;
}

void require_valid(const MarketInstance& instance) {
  auto violations = validate(instance);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

}  // namespace dpricing
