#pragma once

// Domain types of the leader/follower energy market and the raw utility and
// cost functions evaluated on them. Units: kWh, cents, cents/kWh.

#include <string>
#include <vector>

#include "dpricing/errors.hpp"

namespace dpricing {

using PriceVector = std::vector<double>;   // cents/kWh, one entry per user
using EnergyVector = std::vector<double>;  // kWh, one entry per user

/// A follower selling surplus energy to the facility authority.
struct EnergyUser {
  std::string id;
  double available_energy = 0.0;  // kWh
  double inconvenience = 0.0;     // cents per kWh^2
  double strategy_max = 0.0;      // kWh, upper end of [0, available_energy]

  /// Builds a user whose strategy interval is [0, energy].
  static EnergyUser make(std::string id, double energy, double inconvenience);

  bool operator==(const EnergyUser&) const = default;
};

/// Leader-side cost weights attached to one user: a * c + b.
struct SfaCostCoefficients {
  double a = 1.0;
  double b = 1.0;

  bool operator==(const SfaCostCoefficients&) const = default;
};

struct MarketParams {
  double required_energy = 650.0;   // kWh
  double grid_price = 50.0;         // cents/kWh
  double total_unit_price = 380.0;  // cents/kWh, budget on the sum of prices
  double price_min = 10.0;          // cents/kWh
  double price_max = 38.0;          // cents/kWh
  double lambda = 1000.0;
  int exponent = 2;

  bool operator==(const MarketParams&) const = default;
};

struct MarketInstance {
  std::vector<EnergyUser> users;
  std::vector<SfaCostCoefficients> coefficients;
  MarketParams params;

  std::size_t size() const { return users.size(); }

  bool operator==(const MarketInstance&) const = default;
};

/// Leader cost together with the oversupply flag raised when the grid term goes negative.
struct SfaCost {
  double total = 0.0;  // cents
  bool oversupply = false;
};

/// Follower utility e*c + (E - alpha*e)*e. Throws DomainError for negative e or c.
double utility(double energy, double price, const EnergyUser& user);

/// Leader cost sum_i (e_i c_i^k + a_i c_i + b_i) + c_g (E_r - sum_i e_i).
///
/// The grid term is taken literally: when the users supply more than E_r it
/// becomes negative and `oversupply` is set. Throws StructuralError when the
/// vectors are not aligned with the instance.
SfaCost sfa_cost(const EnergyVector& energies, const PriceVector& prices,
                 const MarketInstance& instance);

/// Leader Lagrangian with every follower's best response (uncapped) substituted
/// at its price: sfa cost + lambda * (C - sum_i c_i).
double lagrangian(const PriceVector& prices, const MarketInstance& instance);

/// Lists every violated invariant of the instance; empty when the instance is valid.
std::vector<std::string> validate(const MarketInstance& instance);

/// Throws ValidationError if validate() reports anything.
void require_valid(const MarketInstance& instance);

}  // namespace dpricing
