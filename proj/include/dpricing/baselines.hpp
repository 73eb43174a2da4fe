#pragma once

#include <string>
#include <vector>

#include "dpricing/equilibrium.hpp"

namespace dpricing {

struct EdsPrices {
  PriceVector prices;
  std::vector<std::string> warnings;
};

/// Equal distribution scheme: every user is paid C / N. A warning is attached
/// (not thrown) when C / N falls outside the price box.
EdsPrices eds_prices(const MarketInstance& instance);

/// Outcome of an arbitrary price profile, in the same record shape as solve_spe.
/// Clamp flags are taken from where each price sits in the box.
EquilibriumOutcome evaluate_scheme(const MarketInstance& instance, const PriceVector& prices,
                                   ResponseMode mode = ResponseMode::paper);

/// evaluate_scheme at the EDS prices, with the EDS warnings carried over.
EquilibriumOutcome evaluate_eds(const MarketInstance& instance,
                                ResponseMode mode = ResponseMode::paper);

}  // namespace dpricing
