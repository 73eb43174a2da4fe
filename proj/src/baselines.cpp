#include "dpricing/baselines.hpp"

#include <sstream>

namespace dpricing {

EdsPrices eds_prices(const MarketInstance& instance) {
  if (instance.users.empty()) throw StructuralError("EDS needs at least one user");
  const auto& p = instance.params;
  const double share = p.total_unit_price / static_cast<double>(instance.size());
  EdsPrices out{PriceVector(instance.size(), share), {}};
  if (share < p.price_min || share > p.price_max) {
    std::ostringstream os;
    os << "EDS price " << share << " outside [" << p.price_min << ", " << p.price_max << "]";
    out.warnings.push_back(os.str());
  }
  return out;
}

EquilibriumOutcome evaluate_scheme(const MarketInstance& instance, const PriceVector& prices,
                                   ResponseMode mode) {
  if (prices.size() != instance.size()) {
    throw StructuralError("price vector not aligned with users");
  }
  if (instance.coefficients.size() != instance.size()) {
    throw StructuralError("coefficients not aligned with users");
  }
  return assemble_outcome(instance, prices, {}, mode);
}

EquilibriumOutcome evaluate_eds(const MarketInstance& instance, ResponseMode mode) {
  auto eds = eds_prices(instance);
  auto out = evaluate_scheme(instance, eds.prices, mode);
  out.warnings.insert(out.warnings.begin(), eds.warnings.begin(), eds.warnings.end());
  return out;
}

}  // namespace dpricing
