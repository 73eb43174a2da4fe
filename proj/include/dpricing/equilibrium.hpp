#pragma once

// Sub-game perfect equilibrium of the two-stage pricing game, solved by
// backward induction: follower best responses first, then the leader's
// per-user prices given those responses.

#include <string>
#include <string_view>
#include <vector>

#include "dpricing/market_model.hpp"

namespace dpricing {

/// `paper` uses the uncapped response (c + E) / (2 alpha); `physical` also caps it to [0, E].
enum class ResponseMode { paper, physical };

/// Where the leader's price landed relative to the box [price_min, price_max].
enum class ClampFlag { lower, interior, upper };

std::string_view to_string(ResponseMode mode);
std::string_view to_string(ClampFlag flag);
ResponseMode parse_response_mode(std::string_view text);
ClampFlag parse_clamp_flag(std::string_view text);

struct PriceChoice {
  double price = 0.0;
  ClampFlag flag = ClampFlag::interior;
};

struct EquilibriumOutcome {
  PriceVector prices;
  EnergyVector quantities;
  std::vector<double> utilities;  // cents
  double total_cost = 0.0;        // cents
  double grid_purchase = 0.0;     // kWh, E_r - sum of quantities
  double budget_used = 0.0;       // cents/kWh, sum of prices
  std::vector<ClampFlag> clamp_flags;
  std::vector<std::string> warnings;
  ResponseMode mode = ResponseMode::paper;
  double lambda = 0.0;

  bool operator==(const EquilibriumOutcome&) const = default;
};

/// Follower's utility-maximizing supply at price `price`.
double best_response(double price, const EnergyUser& user, ResponseMode mode = ResponseMode::paper);

/// Positive root of 3c^2 + 2Ec + 2 alpha (a - lambda) - c_g = 0.
///
/// Requires params.exponent == 2. Throws InfeasibleError when the discriminant
/// is negative, which can only happen when lambda does not exceed a.
double stage1_price_unclamped(const EnergyUser& user, const SfaCostCoefficients& coeff,
                              const MarketParams& params);

/// Closed-form price projected onto [price_min, price_max].
PriceChoice stage1_price(const EnergyUser& user, const SfaCostCoefficients& coeff,
                         const MarketParams& params);

/// Projects `raw` onto the price box. A value exactly on a bound counts as interior.
PriceChoice clamp_price(double raw, const MarketParams& params);

/// Stationarity residual of the per-user leader term for exponent k:
/// (k+1) c^k / (2 alpha) + k E c^(k-1) / (2 alpha) + a - c_g / (2 alpha) - lambda.
double stationarity_residual(double price, const EnergyUser& user,
                             const SfaCostCoefficients& coeff, const MarketParams& params);

/// Root of stationarity_residual for any exponent k >= 1, found by bracketing
/// and bisection (absolute tolerance 1e-9, at most 200 iterations), then clamped.
PriceChoice stage1_price_general_k(const EnergyUser& user, const SfaCostCoefficients& coeff,
                                   const MarketParams& params);

/// Builds the outcome record for a given price profile: responses, utilities,
/// leader cost, grid purchase, budget use and warnings.
EquilibriumOutcome assemble_outcome(const MarketInstance& instance, const PriceVector& prices,
                                    std::vector<ClampFlag> flags, ResponseMode mode);

/// Solves the game for a validated instance. Throws ValidationError or InfeasibleError.
EquilibriumOutcome solve_spe(const MarketInstance& instance,
                             ResponseMode mode = ResponseMode::paper);

struct LambdaTuning {
  double lambda = 0.0;
  bool adjusted = false;
  int iterations = 0;
  EquilibriumOutcome outcome;
};

/// Lowers lambda until the equilibrium prices fit `target_budget`.
///
/// The sum of prices is nondecreasing in lambda, so if the configured lambda
/// already satisfies the budget it is returned unchanged; otherwise lambda is
/// bisected until the sum is within 1e-6 of the budget (from below) or all
/// prices sit on clamps. Throws InfeasibleError if target_budget < N * price_min.
LambdaTuning tune_lambda(const MarketInstance& instance, double target_budget,
                         ResponseMode mode = ResponseMode::paper);

}  // namespace dpricing
