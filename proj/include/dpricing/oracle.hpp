#pragma once

// Brute-force verification of the equilibrium solver. Everything here works
// from the raw utility and cost definitions by grid search and finite
// differences; nothing calls into the closed-form solver.

#include <cstdint>
#include <functional>

#include "dpricing/equilibrium.hpp"
#include "dpricing/market_model.hpp"

namespace dpricing::oracle {

/// Uniform grid lower, lower + step, ..., with `upper` always included as the last point.
struct ScanSpec {
  double lower = 0.0;
  double upper = 1.0;
  double step = 1e-3;

  static constexpr double kMaxIntervals = 1e7;

  /// Throws StructuralError unless lower < upper, step > 0 and the grid has at most 1e7 intervals.
  void check() const;
  std::size_t intervals() const;
  double point(std::size_t index) const;
};

enum class ScanStrategy {
  exhaustive,
  // Sub-lattice passes that narrow onto the best point. Exact on the same grid
  // as `exhaustive` when the function is strictly unimodal over the scan.
  coarse_to_fine,
};

struct ScanResult {
  double argument = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

/// Grid argmin; ties go to the smaller argument.
ScanResult scan_minimize(const std::function<double(double)>& f, const ScanSpec& scan,
                         ScanStrategy strategy = ScanStrategy::exhaustive);

/// Grid argmax; ties go to the smaller argument.
ScanResult scan_maximize(const std::function<double(double)>& f, const ScanSpec& scan,
                         ScanStrategy strategy = ScanStrategy::exhaustive);

/// Scan [0, 3 E] with the given step, the default range for follower responses.
ScanSpec response_scan(const EnergyUser& user, double step = 1e-3);

/// Scan exactly [price_min, price_max]. The box must not be pinned.
ScanSpec price_scan(const MarketParams& params, double step = 1e-4);

/// Grid argmax of the follower utility, by exhaustive scan.
double best_response_oracle(double price, const EnergyUser& user, const ScanSpec& scan);

/// Grid argmax of the follower utility on response_scan(user, step) followed
/// by a three-point quadratic fit around it. Used where the nested leader
/// scan needs responses well below the grid step.
double refined_response_oracle(double price, const EnergyUser& user, double step = 1e-3);

/// Per-user leader term e(c) c^k + a c + b - c_g e(c) - lambda c with e(c)
/// from refined_response_oracle.
double stage1_objective_oracle(double price, const EnergyUser& user,
                               const SfaCostCoefficients& coeff, const MarketParams& params);

/// Grid argmin of stage1_objective_oracle over the price box. A pinned box
/// (price_min == price_max) returns that price without scanning.
double stage1_price_oracle(const EnergyUser& user, const SfaCostCoefficients& coeff,
                           const MarketParams& params, const ScanSpec& scan);

struct Derivatives {
  double first = 0.0;
  double second = 0.0;
};

/// Central differences (f(x+h) - f(x-h)) / 2h and (f(x+h) - 2 f(x) + f(x-h)) / h^2.
Derivatives finite_difference(const std::function<double(double)>& f, double x, double h);

/// Backward induction by scanning: per-user oracle prices on a grid of
/// `price_step`, then refined oracle responses. At most 20 users.
EquilibriumOutcome spe_oracle(const MarketInstance& instance, double price_step = 1e-4);

struct SuiteConfig {
  int trials = 1000;
  std::uint64_t seed = 7;
  double energy_lo = 50.0;
  double energy_hi = 250.0;
  double alpha_lo = 0.5;
  double alpha_hi = 3.0;
  double lambda_lo = 500.0;
  double lambda_hi = 5000.0;
  double price_step = 1e-4;
  double response_step = 1e-3;
};

struct SuiteReport {
  int trials = 0;
  std::uint64_t seed = 0;
  double max_price_deviation = 0.0;
  double max_response_deviation = 0.0;
  double max_quadratic_residual = 0.0;  // over unclamped closed-form outputs
  int price_violations = 0;
  int response_violations = 0;

  bool passed(double price_tol, double response_tol) const {
    return max_price_deviation <= price_tol && max_response_deviation <= response_tol;
  }
};

/// Random single-user markets (a = b = 1, c_g = 50, box [10, 38]) comparing
/// the closed-form solver against the scans above.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace dpricing::oracle
