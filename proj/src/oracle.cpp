#include "dpricing/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dpricing::oracle {

namespace {

constexpr std::size_t kLevelPoints = 64;
constexpr std::size_t kShrink = 16;
constexpr std::size_t kMaxUsers = 20;

ScanResult exhaustive_min(const std::function<double(double)>& f, const ScanSpec& scan) {
  const std::size_t n = scan.intervals();
  ScanResult best{scan.point(0), f(scan.point(0)), 0};
  for (std::size_t j = 1; j <= n; ++j) {
    const double x = scan.point(j);
    const double v = f(x);
    if (v < best.value) best = {x, v, j};
  }
  return best;
}

ScanResult coarse_to_fine_min(const std::function<double(double)>& f, const ScanSpec& scan) {
  std::size_t lo = 0;
  std::size_t hi = scan.intervals();
  std::size_t stride = std::max<std::size_t>(1, (hi + kLevelPoints - 1) / kLevelPoints);

  for (;;) {
    ScanResult best{scan.point(lo), f(scan.point(lo)), lo};
    auto visit = [&](std::size_t j) {
      const double x = scan.point(j);
      const double v = f(x);
      if (v < best.value) best = {x, v, j};
    };
    for (std::size_t j = lo + stride; j < hi; j += stride) visit(j);
    if (hi != lo) visit(hi);
    if (stride == 1) return best;

    // For a unimodal sequence the grid minimizer lies strictly between the
    // sampled neighbours of the best sample.
    lo = best.index > lo + stride ? best.index - stride : lo;
    hi = std::min(hi, best.index + stride);
    stride = std::max<std::size_t>(1, stride / kShrink);
  }
}

}  // namespace

void ScanSpec::check() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw StructuralError("scan requires lower < upper");
  }
  if (!(step > 0.0)) throw StructuralError("scan step must be > 0");
  if ((upper - lower) / step > kMaxIntervals) {
    std::ostringstream os;
    os << "scan of [" << lower << ", " << upper << "] with step " << step
       << " exceeds 1e7 intervals";
    throw StructuralError(os.str());
  }
}

std::size_t ScanSpec::intervals() const {
  // The last lattice point within 1e-9 steps of `upper` is replaced by `upper` itself.
  const double span = (upper - lower) / step;
  return static_cast<std::size_t>(std::ceil(span - 1e-9));
}

double ScanSpec::point(std::size_t index) const {
  if (index >= intervals()) return upper;
  return lower + static_cast<double>(index) * step;
}

ScanResult scan_minimize(const std::function<double(double)>& f, const ScanSpec& scan,
                         ScanStrategy strategy) {
  scan.check();
  return strategy == ScanStrategy::exhaustive ? exhaustive_min(f, scan)
                                              : coarse_to_fine_min(f, scan);
}

ScanResult scan_maximize(const std::function<double(double)>& f, const ScanSpec& scan,
                         ScanStrategy strategy) {
  auto r = scan_minimize([&f](double x) { return -f(x); }, scan, strategy);
  r.value = -r.value;
  return r;
}

ScanSpec response_scan(const EnergyUser& user, double step) {
  return ScanSpec{0.0, 3.0 * user.available_energy, step};
}

ScanSpec price_scan(const MarketParams& params, double step) {
  return ScanSpec{params.price_min, params.price_max, step};
}

double best_response_oracle(double price, const EnergyUser& user, const ScanSpec& scan) {
  if (scan.lower > 0.0 || scan.upper < 3.0 * user.available_energy) {
    throw StructuralError("response scan must cover [0, 3E]");
  }
  return scan_maximize([&](double e) { return utility(e, price, user); }, scan).argument;
}

double refined_response_oracle(double price, const EnergyUser& user, double step) {
  const ScanSpec scan = response_scan(user, step);
  auto u = [&](double e) { return utility(e, price, user); };
  const ScanResult peak = scan_maximize(u, scan, ScanStrategy::coarse_to_fine);

  const double x = peak.argument;
  const double half_width = std::min({1.0, x - scan.lower, scan.upper - x});
  if (half_width < step) return x;
  const double left = u(x - half_width);
  const double right = u(x + half_width);
  const double curvature = left - 2.0 * peak.value + right;
  if (!(curvature < 0.0)) return x;
  return x + half_width * (left - right) / (2.0 * curvature);
}

double stage1_objective_oracle(double price, const EnergyUser& user,
                               const SfaCostCoefficients& coeff, const MarketParams& params) {
  const double e = refined_response_oracle(price, user);
  double powered = 1.0;
  for (int i = 0; i < params.exponent; ++i) powered *= price;
  return e * powered + coeff.a * price + coeff.b - params.grid_price * e - params.lambda * price;
}

double stage1_price_oracle(const EnergyUser& user, const SfaCostCoefficients& coeff,
                           const MarketParams& params, const ScanSpec& scan) {
  if (params.price_min == params.price_max) return params.price_min;
  if (scan.lower > params.price_min || scan.upper < params.price_max) {
    throw StructuralError("price scan must cover [price_min, price_max]");
  }
  return scan_minimize(
             [&](double c) { return stage1_objective_oracle(c, user, coeff, params); }, scan,
             ScanStrategy::coarse_to_fine)
      .argument;
}

Derivatives finite_difference(const std::function<double(double)>& f, double x, double h) {
  if (!(h > 0.0)) throw DomainError("finite difference step must be > 0");
  const double fp = f(x + h);
  const double f0 = f(x);
  const double fm = f(x - h);
  return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

EquilibriumOutcome spe_oracle(const MarketInstance& instance, double price_step) {
  require_valid(instance);
  const std::size_t n = instance.size();
  if (n > kMaxUsers) throw StructuralError("spe_oracle supports at most 20 users");

  const auto& p = instance.params;
  EquilibriumOutcome out;
  out.mode = ResponseMode::paper;
  out.lambda = p.lambda;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& user = instance.users[i];
    const auto& coeff = instance.coefficients[i];
    ClampFlag flag = ClampFlag::interior;
    double price = p.price_min;
    if (p.price_min == p.price_max) {
      auto objective = [&](double c) { return stage1_objective_oracle(c, user, coeff, p); };
      const double slope = finite_difference(objective, price, 1e-3).first;
      flag = slope > 0.0 ? ClampFlag::lower : ClampFlag::upper;
    } else {
      const ScanSpec scan = price_scan(p, price_step);
      price = stage1_price_oracle(user, coeff, p, scan);
      if (price == p.price_min) flag = ClampFlag::lower;
      if (price == p.price_max) flag = ClampFlag::upper;
    }
    const double e = refined_response_oracle(price, user);
    out.prices.push_back(price);
    out.clamp_flags.push_back(flag);
    out.quantities.push_back(e);
    out.utilities.push_back(utility(e, price, user));
    out.budget_used += price;
  }

  const SfaCost cost = sfa_cost(out.quantities, out.prices, instance);
  out.total_cost = cost.total;
  out.grid_purchase = p.required_energy;
  for (double e : out.quantities) out.grid_purchase -= e;
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

SuiteReport run_suite(const SuiteConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> energy_dist(config.energy_lo, config.energy_hi);
  std::uniform_real_distribution<double> alpha_dist(config.alpha_lo, config.alpha_hi);
  std::uniform_real_distribution<double> lambda_dist(config.lambda_lo, config.lambda_hi);

  SuiteReport report;
  report.trials = config.trials;
  report.seed = config.seed;

  const SfaCostCoefficients coeff{1.0, 1.0};
  for (int t = 0; t < config.trials; ++t) {
    const double energy = energy_dist(rng);
    const double alpha = alpha_dist(rng);
    MarketParams params;
    params.lambda = lambda_dist(rng);
    const EnergyUser user = EnergyUser::make("trial-" + std::to_string(t), energy, alpha);

    const double raw = stage1_price_unclamped(user, coeff, params);
    const double residual = 3.0 * raw * raw + 2.0 * energy * raw +
                            2.0 * alpha * (coeff.a - params.lambda) - params.grid_price;
    report.max_quadratic_residual = std::max(report.max_quadratic_residual, std::abs(residual));

    const double price = stage1_price(user, coeff, params).price;
    const double scanned = stage1_price_oracle(user, coeff, params, price_scan(params, config.price_step));
    const double price_dev = std::abs(price - scanned);
    report.max_price_deviation = std::max(report.max_price_deviation, price_dev);
    if (price_dev > config.price_step) ++report.price_violations;

    const double response = best_response(price, user);
    const double scanned_response =
        best_response_oracle(price, user, response_scan(user, config.response_step));
    const double response_dev = std::abs(response - scanned_response);
    report.max_response_deviation = std::max(report.max_response_deviation, response_dev);
    if (response_dev > config.response_step) ++report.response_violations;
  }
  return report;
}

}  // namespace dpricing::oracle
