#pragma once

// JSON run configuration. Example:
//
//   {
//     "scenario": "custom",
//     "params": {"E_r": 650, "c_g": 50, "C": 380, "c_min": 10, "c_max": 38,
//                "lambda": 1000, "k": 2},
//     "users": [{"id": "eu-01", "E": 150, "alpha": 2, "a": 1, "b": 1}],
//     "mode": "paper",
//     "tune_lambda": false,
//     "output": {"path": "out.json", "format": "json"}
//   }
//
// Every field except the user list (or a "sampling" block in its place) is
// optional and defaults to the case-study values.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpricing/equilibrium.hpp"
#include "dpricing/market_model.hpp"

namespace dpricing {

struct SamplingSpec {
  std::size_t count = 0;
  std::pair<double, double> energy_range{50.0, 250.0};
  std::pair<double, double> alpha_range{1.0, 3.0};
  std::uint64_t seed = 0;

  bool operator==(const SamplingSpec&) const = default;
};

struct ConfigDocument {
  std::string scenario = "custom";
  MarketParams params;
  std::vector<EnergyUser> users;
  std::vector<SfaCostCoefficients> coefficients;  // aligned with users
  std::optional<SamplingSpec> sampling;
  ResponseMode mode = ResponseMode::paper;
  bool tune_lambda = false;
  std::optional<double> target_budget;  // defaults to params.total_unit_price
  std::string output_path;
  std::string output_format;  // "csv", "json" or empty

  bool operator==(const ConfigDocument&) const = default;
};

/// Parses and validates a document. Throws ValidationError listing every
/// problem found; JSON syntax errors are reported with line and column.
ConfigDocument parse_config(const std::string& text);

/// Reads `path` and parses it. Throws IoError when the file cannot be read.
ConfigDocument load_config(const std::string& path);

/// Serializes every field, so parse_config(serialize_config(d)) == d.
std::string serialize_config(const ConfigDocument& doc);

/// The market described by the document; sampled users are drawn here.
MarketInstance to_instance(const ConfigDocument& doc);

}  // namespace dpricing
