#include "dpricing/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dpricing/scenarios.hpp"

namespace dpricing {

namespace {

using json = nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Pulls typed fields out of a JSON object, recording one message per problem
// instead of stopping at the first.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string path, std::vector<std::string>& errors,
              std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) {
      fail("", "must be an object");
      return;
    }
    for (const auto& [key, value] : obj_.items()) {
      if (!allowed.count(key)) fail(key, "unknown field");
    }
  }

  bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

  template <typename T>
  void number(const std::string& key, T& out, bool required = false) {
    if (!has(key)) {
      if (required) fail(key, "missing required field");
      return;
    }
    const auto& v = obj_.at(key);
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) return fail(key, "must be a number");
    } else {
      if (!v.is_number_integer()) return fail(key, "must be an integer");
      if (std::is_unsigned_v<T> && !v.is_number_unsigned()) return fail(key, "must be >= 0");
    }
    out = v.get<T>();
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_string()) return fail(key, "must be a string");
    out = v.get<std::string>();
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) return fail(key, "must be true or false");
    out = v.get<bool>();
  }

  void interval(const std::string& key, std::pair<double, double>& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      return fail(key, "must be a [low, high] pair of numbers");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
    if (!(out.first > 0.0) || !(out.first <= out.second)) {
      fail(key, "must be positive with low <= high");
    }
  }

  const json& at(const std::string& key) const { return obj_.at(key); }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void fail(const std::string& key, const std::string& message) {
    const std::string where = key.empty() ? path_ : path(key);
    errors_.push_back((where.empty() ? std::string("document") : where) + ": " + message);
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
};

void read_params(const json& node, MarketParams& p, std::vector<std::string>& errors) {
  FieldReader r(node, "params", errors, {"E_r", "c_g", "C", "c_min", "c_max", "lambda", "k"});
  r.number("E_r", p.required_energy);
  r.number("c_g", p.grid_price);
  r.number("C", p.total_unit_price);
  r.number("c_min", p.price_min);
  r.number("c_max", p.price_max);
  r.number("lambda", p.lambda);
  r.number("k", p.exponent);
}

void read_users(const json& node, ConfigDocument& doc, std::vector<std::string>& errors) {
  if (!node.is_array()) {
    errors.emplace_back("users: must be an array");
    return;
  }
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string path = "users[" + std::to_string(i) + "]";
    FieldReader r(node[i], path, errors, {"id", "E", "alpha", "a", "b"});
    char fallback[32];
    std::snprintf(fallback, sizeof fallback, "eu-%02zu", i + 1);
    std::string id = fallback;
    double energy = 0.0;
    double alpha = 0.0;
    SfaCostCoefficients coeff;
    r.text("id", id);
    r.number("E", energy, true);
    r.number("alpha", alpha, true);
    r.number("a", coeff.a);
    r.number("b", coeff.b);
    doc.users.push_back(EnergyUser::make(std::move(id), energy, alpha));
    doc.coefficients.push_back(coeff);
  }
}

void read_sampling(const json& node, SamplingSpec& s, std::vector<std::string>& errors) {
  FieldReader r(node, "sampling", errors, {"n", "energy_range", "alpha_range", "seed"});
  r.number("n", s.count, true);
  r.interval("energy_range", s.energy_range);
  r.interval("alpha_range", s.alpha_range);
  r.number("seed", s.seed, true);
}

}  // namespace

ConfigDocument parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << column << ": " << e.what();
    throw ValidationError({os.str()});
  }

  ConfigDocument doc;
  std::vector<std::string> errors;
  FieldReader r(root, "", errors,
                {"scenario", "params", "users", "sampling", "mode", "tune_lambda",
                 "target_budget", "output"});
  if (!root.is_object()) throw ValidationError(std::move(errors));

  r.text("scenario", doc.scenario);
  if (r.has("params")) read_params(r.at("params"), doc.params, errors);
  if (r.has("users")) read_users(r.at("users"), doc, errors);
  if (r.has("sampling")) {
    doc.sampling.emplace();
    read_sampling(r.at("sampling"), *doc.sampling, errors);
  }
  if (r.has("users") == r.has("sampling")) {
    errors.emplace_back("users: exactly one of \"users\" or \"sampling\" is required");
  }

  std::string mode;
  r.text("mode", mode);
  if (!mode.empty()) {
    try {
      doc.mode = parse_response_mode(mode);
    } catch (const std::invalid_argument&) {
      r.fail("mode", "must be \"paper\" or \"physical\"");
    }
  }
  r.boolean("tune_lambda", doc.tune_lambda);
  if (r.has("target_budget")) {
    double budget = 0.0;
    r.number("target_budget", budget);
    doc.target_budget = budget;
  }
  if (r.has("output")) {
    FieldReader out(r.at("output"), "output", errors, {"path", "format"});
    out.text("path", doc.output_path);
    out.text("format", doc.output_format);
    if (!doc.output_format.empty() && doc.output_format != "csv" &&
        doc.output_format != "json") {
      out.fail("format", "must be \"csv\" or \"json\"");
    }
  }

  if (errors.empty()) {
    MarketInstance instance;
    try {
      instance = to_instance(doc);
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
    if (errors.empty()) {
      for (auto& v : validate(instance)) errors.push_back(std::move(v));
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return doc;
}

ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ConfigDocument& doc) {
  const auto& p = doc.params;
  json root;
  root["scenario"] = doc.scenario;
  root["params"] = {{"E_r", p.required_energy}, {"c_g", p.grid_price},
                    {"C", p.total_unit_price},  {"c_min", p.price_min},
                    {"c_max", p.price_max},     {"lambda", p.lambda},
                    {"k", p.exponent}};
  if (doc.sampling) {
    const auto& s = *doc.sampling;
    root["sampling"] = {{"n", s.count},
                        {"energy_range", {s.energy_range.first, s.energy_range.second}},
                        {"alpha_range", {s.alpha_range.first, s.alpha_range.second}},
                        {"seed", s.seed}};
  } else {
    json users = json::array();
    for (std::size_t i = 0; i < doc.users.size(); ++i) {
      const auto& u = doc.users[i];
      const auto& c = doc.coefficients[i];
      users.push_back({{"id", u.id},
                       {"E", u.available_energy},
                       {"alpha", u.inconvenience},
                       {"a", c.a},
                       {"b", c.b}});
    }
    root["users"] = std::move(users);
  }
  root["mode"] = std::string(to_string(doc.mode));
  root["tune_lambda"] = doc.tune_lambda;
  if (doc.target_budget) root["target_budget"] = *doc.target_budget;
  root["output"] = {{"path", doc.output_path}, {"format", doc.output_format}};
  return root.dump(2) + "\n";
}

MarketInstance to_instance(const ConfigDocument& doc) {
  MarketInstance instance;
  instance.params = doc.params;
  if (doc.sampling) {
    const auto& s = *doc.sampling;
    instance.users = sample_users(s.count, s.energy_range, s.alpha_range, s.seed);
    instance.coefficients.assign(instance.users.size(), SfaCostCoefficients{});
  } else {
    instance.users = doc.users;
    instance.coefficients = doc.coefficients;
  }
  return instance;
}

}  // namespace dpricing
