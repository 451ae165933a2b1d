#pragma once

// Sectioned key-value configuration: parsing with line-numbered errors,
// invariant validation, defaults for every key, and an exact-round-trip
// serializer.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bankdyn/integrator.hpp"
#include "bankdyn/model.hpp"
#include "bankdyn/regulation.hpp"
#include "bankdyn/scenario.hpp"

namespace bankdyn {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  ConfigError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

// ratio values lo, lo+step, ..., up to hi (inclusive within rounding slack)
inline std::vector<double> ratio_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw std::invalid_argument("ratio grid: need step > 0 and max >= min");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-9 * step) break;
    out.push_back(v);
    if (out.size() > 26) throw std::invalid_argument("ratio grid: more than 26 values");
  }
  return out;
}

struct ScenarioConfig {
  std::vector<double> d0 = {0.7, 6.0, 10.0};
  std::vector<double> ratios = ratio_grid(0.2, 2.0, 0.2);
  double theta = 0.5;  // correlation threshold for the behavior diagnosis
};

struct RunConfig {
  ModelParams params;
  RateSet rates;
  RegulationParams regulation;
  IntegratorConfig integrator;
  ScenarioConfig scenario;

  void validate() const {
    params.validate();
    regulation.validate();
    integrator.validate();
    if (scenario.d0.empty())
      throw std::invalid_argument("scenario: d0 must list at least one value");
    for (const double v : scenario.d0)
      if (!(v > 0.0)) throw std::invalid_argument("scenario: d0 values must be positive");
    build_set("check", scenario.d0.front(), scenario.ratios);  // ratio invariants
    if (!(scenario.theta >= 0.0 && scenario.theta <= 1.0))
      throw std::invalid_argument("scenario: theta must lie in [0, 1]");
  }
};

// One ScenarioSet per configured d0, named set1, set2, ...
inline std::vector<ScenarioSet> build_sets(const ScenarioConfig& sc) {
  std::vector<ScenarioSet> sets;
  sets.reserve(sc.d0.size());
  for (std::size_t i = 0; i < sc.d0.size(); ++i)
    sets.push_back(build_set("set" + std::to_string(i + 1), sc.d0[i], sc.ratios));
  return sets;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view v, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(line, "expected a number, got '" + std::string(v) + "'");
  return out;
}

inline bool parse_bool(std::string_view v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(line, "expected true or false, got '" + std::string(v) + "'");
}

inline std::vector<double> parse_list(std::string_view v, int line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const std::size_t comma = v.find(',', start);
    const std::string_view item =
        trim(v.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (item.empty()) throw ConfigError(line, "empty list element");
    out.push_back(parse_double(item, line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError(line, "expected a comma-separated list");
  return out;
}

inline EventPolicy parse_policy(std::string_view v, int line) {
  if (v == "terminate-on-event") return EventPolicy::terminate_on_event;
  if (v == "annotate-and-continue") return EventPolicy::annotate_and_continue;
  throw ConfigError(line, "event_policy must be terminate-on-event or annotate-and-continue");
}

// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  bool have_ratios = false;
  bool have_grid = false;
  double grid_min = 0.0, grid_max = 0.0, grid_step = 0.0;
  int grid_line = 0;

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(line_no, "unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "params" && section != "rates.deposit" && section != "rates.loan" &&
          section != "rates.interbank" && section != "regulation" &&
          section != "integrator" && section != "scenario")
        throw ConfigError(line_no, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    if (section.empty())
      throw ConfigError(line_no, "key '" + key + "' outside any section");

    const auto num = [&] { return detail::parse_double(value, line_no); };

    bool known = true;
    if (section == "params") {
      if (key == "kappa1") cfg.params.kappa1 = num();
      else if (key == "kappa2") cfg.params.kappa2 = num();
      else if (key == "delta") cfg.params.delta = num();
      else if (key == "gamma") cfg.params.gamma = num();
      else if (key == "r_b") cfg.params.r_b = num();
      else if (key == "r_r2") cfg.params.r_r2 = num();
      else if (key == "k") cfg.params.k = num();
      else if (key == "b") cfg.params.b = num();
      else if (key == "g") cfg.params.g = num();
      else known = false;
    } else if (section.rfind("rates.", 0) == 0) {
      SinusoidalRate& rate = section == "rates.deposit" ? cfg.rates.deposit
                             : section == "rates.loan"  ? cfg.rates.loan
                                                        : cfg.rates.interbank;
      if (key == "mean") rate.mean = num();
      else if (key == "sin_amp") rate.sin_amp = num();
      else if (key == "cos_amp") rate.cos_amp = num();
      else if (key == "freq") rate.freq = num();
      else known = false;
    } else if (section == "regulation") {
      if (key == "lambda_l") cfg.regulation.lambda_l = num();
      else if (key == "lambda_u") cfg.regulation.lambda_u = num();
      else if (key == "gamma_l") cfg.regulation.gamma_l = num();
      else if (key == "gamma_u") cfg.regulation.gamma_u = num();
      else if (key == "car_below_min")
        cfg.regulation.car_below_min = detail::parse_bool(value, line_no);
      else known = false;
    } else if (section == "integrator") {
      if (key == "t_end") cfg.integrator.t_end = num();
      else if (key == "dt") cfg.integrator.dt = num();
      else if (key == "singular_eps") cfg.integrator.singular_eps = num();
      else if (key == "max_state") cfg.integrator.max_state = num();
      else if (key == "event_policy")
        cfg.integrator.event_policy = detail::parse_policy(value, line_no);
      else known = false;
    } else {  // scenario
      if (key == "d0") cfg.scenario.d0 = detail::parse_list(value, line_no);
      else if (key == "ratios") {
        cfg.scenario.ratios = detail::parse_list(value, line_no);
        have_ratios = true;
      } else if (key == "ratio_min" || key == "ratio_max" || key == "ratio_step") {
        have_grid = true;
        grid_line = line_no;
        (key == "ratio_min" ? grid_min : key == "ratio_max" ? grid_max : grid_step) = num();
      } else if (key == "theta") cfg.scenario.theta = num();
      else known = false;
    }
    if (!known)
      throw ConfigError(line_no, "unknown key '" + key + "' in section [" + section + "]");
  }

  if (have_ratios && have_grid)
    throw ConfigError(grid_line, "give either ratios or a ratio_min/max/step grid, not both");
  if (have_grid) {
    if (!(grid_step > 0.0) || !(grid_max >= grid_min) || !(grid_min > 0.0))
      throw ConfigError(grid_line, "ratio grid needs 0 < ratio_min <= ratio_max and ratio_step > 0");
    cfg.scenario.ratios = ratio_grid(grid_min, grid_max, grid_step);
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// Effective configuration as config-file text; re-parsing it reproduces
// the exact same values.
inline std::string serialize_config(const RunConfig& cfg) {
  using detail::format_exact;
  std::ostringstream out;
  const auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) s += ", ";
      s += format_exact(v[i]);
    }
    return s;
  };
  const auto rate = [&](const char* section, const SinusoidalRate& r) {
    out << "[" << section << "]\n"
        << "mean = " << format_exact(r.mean) << "\n"
        << "sin_amp = " << format_exact(r.sin_amp) << "\n"
        << "cos_amp = " << format_exact(r.cos_amp) << "\n"
        << "freq = " << format_exact(r.freq) << "\n\n";
  };

  out << "[params]\n"
      << "kappa1 = " << format_exact(cfg.params.kappa1) << "\n"
      << "kappa2 = " << format_exact(cfg.params.kappa2) << "\n"
      << "delta = " << format_exact(cfg.params.delta) << "\n"
      << "gamma = " << format_exact(cfg.params.gamma) << "\n"
      << "r_b = " << format_exact(cfg.params.r_b) << "\n"
      << "r_r2 = " << format_exact(cfg.params.r_r2) << "\n"
      << "k = " << format_exact(cfg.params.k) << "\n"
      << "b = " << format_exact(cfg.params.b) << "\n"
      << "g = " << format_exact(cfg.params.g) << "\n\n";
  rate("rates.deposit", cfg.rates.deposit);
  rate("rates.loan", cfg.rates.loan);
  rate("rates.interbank", cfg.rates.interbank);
  out << "[regulation]\n"
      << "lambda_l = " << format_exact(cfg.regulation.lambda_l) << "\n"
      << "lambda_u = " << format_exact(cfg.regulation.lambda_u) << "\n"
      << "gamma_l = " << format_exact(cfg.regulation.gamma_l) << "\n"
      << "gamma_u = " << format_exact(cfg.regulation.gamma_u) << "\n"
      << "car_below_min = " << (cfg.regulation.car_below_min ? "true" : "false") << "\n\n";
  out << "[integrator]\n"
      << "t_end = " << format_exact(cfg.integrator.t_end) << "\n"
      << "dt = " << format_exact(cfg.integrator.dt) << "\n"
      << "singular_eps = " << format_exact(cfg.integrator.singular_eps) << "\n"
      << "max_state = " << format_exact(cfg.integrator.max_state) << "\n"
      << "event_policy = "
      << (cfg.integrator.event_policy == EventPolicy::terminate_on_event
              ? "terminate-on-event"
              : "annotate-and-continue")
      << "\n\n";
  out << "[scenario]\n"
      << "d0 = " << list(cfg.scenario.d0) << "\n"
      << "ratios = " << list(cfg.scenario.ratios) << "\n"
      << "theta = " << format_exact(cfg.scenario.theta) << "\n";
  return out.str();
}

}  // namespace bankdyn
