#pragma once

// Scenario machinery: labelled initial-value sets sharing a deposit volume
// across a grid of loan-to-deposit ratios, sweep execution with per-scenario
// error isolation, a demand-slope behavior diagnosis, and cross-set
// comparison of the integrated LDR requirement.

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bankdyn/integrator.hpp"
#include "bankdyn/model.hpp"
#include "bankdyn/regulation.hpp"

namespace bankdyn {

// An increment series with no variance has no defined correlation.
class ZeroVarianceError : public std::runtime_error {
 public:
  explicit ZeroVarianceError(const std::string& series)
      : std::runtime_error("zero-variance increment series: " + series) {}
};

struct ScenarioSet {
  std::string name;
  double d0 = 0.0;                  // shared initial deposit volume
  std::vector<double> ratios;       // initial L/D values, strictly increasing
  std::vector<std::string> labels;  // "A", "B", ... in ratio order
};

inline ScenarioSet build_set(std::string name, double d0, std::vector<double> ratios) {
  if (!(d0 > 0.0)) throw std::invalid_argument("build_set: d0 must be positive");
  if (ratios.empty()) throw std::invalid_argument("build_set: ratios must be non-empty");
  if (ratios.size() > 26)
    throw std::invalid_argument("build_set: at most 26 ratios (labels A-Z)");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0))
      throw std::invalid_argument("build_set: ratios must be positive");
    if (i > 0 && !(ratios[i] > ratios[i - 1]))
      throw std::invalid_argument("build_set: ratios must be strictly increasing");
  }
  ScenarioSet set{std::move(name), d0, std::move(ratios), {}};
  set.labels.reserve(set.ratios.size());
  for (std::size_t i = 0; i < set.ratios.size(); ++i)
    set.labels.emplace_back(1, static_cast<char>('A' + i));
  return set;
}

struct BehaviorDiagnosis {
  double loan_corr = 0.0;     // corr of per-step loan and loan-rate changes
  double deposit_corr = 0.0;  // corr of per-step deposit and deposit-rate changes
  bool loan_ok = false;       // loan_corr < -theta
  bool deposit_ok = false;    // deposit_corr > +theta
  bool valid = false;         // both flags hold
};

namespace detail {

inline double pearson(const std::vector<double>& x, const std::vector<double>& y,
                      const char* x_name, const char* y_name) {
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw ZeroVarianceError(x_name);
  if (syy == 0.0) throw ZeroVarianceError(y_name);
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace detail

// Checks the demand slopes over a run: loan volume should move against the
// loan rate and deposit volume with the deposit rate. Judged by Pearson
// correlation of the per-step increments against the threshold theta.
inline BehaviorDiagnosis diagnose_behavior(const Trajectory& traj, const RateSet& rates,
                                           double theta = 0.5) {
  const auto& s = traj.samples;
  if (s.size() < 3)
    throw std::invalid_argument("diagnose_behavior: need at least 3 samples");
  std::vector<double> d_loans(s.size() - 1), d_loan_rate(s.size() - 1);
  std::vector<double> d_deposits(s.size() - 1), d_deposit_rate(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    d_loans[i] = s[i + 1].loans - s[i].loans;
    d_deposits[i] = s[i + 1].deposits - s[i].deposits;
    d_loan_rate[i] = rates.loan.value(s[i + 1].t) - rates.loan.value(s[i].t);
    d_deposit_rate[i] = rates.deposit.value(s[i + 1].t) - rates.deposit.value(s[i].t);
  }
  BehaviorDiagnosis diag;
  diag.loan_corr = detail::pearson(d_loans, d_loan_rate, "loan increments",
                                   "loan-rate increments");
  diag.deposit_corr = detail::pearson(d_deposits, d_deposit_rate,
                                      "deposit increments", "deposit-rate increments");
  diag.loan_ok = diag.loan_corr < -theta;
  diag.deposit_ok = diag.deposit_corr > theta;
  diag.valid = diag.loan_ok && diag.deposit_ok;
  return diag;
}

struct ScenarioResult {
  std::string label;
  BankState initial;
  std::optional<int> region;  // region at t = 0, absent for on-locus starts
  std::optional<Trajectory> trajectory;
  std::optional<ReserveReport> reserve_report;
  std::optional<BehaviorDiagnosis> diagnosis;
  std::vector<std::string> errors;  // per-stage failures, scenario kept
};

namespace detail {

inline ScenarioResult run_scenario(const ModelParams& p, const RateSet& r,
                                   const RegulationParams& reg, const std::string& label,
                                   double d0, double ratio, const IntegratorConfig& cfg,
                                   double theta) {
  ScenarioResult res;
  res.label = label;
  res.initial = {0.0, d0, ratio * d0};
  try {
    const LocusPair loci = singularity_loci(p, r);
    res.region = classify_region(loci, res.initial.deposits, res.initial.loans,
                                 res.initial.t, cfg.singular_eps);
  } catch (const std::exception& e) {
    res.errors.emplace_back(std::string("region: ") + e.what());
    return res;
  }
  try {
    res.trajectory = integrate(p, r, res.initial, cfg);
  } catch (const std::exception& e) {
    res.errors.emplace_back(std::string("integrate: ") + e.what());
    return res;
  }
  try {
    res.reserve_report = reserve_series(p, reg, *res.trajectory);
  } catch (const std::exception& e) {
    res.errors.emplace_back(std::string("reserves: ") + e.what());
  }
  try {
    res.diagnosis = diagnose_behavior(*res.trajectory, r, theta);
  } catch (const std::exception& e) {
    res.errors.emplace_back(std::string("diagnosis: ") + e.what());
  }
  return res;
}

}  // namespace detail

// Runs every scenario of the set. Scenarios are independent and execute
// concurrently; results come back in label order and per-scenario failures
// are recorded in the result instead of aborting the sweep.
inline std::vector<ScenarioResult> run_set(const ModelParams& p, const RateSet& r,
                                           const RegulationParams& reg,
                                           const ScenarioSet& set,
                                           const IntegratorConfig& cfg,
                                           double theta = 0.5) {
  std::vector<std::future<ScenarioResult>> futures;
  futures.reserve(set.ratios.size());
  for (std::size_t i = 0; i < set.ratios.size(); ++i) {
    futures.push_back(std::async(std::launch::async, detail::run_scenario, p, r, reg,
                                 set.labels[i], set.d0, set.ratios[i], cfg, theta));
  }
  std::vector<ScenarioResult> results;
  results.reserve(futures.size());
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

struct SetComparisonRow {
  std::string label;
  double initial_ldr = 0.0;
  double gwm_a = 0.0;  // integrated LDR requirement in the first set
  double gwm_b = 0.0;  // and in the second
  double gwm_diff = 0.0;  // gwm_b - gwm_a
  double lambda_min_a = 0.0, lambda_max_a = 0.0;
  double lambda_min_b = 0.0, lambda_max_b = 0.0;
};

namespace detail {

struct LambdaRange {
  double min, max;
};

inline LambdaRange lambda_range(const ScenarioResult& res) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (!res.reserve_report || res.reserve_report->rows.empty()) return {nan, nan};
  double lo = res.reserve_report->rows.front().lambda;
  double hi = lo;
  for (const ReserveRow& row : res.reserve_report->rows) {
    lo = std::min(lo, row.lambda);
    hi = std::max(hi, row.lambda);
  }
  return {lo, hi};
}

}  // namespace detail

// Per shared label: the common initial LDR, the integrated LDR requirement
// of each run, their difference, and the lambda range covered by each run.
inline std::vector<SetComparisonRow> compare_sets(const std::vector<ScenarioResult>& a,
                                                  const std::vector<ScenarioResult>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("compare_sets: result lists differ in size");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SetComparisonRow> table;
  table.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label)
      throw std::invalid_argument("compare_sets: label mismatch at position " +
                                  std::to_string(i) + ": " + a[i].label + " vs " +
                                  b[i].label);
    SetComparisonRow row;
    row.label = a[i].label;
    row.initial_ldr = ldr(a[i].initial.deposits, a[i].initial.loans);
    row.gwm_a = a[i].reserve_report ? a[i].reserve_report->integrated_gwm : nan;
    row.gwm_b = b[i].reserve_report ? b[i].reserve_report->integrated_gwm : nan;
    row.gwm_diff = row.gwm_b - row.gwm_a;
    const auto ra = detail::lambda_range(a[i]);
    const auto rb = detail::lambda_range(b[i]);
    row.lambda_min_a = ra.min;
    row.lambda_max_a = ra.max;
    row.lambda_min_b = rb.min;
    row.lambda_max_b = rb.max;
    table.push_back(row);
  }
  return table;
}

}  // namespace bankdyn
