#pragma once

// CSV emission. All numbers are written with 15 significant digits via
// std::to_chars, so output is locale-independent and byte-reproducible.

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bankdyn/integrator.hpp"
#include "bankdyn/model.hpp"
#include "bankdyn/regulation.hpp"
#include "bankdyn/scenario.hpp"

namespace bankdyn {

inline std::string format_csv(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, ptr);
}

// Per-sample series derived from a trajectory: rates, marginal profits,
// LDR and the reserve breakdown.
struct DerivedSeries {
  std::vector<double> r_deposit, r_loan, r_interbank;
  std::vector<double> alpha_d, alpha_l;
  std::vector<double> lambda, gwm, primary, secondary, total;
};

inline DerivedSeries compute_derived(const ModelParams& p, const RateSet& r,
                                     const RegulationParams& reg,
                                     const Trajectory& traj) {
  DerivedSeries d;
  const std::size_t n = traj.samples.size();
  d.r_deposit.reserve(n);
  d.r_loan.reserve(n);
  d.r_interbank.reserve(n);
  d.alpha_d.reserve(n);
  d.alpha_l.reserve(n);
  d.lambda.reserve(n);
  d.gwm.reserve(n);
  d.primary.reserve(n);
  d.secondary.reserve(n);
  d.total.reserve(n);
  for (const BankState& s : traj.samples) {
    d.r_deposit.push_back(r.deposit.value(s.t));
    d.r_loan.push_back(r.loan.value(s.t));
    d.r_interbank.push_back(r.interbank.value(s.t));
    d.alpha_d.push_back(alpha_deposit(p, r, s.deposits, s.loans, s.t));
    d.alpha_l.push_back(alpha_loan(p, r, s.deposits, s.loans, s.t));
    d.lambda.push_back(ldr(s.deposits, s.loans));
    const ReserveBreakdown rb = reserves(p, reg, s.deposits, s.loans);
    d.gwm.push_back(rb.gwm_ldr);
    d.primary.push_back(rb.primary);
    d.secondary.push_back(rb.secondary);
    d.total.push_back(rb.total);
  }
  return d;
}

inline constexpr const char* kTrajectoryCsvHeader =
    "t,D,L,r_D,r_L,r,alpha_D,alpha_L,lambda,gwm_ldr,reserve_primary,"
    "reserve_secondary,reserve_total";

inline void write_trajectory_csv(const Trajectory& traj, const DerivedSeries& d,
                                 const std::string& path) {
  if (traj.samples.empty())
    throw std::invalid_argument("write_trajectory_csv: trajectory has no samples");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kTrajectoryCsvHeader << "\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const BankState& s = traj.samples[i];
    out << format_csv(s.t) << ',' << format_csv(s.deposits) << ','
        << format_csv(s.loans) << ',' << format_csv(d.r_deposit[i]) << ','
        << format_csv(d.r_loan[i]) << ',' << format_csv(d.r_interbank[i]) << ','
        << format_csv(d.alpha_d[i]) << ',' << format_csv(d.alpha_l[i]) << ','
        << format_csv(d.lambda[i]) << ',' << format_csv(d.gwm[i]) << ','
        << format_csv(d.primary[i]) << ',' << format_csv(d.secondary[i]) << ','
        << format_csv(d.total[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_comparison_csv(const std::vector<SetComparisonRow>& table,
                                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "label,initial_ldr,gwm_a,gwm_b,gwm_diff,lambda_min_a,lambda_max_a,"
         "lambda_min_b,lambda_max_b\n";
  for (const SetComparisonRow& row : table) {
    out << row.label << ',' << format_csv(row.initial_ldr) << ','
        << format_csv(row.gwm_a) << ',' << format_csv(row.gwm_b) << ','
        << format_csv(row.gwm_diff) << ',' << format_csv(row.lambda_min_a) << ','
        << format_csv(row.lambda_max_a) << ',' << format_csv(row.lambda_min_b) << ','
        << format_csv(row.lambda_max_b) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

// One summary row per scenario of a set.
inline void write_gwm_summary_csv(const std::string& set_name,
                                  const std::vector<ScenarioResult>& results,
                                  std::ofstream& out) {
  for (const ScenarioResult& res : results) {
    out << set_name << ',' << res.label << ','
        << format_csv(ldr(res.initial.deposits, res.initial.loans)) << ',';
    if (res.reserve_report) {
      const auto range = detail::lambda_range(res);
      out << format_csv(res.reserve_report->integrated_gwm) << ','
          << format_csv(range.min) << ',' << format_csv(range.max) << ',';
    } else {
      out << "nan,nan,nan,";
    }
    out << (res.trajectory ? name(res.trajectory->termination) : "error") << '\n';
  }
}

}  // namespace bankdyn
