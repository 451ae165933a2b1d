#pragma once

// Reserve requirements: loan-to-deposit ratio, the piecewise LDR-linked
// requirement, the primary/secondary components, and their evolution along
// a simulated trajectory.

#include <stdexcept>
#include <vector>

#include "bankdyn/integrator.hpp"
#include "bankdyn/model.hpp"

namespace bankdyn {

struct RegulationParams {
  double lambda_l = 0.78;  // lower LDR target
  double lambda_u = 1.0;   // upper LDR target
  double gamma_l = 0.1;    // lower disincentive factor
  double gamma_u = 0.2;    // upper disincentive factor
  bool car_below_min = true;  // capital adequacy below the regulatory minimum

  void validate() const {
    if (!(lambda_l > 0.0 && lambda_l < lambda_u))
      throw std::invalid_argument("regulation: must satisfy 0 < lambda_l < lambda_u");
    if (!(gamma_l >= 0.0) || !(gamma_u >= 0.0))
      throw std::invalid_argument("regulation: gamma_l and gamma_u must be >= 0");
  }
};

// lambda = L/D
inline double ldr(double deposits, double loans) {
  if (!(deposits > 0.0))
    throw std::invalid_argument("ldr: deposits must be positive");
  return loans / deposits;
}

// LDR-linked requirement. Zero on the closed band [lambda_l, lambda_u];
// below it the shortfall is charged at gamma_l, above it the excess is
// charged at gamma_u unless capital adequacy clears the minimum.
inline double gwm_ldr(const RegulationParams& reg, double lambda, double deposits) {
  if (lambda < reg.lambda_l)
    return reg.gamma_l * (reg.lambda_l - lambda) * deposits;
  if (lambda <= reg.lambda_u) return 0.0;
  return reg.car_below_min ? reg.gamma_u * (lambda - reg.lambda_u) * deposits : 0.0;
}

struct ReserveBreakdown {
  double primary = 0.0;
  double secondary = 0.0;
  double gwm_ldr = 0.0;
  double total = 0.0;
};

inline ReserveBreakdown reserves(const ModelParams& p, const RegulationParams& reg,
                                 double deposits, double loans) {
  if (!(deposits > 0.0))
    throw std::invalid_argument("reserves: deposits must be positive");
  ReserveBreakdown out;
  out.primary = p.kappa1 * deposits;
  out.secondary = p.kappa2 * deposits;
  out.gwm_ldr = gwm_ldr(reg, loans / deposits, deposits);
  out.total = out.gwm_ldr + out.primary + out.secondary;
  return out;
}

struct ReserveRow {
  double t = 0.0;
  double lambda = 0.0;
  double gwm_ldr = 0.0;
  double primary = 0.0;
  double secondary = 0.0;
  double total = 0.0;
};

struct ReserveReport {
  std::vector<ReserveRow> rows;
  double integrated_gwm = 0.0;  // trapezoidal integral of gwm_ldr over time
};

inline ReserveReport reserve_series(const ModelParams& p, const RegulationParams& reg,
                                    const Trajectory& traj) {
  if (traj.samples.empty())
    throw std::invalid_argument("reserve_series: trajectory has no samples");
  ReserveReport report;
  report.rows.reserve(traj.samples.size());
  for (const BankState& s : traj.samples) {
    const double lambda = ldr(s.deposits, s.loans);
    const ReserveBreakdown rb = reserves(p, reg, s.deposits, s.loans);
    report.rows.push_back({s.t, lambda, rb.gwm_ldr, rb.primary, rb.secondary, rb.total});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const ReserveRow& a = report.rows[i - 1];
    const ReserveRow& b = report.rows[i];
    report.integrated_gwm += 0.5 * (a.gwm_ldr + b.gwm_ldr) * (b.t - a.t);
  }
  return report;
}

}  // namespace bankdyn
