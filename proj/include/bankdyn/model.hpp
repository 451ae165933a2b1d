#pragma once

// Core bank model: sinusoidal market rates, the cost structure, balance
// sheet, profit in structural and reduced form, the deposit/loan vector
// field, its singularity loci and the region layout those loci induce.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace bankdyn {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Denominators below this magnitude count as singular.
inline constexpr double kDefaultSingularEps = 1e-9;

enum class Denominator { deposit, loan };

inline const char* name(Denominator which) {
  return which == Denominator::deposit ? "deposit" : "loan";
}

// A marginal-profit denominator came within singular_eps of zero.
class SingularError : public std::runtime_error {
 public:
  SingularError(Denominator which, double alpha, double t)
      : std::runtime_error(std::string("singular ") + name(which) +
                           " denominator at t=" + std::to_string(t)),
        which_(which),
        alpha_(alpha),
        t_(t) {}

  Denominator which() const noexcept { return which_; }
  double alpha() const noexcept { return alpha_; }
  double time() const noexcept { return t_; }

 private:
  Denominator which_;
  double alpha_;
  double t_;
};

// A state sits on a singularity locus, where region classification and
// the vector field are undefined.
class OnLocusError : public std::runtime_error {
 public:
  OnLocusError(Denominator which, double t)
      : std::runtime_error(std::string("state lies on the ") + name(which) +
                           " locus at t=" + std::to_string(t)),
        which_(which) {}

  Denominator which() const noexcept { return which_; }

 private:
  Denominator which_;
};

// Structural constants of the bank. The defaults are the reference
// configuration used throughout the tests and the CLI.
struct ModelParams {
  double kappa1 = 0.08;   // primary reserve fraction of deposits
  double kappa2 = 0.025;  // secondary reserve fraction of deposits
  double delta = 0.04;    // Treasury-bill fraction of deposits
  double gamma = 0.08;    // equity as a fraction of loans
  double r_b = 0.065;     // Treasury-bill rate
  double r_r2 = 0.05;     // secondary-reserve rate
  double k = 0.01;        // cost curvature
  double b = 1.0;         // deposit-volume sensitivity dD/dr_D
  double g = -1.0;        // loan-volume sensitivity dL/dr_L

  // Share of each deposit unit left for the interbank market.
  double interbank_share() const { return 1.0 - kappa1 - kappa2 - delta; }

  void validate() const {
    if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0) || !(delta >= 0.0))
      throw std::invalid_argument("params: kappa1, kappa2 and delta must be >= 0");
    if (!(kappa1 + kappa2 + delta < 1.0))
      throw std::invalid_argument("params: kappa1 + kappa2 + delta must be < 1");
    if (!(b > 0.0 && b <= 1.0))
      throw std::invalid_argument("params: b must satisfy 0 < b <= 1");
    if (!(g >= -1.0 && g < 0.0))
      throw std::invalid_argument("params: g must satisfy -1 <= g < 0");
    if (!(k > 0.0)) throw std::invalid_argument("params: k must be > 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("params: gamma must be >= 0");
  }
};

// value(t) = mean + sin_amp*sin(2*pi*freq*t) + cos_amp*cos(2*pi*freq*t)
struct SinusoidalRate {
  double mean = 0.0;
  double sin_amp = 0.0;
  double cos_amp = 0.0;
  double freq = 1.0;  // cycles per unit time

  double value(double t) const {
    const double w = kTwoPi * freq * t;
    return mean + sin_amp * std::sin(w) + cos_amp * std::cos(w);
  }

  // Exact analytic derivative of value(t).
  double derivative(double t) const {
    const double w = kTwoPi * freq * t;
    return kTwoPi * freq * (sin_amp * std::cos(w) - cos_amp * std::sin(w));
  }
};

// The three market rates driving the system: deposit 4% +/- 2%, loan
// 11% +/- 3%, interbank 6% +/- 1%, all on a one-year cycle by default.
struct RateSet {
  SinusoidalRate deposit{0.04, 0.02, 0.0, 1.0};
  SinusoidalRate loan{0.11, 0.0, 0.03, 1.0};
  SinusoidalRate interbank{0.06, 0.01, 0.0, 1.0};
};

struct BankState {
  double t = 0.0;         // time in years
  double deposits = 0.0;  // D, currency units
  double loans = 0.0;     // L, currency units
};

struct BalanceSheet {
  double deposits = 0.0;
  double loans = 0.0;
  double interbank = 0.0;          // net interbank position
  double reserve_primary = 0.0;    // kappa1 * D
  double reserve_secondary = 0.0;  // kappa2 * D
  double treasury = 0.0;           // delta * D
  double equity = 0.0;             // gamma * L
};

// C(D, L) = k*D*L + k*L^2/2 + k*D^2/2, i.e. k*(D+L)^2/2.
inline double cost(const ModelParams& p, double deposits, double loans) {
  return p.k * deposits * loans + 0.5 * p.k * loans * loans +
         0.5 * p.k * deposits * deposits;
}

// dC/dD = dC/dL = k*(D+L); the cost is symmetric in its two arguments.
inline double cost_marginal(const ModelParams& p, double deposits, double loans) {
  return p.k * (deposits + loans);
}

// M = (1 - kappa1 - kappa2 - delta)*D + L*(gamma - 1)
inline double interbank_position(const ModelParams& p, double deposits, double loans) {
  return p.interbank_share() * deposits + loans * (p.gamma - 1.0);
}

// Fills every component from (D, L); the result closes the accounting
// identity L + M + R1 + R2 + B = D + K.
inline BalanceSheet balance_sheet(const ModelParams& p, const BankState& s) {
  BalanceSheet sheet;
  sheet.deposits = s.deposits;
  sheet.loans = s.loans;
  sheet.reserve_primary = p.kappa1 * s.deposits;
  sheet.reserve_secondary = p.kappa2 * s.deposits;
  sheet.treasury = p.delta * s.deposits;
  sheet.equity = p.gamma * s.loans;
  sheet.interbank = interbank_position(p, s.deposits, s.loans);
  return sheet;
}

// Profit over the full balance sheet: interest earned on loans, the
// interbank position, Treasury bills and secondary reserves, minus
// interest paid on deposits and the management cost. Primary reserves
// and equity earn nothing.
inline double profit_structural(const ModelParams& p, const RateSet& r,
                                const BalanceSheet& sheet, double t) {
  return r.loan.value(t) * sheet.loans +
         r.interbank.value(t) * sheet.interbank + p.r_b * sheet.treasury +
         p.r_r2 * sheet.reserve_secondary -
         r.deposit.value(t) * sheet.deposits -
         cost(p, sheet.deposits, sheet.loans);
}

// Margin earned per unit of deposits before cost:
// r*(1-kappa1-kappa2-delta) + r_b*delta + r_r2*kappa2 - r_D.
inline double deposit_spread(const ModelParams& p, const RateSet& r, double t) {
  return r.interbank.value(t) * p.interbank_share() + p.r_b * p.delta +
         p.r_r2 * p.kappa2 - r.deposit.value(t);
}

// Margin earned per unit of loans before cost: r_L + r*gamma - r.
inline double loan_spread(const ModelParams& p, const RateSet& r, double t) {
  return r.loan.value(t) + r.interbank.value(t) * p.gamma -
         r.interbank.value(t);
}

// Profit with the balance-sheet identity substituted in; algebraically
// identical to profit_structural.
inline double profit_reduced(const ModelParams& p, const RateSet& r,
                             double deposits, double loans, double t) {
  return deposit_spread(p, r, t) * deposits + loan_spread(p, r, t) * loans -
         cost(p, deposits, loans);
}

// Marginal profit of one more unit of deposits.
inline double alpha_deposit(const ModelParams& p, const RateSet& r,
                            double deposits, double loans, double t) {
  return deposit_spread(p, r, t) - cost_marginal(p, deposits, loans);
}

// Marginal profit of one more unit of loans.
inline double alpha_loan(const ModelParams& p, const RateSet& r,
                         double deposits, double loans, double t) {
  return loan_spread(p, r, t) - cost_marginal(p, deposits, loans);
}

struct StateDerivative {
  double deposits = 0.0;
  double loans = 0.0;
};

// dD/dt = (b - D/alpha_D)*dr_D/dt and dL/dt = (g - L/alpha_L)*dr_L/dt.
// Throws SingularError when either marginal profit is within singular_eps
// of zero; the field blows up across those loci.
inline StateDerivative vector_field(const ModelParams& p, const RateSet& r,
                                    const BankState& s,
                                    double singular_eps = kDefaultSingularEps) {
  const double a_d = alpha_deposit(p, r, s.deposits, s.loans, s.t);
  if (!(std::abs(a_d) > singular_eps))
    throw SingularError(Denominator::deposit, a_d, s.t);
  const double a_l = alpha_loan(p, r, s.deposits, s.loans, s.t);
  if (!(std::abs(a_l) > singular_eps))
    throw SingularError(Denominator::loan, a_l, s.t);
  return {(p.b - s.deposits / a_d) * r.deposit.derivative(s.t),
          (p.g - s.loans / a_l) * r.loan.derivative(s.t)};
}

// One singularity locus: the corresponding alpha vanishes exactly on
// k*(D+L) = c0 + cs*sin(2*pi*freq*t) + cc*cos(2*pi*freq*t).
struct LocusCoefficients {
  double c0 = 0.0;
  double cs = 0.0;
  double cc = 0.0;
  double freq = 1.0;
  double k = 0.0;

  double rhs(double t) const {
    const double w = kTwoPi * freq * t;
    return c0 + cs * std::sin(w) + cc * std::cos(w);
  }

  // The D+L value sitting on the locus at time t.
  double boundary(double t) const { return rhs(t) / k; }
};

struct LocusPair {
  LocusCoefficients deposit;
  LocusCoefficients loan;
};

// Locus coefficients derived symbolically from the parameter and rate
// coefficients. Requires all three rates to share one frequency.
inline LocusPair singularity_loci(const ModelParams& p, const RateSet& r) {
  if (r.deposit.freq != r.loan.freq || r.deposit.freq != r.interbank.freq)
    throw std::invalid_argument("singularity_loci: rates must share one frequency");
  const double share = p.interbank_share();
  LocusPair loci;
  loci.deposit = {r.interbank.mean * share + p.r_b * p.delta +
                      p.r_r2 * p.kappa2 - r.deposit.mean,
                  r.interbank.sin_amp * share - r.deposit.sin_amp,
                  r.interbank.cos_amp * share - r.deposit.cos_amp,
                  r.deposit.freq, p.k};
  loci.loan = {r.loan.mean + r.interbank.mean * (p.gamma - 1.0),
               r.loan.sin_amp + r.interbank.sin_amp * (p.gamma - 1.0),
               r.loan.cos_amp + r.interbank.cos_amp * (p.gamma - 1.0),
               r.loan.freq, p.k};
  return loci;
}

// Region 1: k*(D+L) below both locus values at t; region 2: between them;
// region 3: above both. Throws OnLocusError within singular_eps of either.
inline int classify_region(const LocusPair& loci, double deposits, double loans,
                           double t, double singular_eps = kDefaultSingularEps) {
  const double s = loci.deposit.k * (deposits + loans);
  const double rhs_d = loci.deposit.rhs(t);
  const double rhs_l = loci.loan.rhs(t);
  if (std::abs(s - rhs_d) <= singular_eps) throw OnLocusError(Denominator::deposit, t);
  if (std::abs(s - rhs_l) <= singular_eps) throw OnLocusError(Denominator::loan, t);
  if (s < std::min(rhs_d, rhs_l)) return 1;
  if (s > std::max(rhs_d, rhs_l)) return 3;
  return 2;
}

// Residuals of the nullcline factors, (b*alpha_D - D, g*alpha_L - L).
// Where a residual vanishes the matching field component vanishes for
// any value of the rate derivative.
inline std::pair<double, double> equilibrium_residual(const ModelParams& p,
                                                      const RateSet& r,
                                                      const BankState& s) {
  return {p.b * alpha_deposit(p, r, s.deposits, s.loans, s.t) - s.deposits,
          p.g * alpha_loan(p, r, s.deposits, s.loans, s.t) - s.loans};
}

}  // namespace bankdyn
