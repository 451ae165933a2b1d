#pragma once

// Fixed-step RK4 integration of the deposit/loan system with locus-crossing
// detection. Crossings are flagged by sign changes of either marginal-profit
// denominator between step boundaries and localized in time by bisection.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bankdyn/model.hpp"

namespace bankdyn {

enum class EventPolicy { terminate_on_event, annotate_and_continue };

enum class Termination { completed, singular, nonpositive_state, state_overflow };

inline const char* name(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::singular: return "singular";
    case Termination::nonpositive_state: return "nonpositive-state";
    case Termination::state_overflow: return "state-overflow";
  }
  return "unknown";
}

struct IntegratorConfig {
  double t_end = 2.0;
  double dt = 1e-4;
  double singular_eps = kDefaultSingularEps;
  double max_state = 1e9;
  EventPolicy event_policy = EventPolicy::terminate_on_event;

  void validate() const {
    if (!(dt > 0.0 && dt < t_end))
      throw std::invalid_argument("integrator: dt must satisfy 0 < dt < t_end");
    if (!(singular_eps > 0.0))
      throw std::invalid_argument("integrator: singular_eps must be > 0");
    if (!(max_state > 0.0))
      throw std::invalid_argument("integrator: max_state must be > 0");
  }
};

// A localized locus crossing.
struct SingularEvent {
  Denominator which = Denominator::deposit;
  double t_star = 0.0;
  double deposits = 0.0;
  double loans = 0.0;
  double residual = 0.0;  // |alpha| at (t_star, deposits, loans)
};

struct Trajectory {
  std::vector<BankState> samples;
  std::vector<SingularEvent> events;
  Termination termination = Termination::completed;
};

namespace detail {

// Events are localized below the configured denominator guard.
inline constexpr double kRefineEps = 1e-9;

// Stage guard used while re-integrating toward a locus; the regular guard
// would forbid the very states the bisection needs to reach.
inline constexpr double kRefineStageEps = 1e-15;

inline double alpha_of(Denominator which, const ModelParams& p,
                       const RateSet& r, const BankState& s) {
  return which == Denominator::deposit
             ? alpha_deposit(p, r, s.deposits, s.loans, s.t)
             : alpha_loan(p, r, s.deposits, s.loans, s.t);
}

// One classical RK4 step landing exactly on t_next.
inline BankState step_to(const ModelParams& p, const RateSet& r,
                         const BankState& s, double t_next, double eps) {
  const double h = t_next - s.t;
  const StateDerivative k1 = vector_field(p, r, s, eps);
  const StateDerivative k2 = vector_field(
      p, r,
      {s.t + 0.5 * h, s.deposits + 0.5 * h * k1.deposits, s.loans + 0.5 * h * k1.loans},
      eps);
  const StateDerivative k3 = vector_field(
      p, r,
      {s.t + 0.5 * h, s.deposits + 0.5 * h * k2.deposits, s.loans + 0.5 * h * k2.loans},
      eps);
  const StateDerivative k4 = vector_field(
      p, r, {t_next, s.deposits + h * k3.deposits, s.loans + h * k3.loans}, eps);
  return {t_next,
          s.deposits + h / 6.0 * (k1.deposits + 2.0 * k2.deposits +
                                  2.0 * k3.deposits + k4.deposits),
          s.loans + h / 6.0 * (k1.loans + 2.0 * k2.loans + 2.0 * k3.loans + k4.loans)};
}

// Bisect in time over (from.t, from.t + h_max]; candidate states are
// re-integrated from `from`. A sub-step that runs into a singular stage
// counts as past the crossing. When the spacing of representable times is
// exhausted before |alpha| <= eps, the best state is moved onto the locus
// along (1,1), which closes the remaining gap exactly.
inline SingularEvent locate_event(const ModelParams& p, const RateSet& r,
                                  const BankState& from, double h_max,
                                  Denominator which, double eps = kRefineEps) {
  const double a0 = alpha_of(which, p, r, from);
  if (std::abs(a0) <= eps) return {which, from.t, from.deposits, from.loans, std::abs(a0)};

  BankState best = from;
  double best_alpha = a0;
  double lo = 0.0;
  double hi = h_max;
  for (int iter = 0; iter < 100 && std::abs(best_alpha) > eps; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // time resolution exhausted
    BankState cand;
    try {
      cand = step_to(p, r, from, from.t + mid, kRefineStageEps);
    } catch (const SingularError&) {
      hi = mid;
      continue;
    }
    const double a = alpha_of(which, p, r, cand);
    if (std::abs(a) < std::abs(best_alpha)) {
      best = cand;
      best_alpha = a;
    }
    if ((a > 0.0) == (a0 > 0.0)) lo = mid; else hi = mid;
  }
  if (std::abs(best_alpha) > eps) {
    const double shift = best_alpha / (2.0 * p.k);
    best.deposits += shift;
    best.loans += shift;
    best_alpha = alpha_of(which, p, r, best);
  }
  return {which, best.t, best.deposits, best.loans, std::abs(best_alpha)};
}

}  // namespace detail

// Localizes the crossing of `which` inside a bracket whose endpoint alphas
// change sign. Endpoints already within 1e-9 of the locus are returned
// as-is.
inline SingularEvent refine_event(const ModelParams& p, const RateSet& r,
                                  const BankState& state_a, const BankState& state_b,
                                  Denominator which) {
  const double aa = detail::alpha_of(which, p, r, state_a);
  if (std::abs(aa) <= detail::kRefineEps)
    return {which, state_a.t, state_a.deposits, state_a.loans, std::abs(aa)};
  const double ab = detail::alpha_of(which, p, r, state_b);
  if (std::abs(ab) <= detail::kRefineEps)
    return {which, state_b.t, state_b.deposits, state_b.loans, std::abs(ab)};
  if (!(state_b.t > state_a.t))
    throw std::invalid_argument("refine_event: bracket must advance in time");
  if ((aa > 0.0) == (ab > 0.0))
    throw std::invalid_argument(
        std::string("refine_event: ") + name(which) +
        " alpha does not change sign across the bracket");
  return detail::locate_event(p, r, state_a, state_b.t - state_a.t, which);
}

// One classical RK4 step of size dt.
inline BankState step_rk4(const ModelParams& p, const RateSet& r,
                          const BankState& s, double dt,
                          double singular_eps = kDefaultSingularEps) {
  return detail::step_to(p, r, s, s.t + dt, singular_eps);
}

// Advances the system from state0 until t_end or a termination condition:
// a localized locus crossing (per event_policy), a non-positive volume, or
// a volume beyond max_state. Samples fall on the uniform step grid.
inline Trajectory integrate(const ModelParams& p, const RateSet& r,
                            const BankState& state0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(state0.deposits > 0.0) || !(state0.loans > 0.0))
    throw std::invalid_argument("integrate: initial deposits and loans must be positive");
  if (!(state0.t < cfg.t_end))
    throw std::invalid_argument("integrate: initial time must precede t_end");
  const LocusPair loci = singularity_loci(p, r);
  classify_region(loci, state0.deposits, state0.loans, state0.t, cfg.singular_eps);

  Trajectory traj;
  traj.samples.push_back(state0);

  const double span = cfg.t_end - state0.t;
  const auto n_steps =
      static_cast<long long>(std::ceil(span / cfg.dt - 1e-9));

  const auto push_event_sample = [&traj](const SingularEvent& ev) {
    if (ev.t_star > traj.samples.back().t && ev.deposits > 0.0 && ev.loans > 0.0)
      traj.samples.push_back({ev.t_star, ev.deposits, ev.loans});
  };

  BankState cur = state0;
  double a_d_cur = alpha_deposit(p, r, cur.deposits, cur.loans, cur.t);
  double a_l_cur = alpha_loan(p, r, cur.deposits, cur.loans, cur.t);

  for (long long n = 0; n < n_steps; ++n) {
    const double t_next =
        (n + 1 == n_steps) ? cfg.t_end : state0.t + (n + 1) * cfg.dt;
    BankState next;
    try {
      next = detail::step_to(p, r, cur, t_next, cfg.singular_eps);
    } catch (const SingularError& e) {
      // A stage ran into the locus inside this step; the crossing lies in
      // (cur.t, t_next] regardless of the boundary signs.
      const SingularEvent ev =
          detail::locate_event(p, r, cur, t_next - cur.t, e.which());
      traj.events.push_back(ev);
      push_event_sample(ev);
      traj.termination = Termination::singular;
      return traj;
    }

    const double a_d_next = alpha_deposit(p, r, next.deposits, next.loans, next.t);
    const double a_l_next = alpha_loan(p, r, next.deposits, next.loans, next.t);

    SingularEvent step_events[2];
    int n_events = 0;
    const auto monitor = [&](Denominator which, double a_cur, double a_next) {
      if (std::abs(a_next) <= cfg.singular_eps) {
        step_events[n_events++] =
            {which, next.t, next.deposits, next.loans, std::abs(a_next)};
      } else if ((a_cur > 0.0) != (a_next > 0.0)) {
        step_events[n_events++] =
            detail::locate_event(p, r, cur, t_next - cur.t, which);
      }
    };
    monitor(Denominator::deposit, a_d_cur, a_d_next);
    monitor(Denominator::loan, a_l_cur, a_l_next);

    if (n_events > 0) {
      if (n_events == 2 && step_events[1].t_star < step_events[0].t_star)
        std::swap(step_events[0], step_events[1]);
      if (cfg.event_policy == EventPolicy::terminate_on_event) {
        traj.events.push_back(step_events[0]);
        push_event_sample(step_events[0]);
        traj.termination = Termination::singular;
        return traj;
      }
      for (int i = 0; i < n_events; ++i) traj.events.push_back(step_events[i]);
    }

    if (!(next.deposits > 0.0) || !(next.loans > 0.0)) {
      traj.termination = Termination::nonpositive_state;
      return traj;
    }
    if (std::abs(next.deposits) > cfg.max_state || std::abs(next.loans) > cfg.max_state) {
      traj.termination = Termination::state_overflow;
      return traj;
    }

    traj.samples.push_back(next);
    cur = next;
    a_d_cur = a_d_next;
    a_l_cur = a_l_next;
  }

  traj.termination = Termination::completed;
  return traj;
}

// Linear interpolation of the trajectory onto an arbitrary grid inside its
// time span.
inline std::vector<BankState> resample(const Trajectory& traj,
                                       const std::vector<double>& grid) {
  if (traj.samples.empty())
    throw std::invalid_argument("resample: trajectory has no samples");
  const auto& s = traj.samples;
  std::vector<BankState> out;
  out.reserve(grid.size());
  for (const double t : grid) {
    if (t < s.front().t || t > s.back().t)
      throw std::invalid_argument("resample: time " + std::to_string(t) +
                                  " outside the trajectory span");
    const auto it = std::lower_bound(
        s.begin(), s.end(), t,
        [](const BankState& a, double v) { return a.t < v; });
    if (it->t == t) {
      out.push_back(*it);
      continue;
    }
    const BankState& hi = *it;
    const BankState& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    out.push_back({t, lo.deposits + w * (hi.deposits - lo.deposits),
                   lo.loans + w * (hi.loans - lo.loans)});
  }
  return out;
}

}  // namespace bankdyn
