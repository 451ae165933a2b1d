#pragma once

// Command-line interface. Subcommands: loci, simulate, sweep, gwm,
// validate. Exit codes: 0 success, 1 configuration or validation error,
// 2 runtime anomaly (singular, non-positive or overflowing trajectories)
// with partial outputs written, 64 usage error.

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bankdyn/config.hpp"
#include "bankdyn/csv.hpp"
#include "bankdyn/integrator.hpp"
#include "bankdyn/model.hpp"
#include "bankdyn/regulation.hpp"
#include "bankdyn/scenario.hpp"
#include "bankdyn/svg.hpp"

namespace bankdyn {

namespace detail {

inline std::vector<std::array<double, 2>> thin_points(
    std::vector<std::array<double, 2>> pts, std::size_t max_points = 1200) {
  if (pts.size() <= max_points) return pts;
  std::vector<std::array<double, 2>> out;
  const std::size_t stride = (pts.size() + max_points - 1) / max_points;
  for (std::size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
  if (out.back() != pts.back()) out.push_back(pts.back());
  return out;
}

inline SvgChart ldr_chart(const std::string& title,
                          const std::vector<ScenarioResult>& results,
                          const RegulationParams& reg) {
  SvgChart chart{title, "t (years)", "L/D", {}, {reg.lambda_l, reg.lambda_u}};
  for (const ScenarioResult& res : results) {
    if (!res.reserve_report) continue;
    std::vector<std::array<double, 2>> pts;
    pts.reserve(res.reserve_report->rows.size());
    for (const ReserveRow& row : res.reserve_report->rows)
      pts.push_back({row.t, row.lambda});
    chart.series.push_back({res.label, thin_points(std::move(pts))});
  }
  return chart;
}

inline SvgChart gwm_chart(const std::string& title,
                          const std::vector<ScenarioResult>& results) {
  SvgChart chart{title, "t (years)", "LDR reserve", {}, {}};
  for (const ScenarioResult& res : results) {
    if (!res.reserve_report) continue;
    std::vector<std::array<double, 2>> pts;
    pts.reserve(res.reserve_report->rows.size());
    for (const ReserveRow& row : res.reserve_report->rows)
      pts.push_back({row.t, row.gwm_ldr});
    chart.series.push_back({res.label, thin_points(std::move(pts))});
  }
  return chart;
}

inline SvgChart phase_chart(const std::string& title,
                            const std::vector<ScenarioResult>& results) {
  SvgChart chart{title, "D", "L", {}, {}};
  for (const ScenarioResult& res : results) {
    if (!res.trajectory) continue;
    std::vector<std::array<double, 2>> pts;
    pts.reserve(res.trajectory->samples.size());
    for (const BankState& s : res.trajectory->samples)
      pts.push_back({s.deposits, s.loans});
    chart.series.push_back({res.label, thin_points(std::move(pts))});
  }
  return chart;
}

inline void print_scenario_line(std::ostream& os, const std::string& set_name,
                                const ScenarioResult& res) {
  os << set_name << " " << res.label << ": D0=" << format_csv(res.initial.deposits)
     << " L0=" << format_csv(res.initial.loans);
  if (res.region) os << " region " << *res.region;
  if (res.trajectory) os << " " << name(res.trajectory->termination);
  if (res.trajectory && !res.trajectory->events.empty()) {
    const SingularEvent& ev = res.trajectory->events.front();
    os << " (" << name(ev.which) << " locus at t=" << format_csv(ev.t_star) << ")";
  }
  if (res.reserve_report)
    os << " integrated_gwm=" << format_csv(res.reserve_report->integrated_gwm);
  if (res.diagnosis) os << " behavior=" << (res.diagnosis->valid ? "valid" : "invalid");
  for (const std::string& err : res.errors) os << " [" << err << "]";
  os << "\n";
}

inline bool has_anomaly(const std::vector<ScenarioResult>& results) {
  for (const ScenarioResult& res : results) {
    if (!res.errors.empty()) return true;
    if (res.trajectory && res.trajectory->termination != Termination::completed)
      return true;
  }
  return false;
}

}  // namespace detail

inline int cli_dispatch(std::vector<std::string> args) {
  CLI::App app{"Coupled deposit/loan dynamics with reserve-requirement reporting",
               "bankdyn"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  bool svg = false;
  app.add_option("--config", config_path, "configuration file (sectioned key = value)");
  app.add_option("--out-dir", out_dir, "directory for CSV/SVG output")
      ->capture_default_str();
  app.add_flag("--svg", svg, "also render SVG charts");

  CLI::App* loci_cmd = app.add_subcommand(
      "loci", "print the singularity locus coefficients and t=0 region boundaries");

  double d0 = 0.0, l0 = 0.0;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "integrate one trajectory and write its CSV");
  sim_cmd->add_option("--d0", d0, "initial deposit volume")->required();
  sim_cmd->add_option("--l0", l0, "initial loan volume")->required();

  std::string set_name;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run scenario sets; per-scenario CSVs plus cross-set comparisons");
  sweep_cmd->add_option("--set", set_name, "set name (set1, set2, ...) or all")
      ->required();

  CLI::App* gwm_cmd = app.add_subcommand(
      "gwm", "reserve summary with integrated LDR requirement per scenario");
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "demand-slope behavior diagnosis per scenario");

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  RunConfig cfg;
  std::filesystem::path out;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    out = out_dir;
    std::filesystem::create_directories(out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (loci_cmd->parsed()) {
      const LocusPair loci = singularity_loci(cfg.params, cfg.rates);
      const auto print = [](const char* which, const LocusCoefficients& lc) {
        std::cout << which
                  << " locus: k*(D+L) = c0 + cs*sin(2*pi*freq*t) + cc*cos(2*pi*freq*t)\n"
                  << "  c0 = " << format_csv(lc.c0) << "\n"
                  << "  cs = " << format_csv(lc.cs) << "\n"
                  << "  cc = " << format_csv(lc.cc) << "\n"
                  << "  freq = " << format_csv(lc.freq) << ", k = " << format_csv(lc.k)
                  << "\n";
      };
      print("deposit", loci.deposit);
      print("loan", loci.loan);
      std::cout << "region boundaries at t=0 (D+L): deposit "
                << format_csv(loci.deposit.boundary(0.0)) << ", loan "
                << format_csv(loci.loan.boundary(0.0)) << "\n";
      return 0;
    }

    if (sim_cmd->parsed()) {
      Trajectory traj;
      try {
        traj = integrate(cfg.params, cfg.rates, BankState{0.0, d0, l0}, cfg.integrator);
      } catch (const OnLocusError& e) {
        std::cerr << "error: invalid initial state: " << e.what() << "\n";
        return 1;
      }
      const DerivedSeries derived =
          compute_derived(cfg.params, cfg.rates, cfg.regulation, traj);
      const auto csv_path = out / "simulate.csv";
      write_trajectory_csv(traj, derived, csv_path.string());
      std::cout << "simulate: " << traj.samples.size() << " samples, "
                << name(traj.termination) << "\n";
      for (const SingularEvent& ev : traj.events)
        std::cout << "  " << name(ev.which) << " locus crossing at t="
                  << format_csv(ev.t_star) << " (residual " << format_csv(ev.residual)
                  << ")\n";
      const ReserveReport report = reserve_series(cfg.params, cfg.regulation, traj);
      std::cout << "  integrated_gwm = " << format_csv(report.integrated_gwm) << "\n"
                << "  wrote " << csv_path.string() << "\n";
      if (svg) {
        SvgChart volumes{"Deposit and loan volumes", "t (years)", "volume", {}, {}};
        SvgChart rates_chart{"Market rates", "t (years)", "rate", {}, {}};
        std::vector<std::array<double, 2>> dpts, lpts, rd, rl, ri;
        for (const BankState& s : traj.samples) {
          dpts.push_back({s.t, s.deposits});
          lpts.push_back({s.t, s.loans});
          rd.push_back({s.t, cfg.rates.deposit.value(s.t)});
          rl.push_back({s.t, cfg.rates.loan.value(s.t)});
          ri.push_back({s.t, cfg.rates.interbank.value(s.t)});
        }
        volumes.series = {{"D", detail::thin_points(std::move(dpts))},
                          {"L", detail::thin_points(std::move(lpts))}};
        rates_chart.series = {{"r_D", detail::thin_points(std::move(rd))},
                              {"r_L", detail::thin_points(std::move(rl))},
                              {"r", detail::thin_points(std::move(ri))}};
        render_svg_lines(volumes, (out / "simulate_volumes.svg").string());
        render_svg_lines(rates_chart, (out / "simulate_rates.svg").string());
        ScenarioResult res;
        res.label = "run";
        res.trajectory = traj;
        res.reserve_report = report;
        const std::vector<ScenarioResult> one{res};
        render_svg_lines(detail::phase_chart("L against D", one),
                         (out / "simulate_phase.svg").string());
        render_svg_lines(detail::ldr_chart("Loan-to-deposit ratio", one, cfg.regulation),
                         (out / "simulate_ldr.svg").string());
        render_svg_lines(detail::gwm_chart("LDR reserve requirement", one),
                         (out / "simulate_gwm.svg").string());
      }
      return traj.termination == Termination::completed ? 0 : 2;
    }

    // the remaining subcommands all run scenario sets
    const std::vector<ScenarioSet> all_sets = build_sets(cfg.scenario);
    std::vector<ScenarioSet> sets;
    if (sweep_cmd->parsed() && set_name != "all") {
      for (const ScenarioSet& s : all_sets)
        if (s.name == set_name) sets.push_back(s);
      if (sets.empty()) {
        std::cerr << "error: unknown set '" << set_name << "' (have";
        for (const ScenarioSet& s : all_sets) std::cerr << " " << s.name;
        std::cerr << ")\n";
        return 1;
      }
    } else {
      sets = all_sets;
    }

    std::vector<std::vector<ScenarioResult>> runs;
    runs.reserve(sets.size());
    bool anomaly = false;
    for (const ScenarioSet& set : sets) {
      runs.push_back(run_set(cfg.params, cfg.rates, cfg.regulation, set, cfg.integrator,
                             cfg.scenario.theta));
      anomaly = anomaly || detail::has_anomaly(runs.back());
    }

    if (sweep_cmd->parsed()) {
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (const ScenarioResult& res : runs[i]) {
          detail::print_scenario_line(std::cout, sets[i].name, res);
          if (res.trajectory) {
            const DerivedSeries derived =
                compute_derived(cfg.params, cfg.rates, cfg.regulation, *res.trajectory);
            write_trajectory_csv(
                *res.trajectory, derived,
                (out / (sets[i].name + "_" + res.label + ".csv")).string());
          }
        }
        if (svg) {
          render_svg_lines(detail::ldr_chart(sets[i].name + ": loan-to-deposit ratio",
                                             runs[i], cfg.regulation),
                           (out / (sets[i].name + "_ldr.svg")).string());
          render_svg_lines(detail::gwm_chart(sets[i].name + ": LDR reserve", runs[i]),
                           (out / (sets[i].name + "_gwm.svg")).string());
          render_svg_lines(detail::phase_chart(sets[i].name + ": L against D", runs[i]),
                           (out / (sets[i].name + "_phase.svg")).string());
        }
      }
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
          const auto table = compare_sets(runs[i], runs[j]);
          write_comparison_csv(
              table,
              (out / ("compare_" + sets[i].name + "_" + sets[j].name + ".csv")).string());
        }
      }
      return anomaly ? 2 : 0;
    }

    if (gwm_cmd->parsed()) {
      const auto path = out / "gwm_summary.csv";
      std::ofstream file(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + path.string());
      file << "set,label,initial_ldr,integrated_gwm,lambda_min,lambda_max,termination\n";
      for (std::size_t i = 0; i < sets.size(); ++i) {
        write_gwm_summary_csv(sets[i].name, runs[i], file);
        for (const ScenarioResult& res : runs[i])
          detail::print_scenario_line(std::cout, sets[i].name, res);
        if (svg)
          render_svg_lines(detail::gwm_chart(sets[i].name + ": LDR reserve", runs[i]),
                           (out / (sets[i].name + "_gwm.svg")).string());
      }
      std::cout << "wrote " << path.string() << "\n";
      return anomaly ? 2 : 0;
    }

    if (validate_cmd->parsed()) {
      const auto path = out / "validate.csv";
      std::ofstream file(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + path.string());
      file << "set,label,loan_corr,deposit_corr,loan_ok,deposit_ok,verdict\n";
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (const ScenarioResult& res : runs[i]) {
          detail::print_scenario_line(std::cout, sets[i].name, res);
          file << sets[i].name << ',' << res.label << ',';
          if (res.diagnosis) {
            file << format_csv(res.diagnosis->loan_corr) << ','
                 << format_csv(res.diagnosis->deposit_corr) << ','
                 << (res.diagnosis->loan_ok ? "true" : "false") << ','
                 << (res.diagnosis->deposit_ok ? "true" : "false") << ','
                 << (res.diagnosis->valid ? "valid" : "invalid") << '\n';
          } else {
            file << "nan,nan,false,false,error\n";
          }
        }
      }
      std::cout << "wrote " << path.string() << "\n";
      return anomaly ? 2 : 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace bankdyn
