#pragma once

// Command-line front end. `run_cli` is the whole program; tools/main.cpp only
// forwards argv. Exit codes: 0 success, 1 model error, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "finger_statics/cable_statics.hpp"
#include "finger_statics/calibration.hpp"
#include "finger_statics/design_space.hpp"
#include "finger_statics/equilibrium_oracle.hpp"
#include "finger_statics/errors.hpp"
#include "finger_statics/io.hpp"
#include "finger_statics/requirements.hpp"

namespace finger_statics {

enum ExitCode : int { kExitOk = 0, kExitModel = 1, kExitConfig = 2 };

namespace cli_detail {

struct Overrides {
  std::string config;
  std::string csv_out;
  std::string json_out;
  std::optional<int> segments;
  std::optional<double> length, depth, loss, tip_length, tip_angle, radius, tension, anchor_offset;
  std::optional<std::string> terminal;
  bool flat{false};
};

inline void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--out", o.csv_out, "CSV output path");
  cmd->add_option("--json", o.json_out, "JSON output path");
  cmd->add_option("--segments", o.segments, "segment count n");
  cmd->add_option("--length", o.length, "segment length L (mm)");
  cmd->add_option("--depth", o.depth, "cable passage depth H2 (mm)");
  cmd->add_option("--loss", o.loss, "loss coefficient c in (0, 1]");
  cmd->add_option("--tip-length", o.tip_length, "fingertip distance past the distal pin (mm)");
  cmd->add_option("--tip-angle", o.tip_angle, "fingertip inclination (rad)");
  cmd->add_option("--radius", o.radius, "object radius of curvature R (mm)");
  cmd->add_flag("--flat", o.flat, "open hand (no curvature)");
  cmd->add_option("--tension", o.tension, "input cable tension T_o (N)");
  cmd->add_option("--terminal", o.terminal, "terminal tension direction: tip_aligned | along_cable");
  cmd->add_option("--anchor-offset", o.anchor_offset, "terminal anchor offset past the last passage (mm)");
}

inline RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config_file(o.config);
  if (o.segments) cfg.design.segments = *o.segments;
  if (o.length) {
    cfg.design.segment.length = *o.length;
    if (!cfg.tip_length_set) cfg.design.segment.tip_length = 0.5 * *o.length;
  }
  if (o.depth) cfg.design.segment.passage_depth = *o.depth;
  if (o.loss) cfg.design.loss = *o.loss;
  if (o.tip_length) {
    cfg.design.segment.tip_length = *o.tip_length;
    cfg.tip_length_set = true;
  }
  if (o.tip_angle) cfg.design.segment.tip_angle = *o.tip_angle;
  if (o.radius && o.flat) throw ConfigError("--radius and --flat are mutually exclusive");
  if (o.radius) cfg.scenario.radius = *o.radius;
  if (o.flat) cfg.scenario.radius.reset();
  if (o.tension) cfg.scenario.input_tension = *o.tension;
  if (o.anchor_offset) cfg.statics.anchor_offset = *o.anchor_offset;
  if (o.terminal) {
    if (*o.terminal == "tip_aligned") cfg.statics.terminal = TerminalDirection::kTipAligned;
    else if (*o.terminal == "along_cable") cfg.statics.terminal = TerminalDirection::kAlongCable;
    else throw ConfigError("--terminal: expected 'tip_aligned' or 'along_cable'");
  }
  validate_config(cfg);
  return cfg;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

inline void emit_csv(const std::string& path, const CsvTable& t) {
  if (path.empty()) return;
  std::ostringstream os;
  write_csv(os, t);
  write_file(path, os.str());
}

inline void emit_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  write_file(path, j.dump(2) + "\n");
}

inline std::string fmt(double v) { return format_number(v); }

inline std::string describe(const GraspScenario& s) {
  return s.radius ? "R = " + fmt(*s.radius) + " mm" : std::string("flat hand");
}

inline void print_design(std::ostream& out, const PhalangeDesign& d, const GraspScenario& s) {
  out << "design: n = " << d.segments << ", L = " << fmt(d.segment.length)
      << " mm, H2 = " << fmt(d.segment.passage_depth) << " mm, c = " << fmt(d.loss)
      << ", tip = " << fmt(d.segment.tip_length) << " mm @ " << fmt(d.segment.tip_angle) << " rad\n";
  out << "scenario: " << describe(s) << ", T_o = " << fmt(s.input_tension) << " N\n";
}

inline int cmd_simulate(const RunConfig& cfg, const Overrides& o, bool verify, std::ostream& out) {
  const StaticsSolution sol = fingertip_force(cfg.design, cfg.scenario, cfg.statics);
  const double t_o = cfg.scenario.input_tension;
  print_design(out, cfg.design, cfg.scenario);
  out << "segment  theta[rad]  phi[rad]  T_in[N]  f[N]  F[N]\n";
  const auto& c = sol.configuration;
  for (std::size_t i = 0; i < c.segments(); ++i) {
    out << "  " << i + 1 << "  " << fmt(c.theta[i]) << "  " << fmt(c.phi[i]) << "  "
        << fmt(sol.tensions.segment_tensions[i]) << "  " << fmt(sol.tensions.frictions[i]) << "  "
        << fmt(sol.kink_forces[i]) << "\n";
  }
  out << "terminal tension T_n = " << fmt(sol.tensions.terminal_tension) << " N\n";
  out << "moments about O [N mm]: tension = " << fmt(sol.moments.tension)
      << ", kinks = " << fmt(sol.moments.kinks) << ", friction = " << fmt(sol.moments.friction)
      << "\n";
  out << "signed (flexion positive) [N mm]: tension = " << fmt(sol.moments.signed_tension)
      << ", kinks = " << fmt(sol.moments.signed_kinks)
      << ", friction = " << fmt(sol.moments.signed_friction) << "\n";
  out << "beta = " << fmt(sol.beta) << " rad\n";
  out << "P_tip = " << fmt(sol.p_tip) << " N\n";
  if (sol.p_tip > 0.0) {
    out << "ratio T_o : P_tip = " << fmt(t_o / sol.p_tip) << " : 1\n";
  } else {
    out << "ratio T_o : P_tip = undefined (no output force)\n";
  }

  Json report;
  report["design"] = to_json(cfg.design);
  report["scenario"] = to_json(cfg.scenario);
  report["solution"] = to_json(sol, t_o);

  if (verify) {
    const LoadedChain chain = load_chain(cfg.design, sol, cfg.statics);
    const OracleSolution oracle = solve_equilibrium(chain);
    const double moment_residual = whole_chain_moment_check(chain, oracle);
    const double rel =
        sol.p_tip != 0.0 ? std::abs(oracle.p_tip - sol.p_tip) / std::abs(sol.p_tip)
                         : std::abs(oracle.p_tip);
    out << "verify: closed form P_tip = " << fmt(sol.p_tip) << " N, equilibrium P_tip = "
        << fmt(oracle.p_tip) << " N, relative difference = " << fmt(rel) << "\n";
    out << "verify: whole-chain moment residual = " << fmt(moment_residual) << " N mm\n";
    report["verify"] = {{"closed_form_p_tip_n", sol.p_tip},
                        {"equilibrium_p_tip_n", oracle.p_tip},
                        {"relative_difference", rel},
                        {"equation_residual", oracle.residual},
                        {"moment_residual_nmm", moment_residual}};
  }
  emit_csv(o.csv_out, solution_table(sol, t_o));
  emit_json(o.json_out, report);
  return kExitOk;
}

inline int cmd_sweep(const RunConfig& cfg, const Overrides& o, unsigned threads, std::ostream& out) {
  const DesignSpace space = cfg.design_space();
  const auto rows = sweep(space, cfg.statics, threads);
  std::size_t feasible = 0;
  for (const auto& r : rows) feasible += r.feasible ? 1 : 0;
  out << "sweep: " << rows.size() << " points, " << feasible << " feasible, "
      << describe(space.scenario) << ", T_o = " << fmt(space.scenario.input_tension) << " N\n";
  Json report;
  report["points"] = rows.size();
  report["feasible"] = feasible;
  if (const auto best = best_row(rows)) {
    const auto& b = rows[*best];
    out << "best: n = " << b.segments << ", L = " << fmt(b.length) << " mm, H2 = "
        << fmt(b.passage_depth) << " mm, c = " << fmt(b.loss) << ", P_tip = " << fmt(b.p_tip)
        << " N\n";
    report["best"] = {{"row", *best + 1},
                      {"segments", b.segments},
                      {"length_mm", b.length},
                      {"passage_depth_mm", b.passage_depth},
                      {"loss_coefficient", b.loss},
                      {"p_tip_n", b.p_tip}};
  }
  emit_csv(o.csv_out, sweep_table(rows));
  emit_json(o.json_out, report);
  return kExitOk;
}

inline int cmd_optimize(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
  const DesignSpace space = cfg.design_space();
  const OptimizeReport r = optimize(space, cfg.statics, cfg.optimizer);
  print_design(out, r.design, space.scenario);
  out << "free parameters:";
  for (const auto& p : r.free_parameters) out << ' ' << p;
  if (r.free_parameters.empty()) out << " none";
  out << "\nseed (grid of " << r.seed_grid_points << "): P_tip = " << fmt(r.seed.p_tip) << " N\n";
  out << "optimum: P_tip = " << fmt(r.p_tip) << " N (ratio " << fmt(r.ratio) << "), "
      << r.evaluations << " evaluations, " << r.restarts << " restarts, "
      << (r.converged ? "converged" : "evaluation budget reached") << "\n";
  Json report = to_json(r);
  report["scenario"] = to_json(space.scenario);
  if (!o.csv_out.empty()) {
    CsvTable t;
    t.header = {"segments", "length_mm", "passage_depth_mm", "loss_coefficient", "p_tip_n"};
    t.rows.push_back({std::to_string(r.design.segments), fmt(r.design.segment.length),
                      fmt(r.design.segment.passage_depth), fmt(r.design.loss), fmt(r.p_tip)});
    emit_csv(o.csv_out, t);
  }
  emit_json(o.json_out, report);
  return kExitOk;
}

inline int cmd_calibrate(const RunConfig& cfg, const Overrides& o, const std::string& data_flag,
                         std::ostream& out) {
  const std::string path = !data_flag.empty() ? data_flag : cfg.calibration_data.value_or("");
  if (path.empty()) throw ConfigError("calibrate: no calibration data (use --data or calibration.data)");
  const CalibrationDataset data = read_calibration_file(path, cfg.calibration_label);
  const CalibrationReport r = calibrate_loss(cfg.design, cfg.scenario, data, cfg.statics, cfg.calibration);
  PhalangeDesign fitted = cfg.design;
  fitted.loss = r.loss;
  print_design(out, fitted, cfg.scenario);
  out << "calibration '" << data.label << "': " << r.points_used << " points\n";
  out << "fitted c = " << fmt(r.loss) << ", model ratio P_tip/T_o = " << fmt(r.ratio)
      << " (data slope " << fmt(r.data_ratio) << "), RMS residual = " << fmt(r.rms) << " N\n";
  if (r.single_point) out << "note: a single loaded point; the fit interpolates it exactly\n";
  if (r.at_upper_bound) out << "note: best fit at the lossless bound c = 1\n";
  if (r.at_lower_bound) out << "note: best fit at the lower search bound\n";

  Json report;
  report["label"] = data.label;
  report["design"] = to_json(fitted);
  report["scenario"] = to_json(cfg.scenario);
  report["fit"] = to_json(r);
  report["method"] = {{"scan_points", cfg.calibration.scan_points},
                      {"tolerance", cfg.calibration.tolerance},
                      {"lower", cfg.calibration.lower},
                      {"search", "uniform scan then golden-section"},
                      {"seed_path", "deterministic, no random numbers"}};
  if (!o.csv_out.empty()) {
    CsvTable t;
    t.header = {"T_o", "P_tip_measured", "P_tip_model", "residual"};
    for (const auto& p : data.points) {
      GraspScenario s = cfg.scenario;
      s.input_tension = p.tension;
      const double model = fingertip_force(fitted, s, cfg.statics).p_tip;
      t.rows.push_back({fmt(p.tension), fmt(p.force), fmt(model), fmt(model - p.force)});
    }
    emit_csv(o.csv_out, t);
  }
  emit_json(o.json_out, report);
  return kExitOk;
}

inline int cmd_rom_check(RunConfig cfg, const Overrides& o, const std::string& digit,
                         std::optional<double> sd, std::ostream& out) {
  if (digit == "thumb") cfg.rom = thumb_rom_limits();
  else if (digit == "finger") cfg.rom = finger_rom_limits();
  else if (!digit.empty()) throw ConfigError("--digit: expected 'finger' or 'thumb'");
  if (sd) {
    if (*sd < 0) throw ConfigError("--sd-multiplier: must be non-negative");
    cfg.sd_multiplier = *sd;
  }
  const RomReport r = rom_check(cfg.design, cfg.scenario, cfg.rom, cfg.sd_multiplier,
                                cfg.statics.tolerances);
  print_design(out, cfg.design, cfg.scenario);
  out << "mapping: " << r.mapping << "\n";
  for (const auto& j : r.joints) {
    out << "  " << j.name << ": " << fmt(j.angle) << " deg (limit " << fmt(j.flexion_limit)
        << " deg), margin " << fmt(j.margin) << " deg, " << (j.pass ? "pass" : "FAIL") << "\n";
  }
  out << (r.admissible ? "admissible" : "not admissible");
  if (r.failure_reason) out << ": " << *r.failure_reason;
  out << "\n";
  Json report = to_json(r);
  report["sd_multiplier"] = cfg.sd_multiplier;
  emit_csv(o.csv_out, rom_table(r));
  emit_json(o.json_out, report);
  return kExitOk;
}

inline int cmd_required_force(const Requirement& q, const Overrides& o, std::ostream& out) {
  const double f = required_fingertip_force(q.mass, q.mu, q.safety_factor, q.contacts);
  out << "required fingertip force = " << fmt(f) << " N (mass " << fmt(q.mass) << " kg, mu "
      << fmt(q.mu) << ", safety factor " << fmt(q.safety_factor) << ", " << q.contacts
      << " contacts, g = " << fmt(kGravity) << " m/s^2)\n";
  Json report = {{"mass_kg", q.mass},
                 {"mu", q.mu},
                 {"safety_factor", q.safety_factor},
                 {"contacts", q.contacts},
                 {"gravity_mps2", kGravity},
                 {"required_force_n", f}};
  if (!o.csv_out.empty()) {
    emit_csv(o.csv_out, {{"mass_kg", "mu", "safety_factor", "contacts", "required_force_n"},
                         {{fmt(q.mass), fmt(q.mu), fmt(q.safety_factor), std::to_string(q.contacts),
                           fmt(f)}}});
  }
  emit_json(o.json_out, report);
  return kExitOk;
}

}  // namespace cli_detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Static force transmission of a cable-driven segmented finger orthosis",
               "finger-statics"};
  app.require_subcommand(1);

  Overrides o;
  bool verify = false;
  unsigned threads = 0;
  std::string data_flag;
  std::string digit;
  std::optional<double> sd;
  std::optional<double> mass, mu, sf;
  std::optional<int> contacts;

  auto* simulate = app.add_subcommand("simulate", "fingertip force for one design and grasp");
  add_common(simulate, o);
  simulate->add_flag("--verify", verify, "cross-check with the per-segment equilibrium solve");

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the design-space grid");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* optimize_cmd = app.add_subcommand("optimize", "maximise fingertip force over the design space");
  add_common(optimize_cmd, o);

  auto* calibrate_cmd = app.add_subcommand("calibrate", "fit the loss coefficient to measurements");
  add_common(calibrate_cmd, o);
  calibrate_cmd->add_option("--data", data_flag, "calibration CSV (header T_o,P_tip)");

  auto* rom_cmd = app.add_subcommand("rom-check", "joint range-of-motion admissibility");
  add_common(rom_cmd, o);
  rom_cmd->add_option("--digit", digit, "finger | thumb");
  rom_cmd->add_option("--sd-multiplier", sd, "widen limits by k standard deviations");

  auto* force_cmd = app.add_subcommand("required-force", "fingertip force needed to hold a mass");
  force_cmd->add_option("--config", o.config, "JSON run configuration");
  force_cmd->add_option("--out", o.csv_out, "CSV output path");
  force_cmd->add_option("--json", o.json_out, "JSON output path");
  force_cmd->add_option("--mass", mass, "object mass (kg)");
  force_cmd->add_option("--mu", mu, "fingertip static friction coefficient");
  force_cmd->add_option("--sf", sf, "safety factor");
  force_cmd->add_option("--contacts", contacts, "number of fingertip contacts");

  std::vector<std::string> argv_store{"finger-statics"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (force_cmd->parsed()) {
      Requirement q = o.config.empty() ? Requirement{} : load_config_file(o.config).requirement;
      if (mass) q.mass = *mass;
      if (mu) q.mu = *mu;
      if (sf) q.safety_factor = *sf;
      if (contacts) q.contacts = *contacts;
      return cmd_required_force(q, o, out);
    }
    const RunConfig cfg = resolve(o);
    if (simulate->parsed()) return cmd_simulate(cfg, o, verify, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, o, threads, out);
    if (optimize_cmd->parsed()) return cmd_optimize(cfg, o, out);
    if (calibrate_cmd->parsed()) return cmd_calibrate(cfg, o, data_flag, out);
    if (rom_cmd->parsed()) return cmd_rom_check(cfg, o, digit, sd, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  }
  return kExitConfig;
}

}  // namespace finger_statics
