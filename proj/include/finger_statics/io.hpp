#pragma once

// Run configuration, fixtures and tabular output.
//
// Config files are JSON. Every block is optional; omitted fields keep the
// defaults below. Lengths are mm, forces N, angles rad, except ROM limits,
// which also accept strings with an explicit "deg" suffix ("90deg").
//
//   {
//     "design":   {"segments": 3, "length_mm": 15, "passage_depth_mm": 6,
//                  "loss_coefficient": 0.702893222, "tip_length_mm": 7.5,
//                  "tip_angle_rad": 0},
//     "scenario": {"radius_mm": 45, "input_tension_n": 44}   // or "flat": true
//     "statics":  {"terminal_direction": "tip_aligned" | "along_cable",
//                  "anchor_offset_mm": 0},
//     "tolerances": {"singular_denominator": 1e-9, "arcsin_clamp": 1e-9,
//                    "degenerate_lever": 1e-9},
//     "calibration": {"data": "fixture.csv", "label": "...", "scan_points": 64,
//                     "tolerance": 1e-12},
//     "design_space": {"segments": {"min": 3, "max": 3},
//                      "length_mm": {"min": 10, "max": 25, "steps": 5}, ...},
//     "optimizer": {"max_evaluations": 500, "tolerance": 1e-6, ...},
//     "rom": {"digit": "finger" | "thumb", "sd_multiplier": 0,
//             "limits": {"MCP": {"flexion": "90deg", "flexion_sd": "9.1deg", ...}}},
//     "requirement": {"mass_kg": 1, "mu": 0.4, "safety_factor": 2, "contacts": 2}
//   }

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "finger_statics/cable_statics.hpp"
#include "finger_statics/calibration.hpp"
#include "finger_statics/design_space.hpp"
#include "finger_statics/errors.hpp"
#include "finger_statics/geometry.hpp"
#include "finger_statics/nelder_mead.hpp"
#include "finger_statics/requirements.hpp"

namespace finger_statics {

/// Loss coefficient fitted to the bundled force-transmission fixture for the
/// default geometry and grasp (n = 3, L = 15 mm, H2 = 6 mm, R = 45 mm).
inline constexpr double kDefaultLoss = 0.702893222;
inline constexpr double kDefaultRadius = 45.0;
inline constexpr double kDefaultTension = 44.0;

struct Requirement {
  double mass{1.0};
  double mu{0.4};
  double safety_factor{2.0};
  int contacts{2};
};

struct RunConfig {
  PhalangeDesign design{3, SegmentGeometry::with_default_tip(15.0, 6.0), kDefaultLoss};
  bool tip_length_set{false};
  GraspScenario scenario{GraspScenario::cylinder(kDefaultRadius, kDefaultTension)};
  StaticsOptions statics{};
  std::optional<std::string> calibration_data{};
  std::string calibration_label{};
  CalibrationOptions calibration{};
  std::optional<DesignSpace> space{};
  NelderMeadOptions optimizer{};
  RomLimits rom{finger_rom_limits()};
  double sd_multiplier{0.0};
  Requirement requirement{};

  /// Design space from the config, or the single design point.
  DesignSpace design_space() const {
    DesignSpace s;
    if (space) {
      s = *space;
    } else {
      s.segments = {design.segments, design.segments};
      s.length = Axis::point(design.segment.length);
      s.passage_depth = Axis::point(design.segment.passage_depth);
      s.loss = Axis::point(design.loss);
      if (tip_length_set) s.tip_length = design.segment.tip_length;
    }
    s.tip_angle = design.segment.tip_angle;
    s.scenario = scenario;
    return s;
  }
};

// ---------------------------------------------------------------------------
// Number formatting

/// Nine significant digits, '.' decimal separator, independent of locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view text, const std::string& where) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (std::string_view(first, static_cast<std::size_t>(last - first)) == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError(where + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(cell);
  return cells;
}

/// Lines starting with '#' and blank lines are skipped; the first remaining
/// line is the header.
inline CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ConfigError(source + ": missing header row");
  return table;
}

inline void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

/// Calibration fixture: header "T_o,P_tip", one measurement per line.
inline CalibrationDataset read_calibration_csv(std::istream& in, const std::string& source,
                                               std::string label = {}) {
  const CsvTable t = parse_csv(in, source);
  if (t.header.size() != 2 || t.header[0] != "T_o" || t.header[1] != "P_tip") {
    throw ConfigError(source + ": calibration header must be 'T_o,P_tip'");
  }
  CalibrationDataset data;
  data.label = label.empty() ? source : std::move(label);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string where = source + " row " + std::to_string(r + 1);
    data.points.push_back({parse_number(t.rows[r][0], where + " T_o"),
                           parse_number(t.rows[r][1], where + " P_tip")});
  }
  if (data.points.empty()) throw ConfigError(source + ": no calibration points");
  return data;
}

inline CalibrationDataset read_calibration_file(const std::string& path, std::string label = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open calibration file '" + path + "'");
  return read_calibration_csv(in, path, std::move(label));
}

inline CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"segments", "length_mm", "passage_depth_mm", "loss_coefficient", "p_tip_n", "feasible",
              "error"};
  for (const auto& r : rows) {
    std::string err = r.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    t.rows.push_back({std::to_string(r.segments), format_number(r.length),
                      format_number(r.passage_depth), format_number(r.loss),
                      format_number(r.p_tip), r.feasible ? "1" : "0", err});
  }
  return t;
}

inline std::vector<SweepRow> parse_sweep_table(const CsvTable& t) {
  std::vector<SweepRow> rows;
  for (const auto& c : t.rows) {
    SweepRow r;
    r.segments = static_cast<int>(parse_number(c.at(0), "segments"));
    r.length = parse_number(c.at(1), "length_mm");
    r.passage_depth = parse_number(c.at(2), "passage_depth_mm");
    r.loss = parse_number(c.at(3), "loss_coefficient");
    r.p_tip = parse_number(c.at(4), "p_tip_n");
    r.feasible = c.at(5) == "1";
    r.error = c.at(6);
    rows.push_back(std::move(r));
  }
  return rows;
}

/// One row per segment plus a summary row.
inline CsvTable solution_table(const StaticsSolution& s, double input_tension) {
  CsvTable t;
  t.header = {"row",           "theta_rad",       "phi_rad",         "segment_tension_n",
              "friction_n",    "kink_force_n",    "hole_x_mm",       "hole_y_mm",
              "terminal_tension_n", "moment_tension_nmm", "moment_kinks_nmm",
              "moment_friction_nmm", "beta_rad", "p_tip_n", "ratio_input_to_tip"};
  const auto& c = s.configuration;
  for (std::size_t i = 0; i < c.segments(); ++i) {
    t.rows.push_back({std::to_string(i + 1), format_number(c.theta[i]), format_number(c.phi[i]),
                      format_number(s.tensions.segment_tensions[i]),
                      format_number(s.tensions.frictions[i]), format_number(s.kink_forces[i]),
                      format_number(c.holes[i].x), format_number(c.holes[i].y), "", "", "", "", "",
                      "", ""});
  }
  const double ratio = s.p_tip > 0.0 ? input_tension / s.p_tip : 0.0;
  t.rows.push_back({"summary", "", "", "", "", "", "", "",
                    format_number(s.tensions.terminal_tension), format_number(s.moments.tension),
                    format_number(s.moments.kinks), format_number(s.moments.friction),
                    format_number(s.beta), format_number(s.p_tip), format_number(ratio)});
  return t;
}

// ---------------------------------------------------------------------------
// JSON config

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& path,
                           std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(path + "." + key + ": unknown field");
  }
}

inline std::optional<double> number(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path + "." + key + ": must be finite");
  return d;
}

inline std::optional<int> integer(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::optional<std::string> text(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

/// ROM angle: a number in radians, or a string with a "deg" suffix. Returns degrees.
inline std::optional<double> angle_deg(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const Json& v = obj.at(key);
  const std::string where = path + "." + key;
  if (v.is_number()) return rad_to_deg(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.size() < 4 || s.substr(s.size() - 3) != "deg") {
      throw ConfigError(where + ": angle strings need an explicit 'deg' suffix");
    }
    return parse_number(s.substr(0, s.size() - 3), where);
  }
  throw ConfigError(where + ": expected radians or a 'deg' string");
}

inline void require(bool ok, const std::string& where, const char* what) {
  if (!ok) throw ConfigError(where + ": " + what);
}

inline Axis parse_axis(const Json& obj, const std::string& path, Axis fallback) {
  reject_unknown(obj, path, {"min", "max", "steps", "value"});
  Axis a = fallback;
  if (auto v = number(obj, path, "value")) a = Axis::point(*v);
  if (auto v = number(obj, path, "min")) a.min = *v;
  if (auto v = number(obj, path, "max")) a.max = *v;
  if (auto v = integer(obj, path, "steps")) a.steps = *v;
  if (!obj.contains("max") && !obj.contains("value")) a.max = std::max(a.max, a.min);
  require(a.steps >= 1, path + ".steps", "must be >= 1");
  require(a.max >= a.min, path, "max must be >= min");
  return a;
}

}  // namespace detail

/// Applies a parsed JSON document on top of `base`. Errors name the field.
inline RunConfig apply_config(const Json& doc, RunConfig base = {}) {
  using namespace detail;
  RunConfig cfg = std::move(base);
  reject_unknown(doc, "config",
                 {"design", "scenario", "statics", "tolerances", "calibration", "design_space",
                  "optimizer", "rom", "requirement"});

  if (doc.contains("design")) {
    const Json& d = doc.at("design");
    const std::string p = "design";
    reject_unknown(d, p, {"segments", "length_mm", "passage_depth_mm", "loss_coefficient",
                          "tip_length_mm", "tip_angle_rad"});
    if (auto v = integer(d, p, "segments")) cfg.design.segments = *v;
    if (auto v = number(d, p, "length_mm")) {
      cfg.design.segment.length = *v;
      if (!cfg.tip_length_set) cfg.design.segment.tip_length = 0.5 * *v;
    }
    if (auto v = number(d, p, "passage_depth_mm")) cfg.design.segment.passage_depth = *v;
    if (auto v = number(d, p, "loss_coefficient")) cfg.design.loss = *v;
    if (auto v = number(d, p, "tip_length_mm")) {
      cfg.design.segment.tip_length = *v;
      cfg.tip_length_set = true;
    }
    if (auto v = number(d, p, "tip_angle_rad")) cfg.design.segment.tip_angle = *v;
  }

  if (doc.contains("scenario")) {
    const Json& s = doc.at("scenario");
    const std::string p = "scenario";
    reject_unknown(s, p, {"radius_mm", "flat", "input_tension_n"});
    if (auto v = number(s, p, "radius_mm")) cfg.scenario.radius = *v;
    if (s.contains("flat")) {
      require(s.at("flat").is_boolean(), p + ".flat", "expected true or false");
      if (s.at("flat").get<bool>()) {
        require(!s.contains("radius_mm"), p, "give either radius_mm or flat, not both");
        cfg.scenario.radius.reset();
      }
    }
    if (auto v = number(s, p, "input_tension_n")) cfg.scenario.input_tension = *v;
  }

  if (doc.contains("statics")) {
    const Json& s = doc.at("statics");
    const std::string p = "statics";
    reject_unknown(s, p, {"terminal_direction", "anchor_offset_mm"});
    if (auto v = text(s, p, "terminal_direction")) {
      if (*v == "tip_aligned") cfg.statics.terminal = TerminalDirection::kTipAligned;
      else if (*v == "along_cable") cfg.statics.terminal = TerminalDirection::kAlongCable;
      else throw ConfigError(p + ".terminal_direction: expected 'tip_aligned' or 'along_cable'");
    }
    if (auto v = number(s, p, "anchor_offset_mm")) cfg.statics.anchor_offset = *v;
  }

  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    const std::string p = "tolerances";
    reject_unknown(t, p, {"singular_denominator", "arcsin_clamp", "degenerate_lever"});
    auto& tol = cfg.statics.tolerances;
    if (auto v = number(t, p, "singular_denominator")) tol.singular_denominator = *v;
    if (auto v = number(t, p, "arcsin_clamp")) tol.arcsin_clamp = *v;
    if (auto v = number(t, p, "degenerate_lever")) tol.degenerate_lever = *v;
    require(tol.singular_denominator >= 0 && tol.arcsin_clamp >= 0 && tol.degenerate_lever >= 0, p,
            "tolerances must be non-negative");
  }

  if (doc.contains("calibration")) {
    const Json& c = doc.at("calibration");
    const std::string p = "calibration";
    reject_unknown(c, p, {"data", "label", "scan_points", "tolerance", "lower"});
    if (auto v = text(c, p, "data")) cfg.calibration_data = *v;
    if (auto v = text(c, p, "label")) cfg.calibration_label = *v;
    if (auto v = integer(c, p, "scan_points")) cfg.calibration.scan_points = *v;
    if (auto v = number(c, p, "tolerance")) cfg.calibration.tolerance = *v;
    if (auto v = number(c, p, "lower")) cfg.calibration.lower = *v;
    require(cfg.calibration.scan_points >= 3, p + ".scan_points", "must be >= 3");
    require(cfg.calibration.tolerance > 0, p + ".tolerance", "must be positive");
    require(cfg.calibration.lower > 0 && cfg.calibration.lower < 1, p + ".lower", "must lie in (0, 1)");
  }

  if (doc.contains("design_space")) {
    const Json& s = doc.at("design_space");
    const std::string p = "design_space";
    reject_unknown(s, p, {"segments", "length_mm", "passage_depth_mm", "loss_coefficient"});
    DesignSpace space;
    space.segments = {cfg.design.segments, cfg.design.segments};
    space.length = Axis::point(cfg.design.segment.length);
    space.passage_depth = Axis::point(cfg.design.segment.passage_depth);
    space.loss = Axis::point(cfg.design.loss);
    if (cfg.tip_length_set) space.tip_length = cfg.design.segment.tip_length;
    if (s.contains("segments")) {
      const Json& n = s.at("segments");
      reject_unknown(n, p + ".segments", {"min", "max", "value"});
      if (auto v = integer(n, p + ".segments", "value")) space.segments = {*v, *v};
      if (auto v = integer(n, p + ".segments", "min")) space.segments.min = *v;
      if (auto v = integer(n, p + ".segments", "max")) space.segments.max = *v;
      if (!n.contains("max") && !n.contains("value")) {
        space.segments.max = std::max(space.segments.max, space.segments.min);
      }
      require(space.segments.min >= 1 && space.segments.max >= space.segments.min, p + ".segments",
              "need 1 <= min <= max");
    }
    if (s.contains("length_mm")) space.length = parse_axis(s.at("length_mm"), p + ".length_mm", space.length);
    if (s.contains("passage_depth_mm")) {
      space.passage_depth = parse_axis(s.at("passage_depth_mm"), p + ".passage_depth_mm", space.passage_depth);
    }
    if (s.contains("loss_coefficient")) {
      space.loss = parse_axis(s.at("loss_coefficient"), p + ".loss_coefficient", space.loss);
    }
    require(space.length.min > 0, p + ".length_mm", "must be positive");
    require(space.passage_depth.min > 0, p + ".passage_depth_mm", "must be positive");
    require(space.loss.min > 0 && space.loss.max <= 1, p + ".loss_coefficient", "must lie in (0, 1]");
    cfg.space = space;
  }

  if (doc.contains("optimizer")) {
    const Json& o = doc.at("optimizer");
    const std::string p = "optimizer";
    reject_unknown(o, p, {"reflection", "expansion", "contraction", "shrink", "initial_step",
                          "tolerance", "max_evaluations", "max_restarts"});
    auto& nm = cfg.optimizer;
    if (auto v = number(o, p, "reflection")) nm.reflection = *v;
    if (auto v = number(o, p, "expansion")) nm.expansion = *v;
    if (auto v = number(o, p, "contraction")) nm.contraction = *v;
    if (auto v = number(o, p, "shrink")) nm.shrink = *v;
    if (auto v = number(o, p, "initial_step")) nm.initial_step = *v;
    if (auto v = number(o, p, "tolerance")) nm.tolerance = *v;
    if (auto v = integer(o, p, "max_evaluations")) nm.max_evaluations = *v;
    if (auto v = integer(o, p, "max_restarts")) nm.max_restarts = *v;
    require(nm.max_evaluations >= 1, p + ".max_evaluations", "must be >= 1");
    require(nm.tolerance > 0, p + ".tolerance", "must be positive");
    require(nm.initial_step > 0 && nm.initial_step <= 1, p + ".initial_step", "must lie in (0, 1]");
  }

  if (doc.contains("rom")) {
    const Json& r = doc.at("rom");
    const std::string p = "rom";
    reject_unknown(r, p, {"digit", "sd_multiplier", "limits"});
    if (auto v = text(r, p, "digit")) {
      if (*v == "finger") cfg.rom = finger_rom_limits();
      else if (*v == "thumb") cfg.rom = thumb_rom_limits();
      else throw ConfigError(p + ".digit: expected 'finger' or 'thumb'");
    }
    if (auto v = number(r, p, "sd_multiplier")) cfg.sd_multiplier = *v;
    require(cfg.sd_multiplier >= 0, p + ".sd_multiplier", "must be non-negative");
    if (r.contains("limits")) {
      const Json& lims = r.at("limits");
      require(lims.is_object(), p + ".limits", "expected an object keyed by joint name");
      for (const auto& [name, body] : lims.items()) {
        const std::string jp = p + ".limits." + name;
        JointLimit* joint = nullptr;
        for (auto& j : cfg.rom.joints) {
          if (j.name == name) joint = &j;
        }
        if (!joint) throw ConfigError(jp + ": no such joint for this digit");
        reject_unknown(body, jp, {"flexion", "flexion_sd", "extension", "extension_sd"});
        if (auto v = angle_deg(body, jp, "flexion")) joint->flexion = *v;
        if (auto v = angle_deg(body, jp, "flexion_sd")) joint->flexion_sd = *v;
        if (auto v = angle_deg(body, jp, "extension")) joint->extension = *v;
        if (auto v = angle_deg(body, jp, "extension_sd")) joint->extension_sd = *v;
        require(joint->flexion > 0, jp + ".flexion", "must be positive");
        require(!joint->extension || *joint->extension < 0, jp + ".extension", "must be negative");
        require(joint->flexion_sd >= 0 && joint->extension_sd >= 0, jp, "standard deviations must be >= 0");
      }
    }
  }

  if (doc.contains("requirement")) {
    const Json& q = doc.at("requirement");
    const std::string p = "requirement";
    reject_unknown(q, p, {"mass_kg", "mu", "safety_factor", "contacts"});
    if (auto v = number(q, p, "mass_kg")) cfg.requirement.mass = *v;
    if (auto v = number(q, p, "mu")) cfg.requirement.mu = *v;
    if (auto v = number(q, p, "safety_factor")) cfg.requirement.safety_factor = *v;
    if (auto v = integer(q, p, "contacts")) cfg.requirement.contacts = *v;
  }
  return cfg;
}

/// Field-level validation of the assembled config (after flag overrides).
inline void validate_config(const RunConfig& cfg) {
  using detail::require;
  require(cfg.design.segments >= 1, "design.segments", "must be >= 1");
  require(cfg.design.segment.length > 0, "design.length_mm", "must be positive");
  require(cfg.design.segment.passage_depth > 0, "design.passage_depth_mm", "must be positive");
  require(cfg.design.loss > 0 && cfg.design.loss <= 1, "design.loss_coefficient", "must lie in (0, 1]");
  require(cfg.design.segment.tip_length >= 0, "design.tip_length_mm", "must be non-negative");
  require(std::isfinite(cfg.design.segment.tip_angle), "design.tip_angle_rad", "must be finite");
  require(!cfg.scenario.radius || *cfg.scenario.radius > 0, "scenario.radius_mm",
          "must be positive (use flat for an open hand)");
  require(cfg.scenario.input_tension >= 0, "scenario.input_tension_n", "must be non-negative");
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(source + ":" + std::to_string(line) + ": JSON parse error (" + e.what() + ")");
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RunConfig cfg = apply_config(parse_json_text(text, path), std::move(base));
  // Fixture paths are relative to the config file.
  if (cfg.calibration_data && std::filesystem::path(*cfg.calibration_data).is_relative()) {
    cfg.calibration_data =
        (std::filesystem::path(path).parent_path() / *cfg.calibration_data).lexically_normal().string();
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON reports

inline Json to_json(Vec2 v) { return Json::array({v.x, v.y}); }

inline Json to_json(const PhalangeDesign& d) {
  Json j;
  j["segments"] = d.segments;
  j["length_mm"] = d.segment.length;
  j["passage_depth_mm"] = d.segment.passage_depth;
  j["loss_coefficient"] = d.loss;
  j["tip_length_mm"] = d.segment.tip_length;
  j["tip_angle_rad"] = d.segment.tip_angle;
  return j;
}

inline Json to_json(const GraspScenario& s) {
  Json j;
  if (s.radius) j["radius_mm"] = *s.radius;
  else j["flat"] = true;
  j["input_tension_n"] = s.input_tension;
  return j;
}

inline Json to_json(const StaticsSolution& s, double input_tension) {
  Json j;
  const auto& c = s.configuration;
  j["theta_rad"] = c.theta;
  j["phi_rad"] = c.phi;
  Json joints = Json::array(), holes = Json::array();
  for (auto p : c.joints) joints.push_back(to_json(p));
  for (auto p : c.holes) holes.push_back(to_json(p));
  j["joints_mm"] = joints;
  j["holes_mm"] = holes;
  j["tip_mm"] = to_json(c.tip);
  j["segment_tensions_n"] = s.tensions.segment_tensions;
  j["terminal_tension_n"] = s.tensions.terminal_tension;
  j["frictions_n"] = s.tensions.frictions;
  j["kink_forces_n"] = s.kink_forces;
  j["moment_tension_nmm"] = s.moments.tension;
  j["moment_kinks_nmm"] = s.moments.kinks;
  j["moment_friction_nmm"] = s.moments.friction;
  j["signed_moments_nmm"] = {{"tension", s.moments.signed_tension},
                             {"kinks", s.moments.signed_kinks},
                             {"friction", s.moments.signed_friction}};
  j["beta_rad"] = s.beta;
  j["p_tip_n"] = s.p_tip;
  j["p_tip_vector_n"] = to_json(s.p_tip_vector);
  j["tip_lever_mm"] = s.tip_lever;
  j["transmission_ratio"] = s.transmission_ratio(input_tension);
  return j;
}

inline Json to_json(const CalibrationReport& r) {
  Json j;
  j["loss_coefficient"] = r.loss;
  j["ratio"] = r.ratio;
  j["data_ratio"] = r.data_ratio;
  j["sse"] = r.sse;
  j["rms_n"] = r.rms;
  j["evaluations"] = r.evaluations;
  j["points"] = r.points_used;
  j["at_upper_bound"] = r.at_upper_bound;
  j["at_lower_bound"] = r.at_lower_bound;
  j["single_point"] = r.single_point;
  return j;
}

inline Json to_json(const NelderMeadOptions& o) {
  Json j;
  j["reflection"] = o.reflection;
  j["expansion"] = o.expansion;
  j["contraction"] = o.contraction;
  j["shrink"] = o.shrink;
  j["initial_step"] = o.initial_step;
  j["tolerance"] = o.tolerance;
  j["max_evaluations"] = o.max_evaluations;
  j["max_restarts"] = o.max_restarts;
  return j;
}

inline Json to_json(const OptimizeReport& r) {
  Json j;
  j["design"] = to_json(r.design);
  j["p_tip_n"] = r.p_tip;
  j["transmission_ratio"] = r.ratio;
  j["free_parameters"] = r.free_parameters;
  j["seed"] = {{"length_mm", r.seed.length},
               {"passage_depth_mm", r.seed.passage_depth},
               {"loss_coefficient", r.seed.loss},
               {"p_tip_n", r.seed.p_tip},
               {"grid_points", r.seed_grid_points}};
  j["evaluations"] = r.evaluations;
  j["restarts"] = r.restarts;
  j["converged"] = r.converged;
  j["hyperparameters"] = to_json(r.hyperparameters);
  j["seed_path"] = "deterministic: best point of the design-space grid, no random numbers";
  return j;
}

inline Json to_json(const RomReport& r) {
  Json j;
  j["admissible"] = r.admissible;
  j["mapping"] = r.mapping;
  j["heuristic_mapping"] = r.heuristic_mapping;
  if (r.failure_reason) j["failure_reason"] = *r.failure_reason;
  Json joints = Json::array();
  for (const auto& c : r.joints) {
    Json e;
    e["joint"] = c.name;
    e["angle_deg"] = c.angle;
    e["flexion_limit_deg"] = c.flexion_limit;
    if (c.extension_limit) e["extension_limit_deg"] = *c.extension_limit;
    e["margin_deg"] = c.margin;
    e["pass"] = c.pass;
    joints.push_back(e);
  }
  j["joints"] = joints;
  return j;
}

inline CsvTable rom_table(const RomReport& r) {
  CsvTable t;
  t.header = {"joint", "angle_deg", "flexion_limit_deg", "extension_limit_deg", "margin_deg", "pass"};
  for (const auto& c : r.joints) {
    t.rows.push_back({c.name, format_number(c.angle), format_number(c.flexion_limit),
                      c.extension_limit ? format_number(*c.extension_limit) : "",
                      format_number(c.margin), c.pass ? "1" : "0"});
  }
  return t;
}

}  // namespace finger_statics
