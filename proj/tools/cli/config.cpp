/**
 * Copyright 2026 The mmgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mmg::cli {
namespace {

using json = nlohmann::json;

struct Unit {
  const char* dimension;
  const char* symbol;
  double scale;
};

constexpr double kTwoPi = 2.0 * kPi;

const Unit kUnits[] = {
    {"frequency", "THz", kTwoPi * 1e12}, {"frequency", "GHz", kTwoPi * 1e9},
    {"frequency", "rad/s", 1.0},         {"frequency", "rad/ps", 1e12},
    {"time", "s", 1.0},                  {"time", "ns", 1e-9},
    {"time", "ps", 1e-12},               {"time", "fs", 1e-15},
    {"angle", "rad", 1.0},               {"angle", "deg", kPi / 180.0},
};

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(join(where, it.key()), "unknown key");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(where, key), "missing required key");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

std::string string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

double quantity(const json& v, const std::string& dimension, const std::string& field) {
  if (!v.is_string()) {
    throw ConfigError(field, "expected a " + dimension + " with a unit, e.g. \"" +
                                 (dimension == "frequency" ? "0.1 THz"
                                  : dimension == "time"    ? "29 ps"
                                                           : "45 deg") +
                                 "\"");
  }
  return parse_quantity(v.get<std::string>(), dimension, field);
}

JsaSpec parse_source(const json& obj, const std::string& where) {
  check_keys(obj, where,
             {"model", "xi", "bandwidth", "walk_off", "lobe_separation", "relative_sign", "center",
              "signal_center", "idler_center"});
  JsaSpec s;
  const std::string model = string(require(obj, "model", where), join(where, "model"));
  if (model == "gaussian") {
    s.model = JsaModel::gaussian;
  } else if (model == "waveguide") {
    s.model = JsaModel::waveguide;
  } else if (model == "double_lobe") {
    s.model = JsaModel::double_lobe;
  } else {
    throw ConfigError(join(where, "model"), "expected gaussian, waveguide or double_lobe");
  }
  s.xi = number(require(obj, "xi", where), join(where, "xi"));
  if (s.xi < 0.0) throw ConfigError(join(where, "xi"), "must be non-negative");
  s.bandwidth = quantity(require(obj, "bandwidth", where), "frequency", join(where, "bandwidth"));
  if (!(s.bandwidth > 0.0)) throw ConfigError(join(where, "bandwidth"), "must be positive");

  if (obj.contains("center")) {
    if (obj.contains("signal_center") || obj.contains("idler_center")) {
      throw ConfigError(join(where, "center"), "give either center or signal/idler centers");
    }
    s.signal_center = s.idler_center = quantity(obj["center"], "frequency", join(where, "center"));
  } else {
    s.signal_center =
        quantity(require(obj, "signal_center", where), "frequency", join(where, "signal_center"));
    s.idler_center =
        quantity(require(obj, "idler_center", where), "frequency", join(where, "idler_center"));
  }

  if (s.model == JsaModel::waveguide) {
    s.walk_off = quantity(require(obj, "walk_off", where), "time", join(where, "walk_off"));
    if (s.walk_off < 0.0) throw ConfigError(join(where, "walk_off"), "must be non-negative");
  } else if (obj.contains("walk_off")) {
    throw ConfigError(join(where, "walk_off"), "only valid for the waveguide model");
  }
  if (s.model == JsaModel::double_lobe) {
    s.lobe_separation = quantity(require(obj, "lobe_separation", where), "frequency",
                                 join(where, "lobe_separation"));
    if (s.lobe_separation < 0.0) {
      throw ConfigError(join(where, "lobe_separation"), "must be non-negative");
    }
    if (obj.contains("relative_sign")) {
      s.relative_sign = integer(obj["relative_sign"], join(where, "relative_sign"));
      if (s.relative_sign != 1 && s.relative_sign != -1) {
        throw ConfigError(join(where, "relative_sign"), "must be +1 or -1");
      }
    }
  } else {
    for (const char* k : {"lobe_separation", "relative_sign"}) {
      if (obj.contains(k)) throw ConfigError(join(where, k), "only valid for the double_lobe model");
    }
  }
  return s;
}

bool same_source(const JsaSpec& a, const JsaSpec& b) {
  return a.model == b.model && a.xi == b.xi && a.bandwidth == b.bandwidth &&
         a.walk_off == b.walk_off && a.lobe_separation == b.lobe_separation &&
         a.relative_sign == b.relative_sign && a.signal_center == b.signal_center &&
         a.idler_center == b.idler_center;
}

std::vector<int> parse_modes(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty list of modes 1-4");
  std::vector<int> modes;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const int m = integer(v[i], f);
    if (m < 1 || m > 4) throw ConfigError(f, "spatial modes are numbered 1 to 4");
    for (int seen : modes) {
      if (seen == m - 1) throw ConfigError(f, "duplicate mode");
    }
    modes.push_back(m - 1);
  }
  return modes;
}

double sweep_value(const json& v, SweepAxis axis, const std::string& field) {
  switch (axis) {
    case SweepAxis::delay: return quantity(v, "time", field);
    case SweepAxis::angle: return quantity(v, "angle", field);
    case SweepAxis::filter_width: return quantity(v, "frequency", field);
    case SweepAxis::squeezing:
    case SweepAxis::loss: break;
  }
  const double x = number(v, field);
  if (axis == SweepAxis::squeezing && x < 0.0) throw ConfigError(field, "xi must be non-negative");
  if (axis == SweepAxis::loss && (x < 0.0 || x > 1.0)) {
    throw ConfigError(field, "loss must lie in [0, 1]");
  }
  return x;
}

std::vector<double> parse_sweep(const json& obj, SweepAxis axis) {
  const std::string where = "sweep";
  check_keys(obj, where, {"values", "start", "stop", "count"});
  std::vector<double> values;
  if (obj.contains("values")) {
    for (const char* k : {"start", "stop", "count"}) {
      if (obj.contains(k)) throw ConfigError(join(where, k), "give either values or start/stop/count");
    }
    const json& v = obj["values"];
    if (!v.is_array()) throw ConfigError("sweep.values", "expected a list");
    for (std::size_t i = 0; i < v.size(); ++i) {
      values.push_back(sweep_value(v[i], axis, "sweep.values[" + std::to_string(i) + "]"));
    }
    return values;
  }
  const double start = sweep_value(require(obj, "start", where), axis, "sweep.start");
  const double stop = sweep_value(require(obj, "stop", where), axis, "sweep.stop");
  const int count = integer(require(obj, "count", where), "sweep.count");
  if (count < 1) throw ConfigError("sweep.count", "must be at least 1");
  for (int i = 0; i < count; ++i) {
    values.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  }
  return values;
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::hom_delay_sweep: return "hom_delay_sweep";
    case Experiment::mzi_angle_sweep: return "mzi_angle_sweep";
    case Experiment::power_sweep: return "power_sweep";
    case Experiment::loss_sweep: return "loss_sweep";
    case Experiment::filter_study: return "filter_study";
    case Experiment::structured_sources: return "structured_sources";
    case Experiment::probe: return "probe";
  }
  return "?";
}

SweepAxis experiment_axis(Experiment e) {
  switch (e) {
    case Experiment::hom_delay_sweep:
    case Experiment::structured_sources: return SweepAxis::delay;
    case Experiment::mzi_angle_sweep: return SweepAxis::angle;
    case Experiment::loss_sweep: return SweepAxis::loss;
    case Experiment::power_sweep:
    case Experiment::filter_study:
    case Experiment::probe: return SweepAxis::squeezing;
  }
  return SweepAxis::squeezing;
}

double parse_quantity(const std::string& text, const std::string& dimension,
                      const std::string& field) {
  std::istringstream in(text);
  double value = 0.0;
  if (!(in >> value)) throw ConfigError(field, "cannot parse a number from \"" + text + "\"");
  std::string unit;
  in >> unit;
  std::string rest;
  if (in >> rest) throw ConfigError(field, "trailing text in \"" + text + "\"");
  if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
  std::string accepted;
  for (const Unit& u : kUnits) {
    if (dimension != u.dimension) continue;
    if (unit == u.symbol) return value * u.scale;
    accepted += accepted.empty() ? u.symbol : std::string(", ") + u.symbol;
  }
  if (unit.empty()) throw ConfigError(field, "missing unit (accepted: " + accepted + ")");
  throw ConfigError(field, "unit \"" + unit + "\" is not a " + dimension + " unit (accepted: " +
                               accepted + ")");
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  check_keys(root, "",
             {"experiment", "output", "svg", "detector", "source", "source_a", "source_b", "grid",
              "delay", "bs_angle", "loss", "filter", "sweep", "filters", "limits"});
  RunConfig rc;
  const std::string exp = string(require(root, "experiment", ""), "experiment");
  bool found = false;
  for (Experiment e : {Experiment::hom_delay_sweep, Experiment::mzi_angle_sweep,
                       Experiment::power_sweep, Experiment::loss_sweep, Experiment::filter_study,
                       Experiment::structured_sources, Experiment::probe}) {
    if (exp == to_string(e)) {
      rc.experiment = e;
      found = true;
    }
  }
  if (!found) throw ConfigError("experiment", "unknown experiment \"" + exp + "\"");

  rc.output = string(require(root, "output", ""), "output");
  if (rc.output.empty()) throw ConfigError("output", "must not be empty");
  if (root.contains("svg")) {
    if (!root["svg"].is_boolean()) throw ConfigError("svg", "expected true or false");
    rc.svg = root["svg"].get<bool>();
  }

  HhomConfig& c = rc.base;
  if (root.contains("detector")) {
    const std::string d = string(root["detector"], "detector");
    if (d == "pnr") {
      c.detector = Detector::pnr;
    } else if (d == "threshold") {
      c.detector = Detector::threshold;
    } else {
      throw ConfigError("detector", "expected pnr or threshold");
    }
  }

  if (root.contains("source")) {
    if (root.contains("source_a") || root.contains("source_b")) {
      throw ConfigError("source", "give either source or source_a/source_b");
    }
    c.source_a = c.source_b = parse_source(root["source"], "source");
  } else {
    c.source_a = parse_source(require(root, "source_a", ""), "source_a");
    c.source_b = parse_source(require(root, "source_b", ""), "source_b");
  }

  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, "grid", {"center", "half_span", "bins"});
    const double center = quantity(require(g, "center", "grid"), "frequency", "grid.center");
    const double half = quantity(require(g, "half_span", "grid"), "frequency", "grid.half_span");
    const int bins = integer(require(g, "bins", "grid"), "grid.bins");
    if (!(half > 0.0)) throw ConfigError("grid.half_span", "must be positive");
    if (bins < 2) throw ConfigError("grid.bins", "must be at least 2");
    c.grid = FrequencyGrid::spanning(center, half, bins);
  } else {
    if (!same_source(c.source_a, c.source_b)) {
      throw ConfigError("grid", "required when the two sources differ");
    }
    c.grid = default_grid(c.source_a, 0.5 * (c.source_a.signal_center + c.source_a.idler_center));
  }

  if (root.contains("delay")) c.delay = quantity(root["delay"], "time", "delay");
  if (root.contains("bs_angle")) c.bs_angle = quantity(root["bs_angle"], "angle", "bs_angle");
  if (root.contains("loss")) {
    const json& l = root["loss"];
    auto one = [](const json& v, const std::string& f) {
      const double e = number(v, f);
      if (e < 0.0 || e > 1.0) throw ConfigError(f, "loss must lie in [0, 1]");
      return e;
    };
    if (l.is_array()) {
      if (l.size() != 4) throw ConfigError("loss", "expected one value or a list of four");
      for (int i = 0; i < 4; ++i) c.loss[i] = one(l[i], "loss[" + std::to_string(i) + "]");
    } else {
      const double e = one(l, "loss");
      c.loss = {e, e, e, e};
    }
  }
  if (root.contains("filter")) {
    const json& f = root["filter"];
    check_keys(f, "filter", {"center", "half_width", "modes"});
    BandpassSpec b;
    b.center = f.contains("center") ? quantity(f["center"], "frequency", "filter.center")
                                    : c.grid.center();
    b.half_width =
        quantity(require(f, "half_width", "filter"), "frequency", "filter.half_width");
    if (!(b.half_width > 0.0)) throw ConfigError("filter.half_width", "must be positive");
    if (f.contains("modes")) b.modes = parse_modes(f["modes"], "filter.modes");
    c.filter = b;
  }
  if (root.contains("limits")) {
    const json& l = root["limits"];
    check_keys(l, "limits", {"pnr_cutoff", "max_threshold_modes", "compress"});
    if (l.contains("pnr_cutoff")) c.limits.pnr_cutoff = integer(l["pnr_cutoff"], "limits.pnr_cutoff");
    if (l.contains("max_threshold_modes")) {
      c.limits.max_threshold_modes =
          integer(l["max_threshold_modes"], "limits.max_threshold_modes");
    }
    if (l.contains("compress")) {
      if (!l["compress"].is_boolean()) throw ConfigError("limits.compress", "expected true or false");
      c.limits.compress = l["compress"].get<bool>();
    }
  }

  const SweepAxis axis = experiment_axis(rc.experiment);
  if (rc.experiment == Experiment::probe) {
    if (root.contains("sweep")) throw ConfigError("sweep", "probe evaluates a single point");
  } else {
    rc.values = parse_sweep(require(root, "sweep", ""), axis);
    if (rc.values.empty()) throw ConfigError("sweep", "no values to sweep");
  }
  if (rc.experiment == Experiment::filter_study) {
    const json& f = require(root, "filters", "");
    if (!f.is_array() || f.empty()) throw ConfigError("filters", "expected a non-empty list");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string field = "filters[" + std::to_string(i) + "]";
      if (f[i].is_string() && f[i].get<std::string>() == "none") {
        rc.filter_widths.push_back(std::numeric_limits<double>::infinity());
      } else {
        const double w = quantity(f[i], "frequency", field);
        if (!(w > 0.0)) throw ConfigError(field, "must be positive");
        rc.filter_widths.push_back(w);
      }
    }
  } else if (root.contains("filters")) {
    throw ConfigError("filters", "only valid for filter_study");
  }
  if (rc.experiment == Experiment::structured_sources && root.contains("source")) {
    throw ConfigError("source", "structured_sources takes source_a and source_b");
  }
  return rc;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace mmg::cli
