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

#include "mmg/hhom.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "mmg/elements.hpp"
#include "mmg/error.hpp"

namespace mmg {
namespace {

constexpr const char* kCsvHeader = "param,value,p4,p_bunch,p_herald,eta_herald,v_hom,v_mzi";

CovarianceState add_source(const CovarianceState& state, const JsaSpec& spec,
                           const FrequencyGrid& grid, int signal, int idler) {
  if (spec.xi == 0.0) return state;
  const int n = grid.n_bins();
  Transform sq = squeezer(build_jsa(spec, grid), 0, 1, ModeLayout(2, n));
  const int modes[] = {signal, idler};
  return apply_local(state, sq, modes);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::optional<double> parse_optional(const std::string& field) {
  if (field.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw InvalidArgument("read_csv: malformed number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

const char* to_string(Detector detector) {
  return detector == Detector::pnr ? "pnr" : "threshold";
}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::delay: return "tau";
    case SweepAxis::angle: return "theta";
    case SweepAxis::squeezing: return "xi";
    case SweepAxis::loss: return "epsilon";
    case SweepAxis::filter_width: return "filter_half_width";
  }
  return "";
}

CovarianceState build_hhom(const HhomConfig& config) {
  const FrequencyGrid& grid = config.grid;
  const int n = grid.n_bins();
  CovarianceState state = vacuum_state(ModeLayout(4, n));
  state = add_source(state, config.source_a, grid, hhom::herald_a, hhom::idler_a);
  state = add_source(state, config.source_b, grid, hhom::herald_b, hhom::idler_b);
  if (config.delay != 0.0) {
    const int m[] = {hhom::idler_a};
    state = apply_local(state, delay(config.delay, 0, grid, ModeLayout(1, n)), m);
  }
  if (config.filter) {
    const BandpassSpec& f = *config.filter;
    const int k = static_cast<int>(f.modes.size());
    std::vector<int> local(k);
    for (int i = 0; i < k; ++i) local[i] = i;
    state = apply_local(state,
                        bandpass_filter(f.center, f.half_width, local, grid, ModeLayout(k, n)),
                        f.modes);
  }
  for (int i = 0; i < 4; ++i) {
    if (config.loss[i] != 0.0) {
      const int zero[] = {0};
      const int m[] = {i};
      state = apply_local(state, loss(config.loss[i], zero, ModeLayout(1, n)), m);
    }
  }
  if (config.bs_angle != 0.0) {
    state = apply_local(state, beam_splitter(config.bs_angle, {0, 1}, ModeLayout(2, n)),
                        std::vector<int>{hhom::idler_a, hhom::idler_b});
  }
  return state;
}

Coincidences coincidences(const CovarianceState& state, Detector detector,
                          const DetectionLimits& limits) {
  GaussianDetector det(state, {0, 1, 2, 3}, limits);
  Coincidences c;
  if (detector == Detector::pnr) {
    PnrTable t = det.pnr_table({1, 2, 2, 1});
    const int four[] = {1, 1, 1, 1};
    const int left[] = {1, 2, 0, 1};
    const int right[] = {1, 0, 2, 1};
    c.four_fold = t.at(four);
    c.bunching = t.at(left) + t.at(right);
  } else {
    c.four_fold = det.p_threshold(0b1111u, 0u);
    c.bunching = det.p_threshold(0b1101u, 0b0010u) + det.p_threshold(0b1011u, 0b0100u);
  }
  return c;
}

double four_fold(const CovarianceState& state, Detector detector, const DetectionLimits& limits) {
  return coincidences(state, detector, limits).four_fold;
}

double bunching(const CovarianceState& state, Detector detector, const DetectionLimits& limits) {
  return coincidences(state, detector, limits).bunching;
}

double heralding_rate(const CovarianceState& state, Detector detector,
                      const DetectionLimits& limits) {
  GaussianDetector det(state, {hhom::herald_a, hhom::herald_b}, limits);
  if (detector == Detector::pnr) {
    const int ones[] = {1, 1};
    return det.p_pnr(ones);
  }
  return det.p_threshold(0b11u, 0u);
}

HeraldingEfficiency heralding_efficiency(const HhomConfig& config) {
  HhomConfig open = config;
  open.bs_angle = 0.0;
  CovarianceState s0 = build_hhom(open);
  Coincidences c0 = coincidences(s0, config.detector, config.limits);
  HeraldingEfficiency h;
  h.p_sps = c0.four_fold + c0.bunching;
  h.p_herald = heralding_rate(s0, config.detector, config.limits);
  if (!(h.p_herald > 0.0)) {
    throw InvalidArgument("heralding_efficiency: heralding rate is zero");
  }
  HhomConfig mixed = config;
  mixed.bs_angle = kPi / 4;
  Coincidences c1 = coincidences(build_hhom(mixed), config.detector, config.limits);
  h.theta_drift = std::abs(c1.four_fold + c1.bunching - h.p_sps);
  if (h.theta_drift > 1e-8) {
    throw UnphysicalState("heralding_efficiency: P_sps depends on the beam-splitter angle (" +
                          std::to_string(h.theta_drift) + ")");
  }
  h.efficiency = h.p_sps / h.p_herald;
  return h;
}

double visibility_hom(double p4_zero_delay, double p4_plateau) {
  if (!(p4_plateau > 0.0)) throw InvalidArgument("visibility_hom: plateau is zero");
  return 1.0 - p4_zero_delay / p4_plateau;
}

double visibility_mzi(double p4_max, double p4_min) {
  if (!(p4_max + p4_min > 0.0)) throw InvalidArgument("visibility_mzi: zero coincidences");
  return (p4_max - p4_min) / (p4_max + p4_min);
}

double plateau_delay(const FrequencyGrid& grid) { return kPi / grid.step(); }

Plateau four_fold_plateau(const HhomConfig& config) {
  HhomConfig far = config;
  far.delay = plateau_delay(config.grid);
  const double p = four_fold(build_hhom(far), config.detector, config.limits);
  far.delay *= 0.5;
  const double q = four_fold(build_hhom(far), config.detector, config.limits);
  return Plateau{p, std::abs(p - q)};
}

RatioR ratio_R(const HhomConfig& config) {
  HhomConfig open = config;
  open.bs_angle = 0.0;
  open.delay = 0.0;
  RatioR r;
  r.p4_theta0 = four_fold(build_hhom(open), config.detector, config.limits);
  r.p4_plateau = four_fold_plateau(config).p4;
  r.max_over_plateau = r.p4_theta0 / r.p4_plateau;
  r.plateau_over_max = r.p4_plateau / r.p4_theta0;
  return r;
}

double analytic_heralded_purity(const RVector& schmidt_values) {
  RVector t2 = schmidt_values.array().tanh().square();
  const double s = t2.sum();
  if (!(s > 0.0)) throw InvalidArgument("analytic_heralded_purity: all Schmidt values vanish");
  return t2.squaredNorm() / (s * s);
}

bool mzi_monotone(const HhomConfig& config, int samples) {
  if (samples < 2) throw InvalidArgument("mzi_monotone: need at least two samples");
  HhomConfig c = config;
  c.delay = 0.0;
  double last = 0.0;
  for (int k = 0; k < samples; ++k) {
    c.bs_angle = 0.25 * kPi * k / (samples - 1);
    const double p = four_fold(build_hhom(c), c.detector, c.limits);
    if (k > 0 && p > last * (1.0 + 1e-9) + 1e-300) return false;
    last = p;
  }
  return true;
}

HhomConfig with_axis_value(const HhomConfig& base, SweepAxis axis, double value) {
  HhomConfig c = base;
  switch (axis) {
    case SweepAxis::delay: c.delay = value; break;
    case SweepAxis::angle: c.bs_angle = value; break;
    case SweepAxis::squeezing:
      c.source_a.xi = value;
      c.source_b.xi = value;
      break;
    case SweepAxis::loss: c.loss = {value, value, value, value}; break;
    case SweepAxis::filter_width:
      if (std::isinf(value)) {
        c.filter.reset();
      } else if (c.filter) {
        c.filter->half_width = value;
      } else {
        c.filter = BandpassSpec{c.grid.center(), value, {0, 1, 2, 3}};
      }
      break;
  }
  return c;
}

SweepRow evaluate_point(const HhomConfig& config, const std::string& param, double value) {
  SweepRow row;
  row.param = param;
  row.value = value;
  HhomConfig zero = config;
  zero.delay = 0.0;
  CovarianceState s = build_hhom(zero);
  Coincidences c = coincidences(s, config.detector, config.limits);
  row.p4 = c.four_fold;
  row.p_bunch = c.bunching;
  row.p_herald = heralding_rate(s, config.detector, config.limits);
  if (*row.p_herald > 0.0) {
    HeraldingEfficiency h = heralding_efficiency(zero);
    row.eta_herald = h.efficiency;
    HhomConfig open = zero;
    open.bs_angle = 0.0;
    const double p4_max = four_fold(build_hhom(open), config.detector, config.limits);
    Plateau plateau = four_fold_plateau(config);
    if (plateau.p4 > 0.0) {
      row.v_hom = visibility_hom(c.four_fold, plateau.p4);
      const double shift = c.four_fold * plateau.drift / (plateau.p4 * plateau.p4);
      if (shift > 1e-6) {
        spdlog::warn("{}={}: plateau not converged (visibility shift {:.2e})", param, value, shift);
      }
    }
    if (p4_max + c.four_fold > 0.0) row.v_mzi = visibility_mzi(p4_max, c.four_fold);
  }
  return row;
}

SweepResult sweep(const HhomConfig& base, SweepAxis axis, const std::vector<double>& values,
                  int n_threads) {
  SweepResult result;
  result.detector = to_string(base.detector);
  result.config_hash = config_hash(base);
  result.rows.resize(values.size());
  for (double v : values) {
    if (std::isnan(v) || (std::isinf(v) && axis != SweepAxis::filter_width)) {
      throw InvalidArgument("sweep: values must be finite");
    }
  }
  const bool full = axis == SweepAxis::squeezing || axis == SweepAxis::loss ||
                    axis == SweepAxis::filter_width;
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        HhomConfig c = with_axis_value(base, axis, values[i]);
        if (full) {
          result.rows[i] = evaluate_point(c, axis_name(axis), values[i]);
        } else {
          CovarianceState s = build_hhom(c);
          Coincidences co = coincidences(s, c.detector, c.limits);
          SweepRow& row = result.rows[i];
          row.param = axis_name(axis);
          row.value = values[i];
          row.p4 = co.four_fold;
          row.p_bunch = co.bunching;
          row.p_herald = heralding_rate(s, c.detector, c.limits);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(n_threads, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  // V_mzi takes its max at theta = 0 and min at pi/4; check that once.
  if (full && !values.empty() && !mzi_monotone(with_axis_value(base, axis, values.front()))) {
    spdlog::warn("sweep: P4 is not monotone in theta on [0, pi/4]; v_mzi uses the endpoints");
    result.notes.push_back("v_mzi endpoints: P4 not monotone in theta on [0, pi/4]");
  }
  return result;
}

std::string config_hash(const HhomConfig& c) {
  std::ostringstream s;
  auto src = [&](const JsaSpec& j) {
    s << static_cast<int>(j.model) << ';' << format_double(j.xi) << ';'
      << format_double(j.bandwidth) << ';' << format_double(j.walk_off) << ';'
      << format_double(j.lobe_separation) << ';' << j.relative_sign << ';'
      << format_double(j.signal_center) << ';' << format_double(j.idler_center) << '|';
  };
  src(c.source_a);
  src(c.source_b);
  s << format_double(c.grid.center()) << ';' << format_double(c.grid.step()) << ';'
    << c.grid.n_bins() << '|' << format_double(c.delay) << ';' << format_double(c.bs_angle) << '|';
  for (double e : c.loss) s << format_double(e) << ';';
  if (c.filter) {
    s << "|f" << format_double(c.filter->center) << ';' << format_double(c.filter->half_width);
    for (int m : c.filter->modes) s << ',' << m;
  }
  s << '|' << to_string(c.detector) << ';' << c.limits.max_threshold_modes << ';'
    << c.limits.pnr_cutoff << ';' << c.limits.compress;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "# detector=" << result.detector << '\n';
  out << "# config_hash=" << result.config_hash << '\n';
  for (const std::string& note : result.notes) out << "# " << note << '\n';
  out << kCsvHeader << '\n';
  for (const SweepRow& r : result.rows) {
    out << r.param << ',' << format_double(r.value) << ',' << format_optional(r.p4) << ','
        << format_optional(r.p_bunch) << ',' << format_optional(r.p_herald) << ','
        << format_optional(r.eta_herald) << ',' << format_optional(r.v_hom) << ','
        << format_optional(r.v_mzi) << '\n';
  }
}

SweepResult read_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.size() > 2 ? line.substr(2) : std::string();
      if (body.rfind("detector=", 0) == 0) {
        result.detector = body.substr(9);
      } else if (body.rfind("config_hash=", 0) == 0) {
        result.config_hash = body.substr(12);
      } else {
        result.notes.push_back(body);
      }
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw InvalidArgument("read_csv: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) throw InvalidArgument("read_csv: expected 8 fields in '" + line + "'");
    SweepRow r;
    r.param = f[0];
    auto v = parse_optional(f[1]);
    if (!v) throw InvalidArgument("read_csv: missing value column");
    r.value = *v;
    r.p4 = parse_optional(f[2]);
    r.p_bunch = parse_optional(f[3]);
    r.p_herald = parse_optional(f[4]);
    r.eta_herald = parse_optional(f[5]);
    r.v_hom = parse_optional(f[6]);
    r.v_mzi = parse_optional(f[7]);
    result.rows.push_back(std::move(r));
  }
  if (!header) throw InvalidArgument("read_csv: header row missing");
  return result;
}

}  // namespace mmg
