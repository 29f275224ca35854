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

#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "mmg/error.hpp"
#include "svg.hpp"

namespace mmg::cli {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string filter_label(double width) { return std::isinf(width) ? "none" : g6(width); }

// Value shown on plots and in the summary, in display units.
double display_value(SweepAxis axis, double v) {
  switch (axis) {
    case SweepAxis::delay: return v * 1e12;
    case SweepAxis::angle: return v * 180.0 / kPi;
    default: return v;
  }
}

const char* display_axis(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::delay: return "delay (ps)";
    case SweepAxis::angle: return "beam-splitter angle (deg)";
    case SweepAxis::squeezing: return "squeezing parameter xi";
    case SweepAxis::loss: return "loss epsilon";
    case SweepAxis::filter_width: return "filter half-width (rad/s)";
  }
  return "";
}

std::optional<double> metric(const SweepRow& r, const std::string& name) {
  if (name == "p4") return r.p4;
  if (name == "p_herald") return r.p_herald;
  if (name == "v_hom") return r.v_hom;
  return std::nullopt;
}

std::string primary_metric(Experiment e) {
  switch (e) {
    case Experiment::hom_delay_sweep:
    case Experiment::mzi_angle_sweep:
    case Experiment::structured_sources: return "p4";
    default: return "v_hom";
  }
}

std::string describe(const SweepRow& r, SweepAxis axis) {
  std::string s = r.param + "=" + g6(display_value(axis, r.value));
  if (axis == SweepAxis::delay) s += " ps";
  if (axis == SweepAxis::angle) s += " deg";
  char buf[64];
  auto add = [&](const char* name, const std::optional<double>& v) {
    if (!v) return;
    std::snprintf(buf, sizeof buf, " %s=%.6f", name, *v);
    s += buf;
  };
  add("p4", r.p4);
  add("p_herald", r.p_herald);
  add("eta_herald", r.eta_herald);
  add("v_hom", r.v_hom);
  add("v_mzi", r.v_mzi);
  return s;
}

}  // namespace

SweepResult compute_experiment(const RunConfig& config, int threads) {
  const HhomConfig& base = config.base;
  const SweepAxis axis = experiment_axis(config.experiment);
  SweepResult result;
  switch (config.experiment) {
    case Experiment::hom_delay_sweep:
    case Experiment::structured_sources: {
      result = sweep(base, axis, config.values, threads);
      const Plateau p = four_fold_plateau(base);
      result.notes.push_back("p4_plateau=" + g17(p.p4) + " tau_plateau=" +
                             g17(plateau_delay(base.grid)) + " drift=" + g17(p.drift));
      break;
    }
    case Experiment::mzi_angle_sweep: {
      result = sweep(base, axis, config.values, threads);
      const RatioR r = ratio_R(base);
      result.notes.push_back("ratio_R max_over_plateau=" + g17(r.max_over_plateau) +
                             " plateau_over_max=" + g17(r.plateau_over_max) +
                             " (p4 at theta=0 over p4 at the delay plateau; the inverse is the"
                             " other ordering)");
      break;
    }
    case Experiment::power_sweep:
    case Experiment::loss_sweep:
      result = sweep(base, axis, config.values, threads);
      break;
    case Experiment::filter_study: {
      result.detector = to_string(base.detector);
      result.config_hash = config_hash(base);
      for (double w : config.filter_widths) {
        const HhomConfig c = with_axis_value(base, SweepAxis::filter_width, w);
        SweepResult part = sweep(c, SweepAxis::squeezing, config.values, threads);
        const std::string label = "xi@filter=" + filter_label(w);
        result.notes.push_back("filter " + filter_label(w) + " config_hash=" + part.config_hash);
        for (SweepRow& r : part.rows) {
          r.param = label;
          result.rows.push_back(std::move(r));
        }
      }
      break;
    }
    case Experiment::probe: {
      result.detector = to_string(base.detector);
      result.config_hash = config_hash(base);
      result.rows.push_back(evaluate_point(base, "xi", base.source_a.xi));
      const RatioR r = ratio_R(base);
      result.notes.push_back("ratio_R max_over_plateau=" + g17(r.max_over_plateau) +
                             " plateau_over_max=" + g17(r.plateau_over_max));
      result.notes.push_back("squeezing_db=" + g17(squeezing_db(base.source_a.xi)));
      const SchmidtData sa = schmidt_decompose(build_jsa(base.source_a, base.grid));
      result.notes.push_back("analytic_heralded_purity_a=" +
                             g17(analytic_heralded_purity(sa.values)));
      break;
    }
  }
  result.notes.insert(result.notes.begin(),
                      std::string("experiment=") + to_string(config.experiment));
  return result;
}

RunOutcome run_experiment(const RunConfig& config, const RunOptions& options) {
  RunOutcome out;
  out.result = compute_experiment(config, options.threads);

  std::filesystem::create_directories(options.output_dir);
  out.csv = options.output_dir / (config.output + ".csv");
  {
    std::ofstream f(out.csv, std::ios::binary);
    if (!f) throw Error("cannot write " + out.csv.string());
    write_csv(out.result, f);
  }

  const SweepAxis axis = experiment_axis(config.experiment);
  const std::string m = primary_metric(config.experiment);
  if (config.svg && config.experiment != Experiment::probe) {
    std::map<std::string, Series> by_param;
    std::vector<std::string> order;
    for (const SweepRow& r : out.result.rows) {
      auto [it, inserted] = by_param.try_emplace(r.param);
      if (inserted) {
        it->second.label = r.param;
        order.push_back(r.param);
      }
      const std::optional<double> y = metric(r, m);
      it->second.x.push_back(display_value(axis, r.value));
      it->second.y.push_back(y ? *y : std::nan(""));
    }
    std::vector<Series> series;
    for (const std::string& p : order) series.push_back(by_param[p]);
    out.svg = options.output_dir / (config.output + ".svg");
    std::ofstream f(out.svg, std::ios::binary);
    if (!f) throw Error("cannot write " + out.svg.string());
    write_svg(f, std::string(to_string(config.experiment)) + " (" + out.result.detector + ")",
              display_axis(axis), m, series);
  }

  const SweepRow& last = out.result.rows.back();
  out.summary = std::string(to_string(config.experiment)) + ": " +
                std::to_string(out.result.rows.size()) + " rows; " + describe(last, axis) +
                " -> " + out.csv.string();
  return out;
}

}  // namespace mmg::cli
