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

#include "mmg/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mmg/elements.hpp"
#include "mmg/error.hpp"

namespace mmg::oracle {
namespace {

std::string format_counts(const std::vector<int>& counts) {
  std::string s = "pnr(";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(counts[i]);
  }
  return s + ")";
}

std::string format_ternary(const std::vector<int>& state) {
  std::string s = "thr(";
  for (int v : state) s += v == 0 ? '-' : v == 1 ? '0' : '1';
  return s + ")";
}

}  // namespace

CovarianceState gaussian_output(const Circuit& circuit) {
  CovarianceState s = vacuum_state(circuit.layout);
  for (const Circuit::Source& src : circuit.sources) {
    s = apply(s, squeezer(src.jsa, src.signal, src.idler, circuit.layout));
  }
  for (const Transform& t : circuit.elements) s = apply(s, t);
  return s;
}

FockState fock_output(const Circuit& circuit, int cutoff) {
  FockState s(circuit.layout, cutoff);
  bool first = true;
  for (const Circuit::Source& src : circuit.sources) {
    FockState f = fock_from_jsa(src.jsa, src.signal, src.idler, circuit.layout, cutoff);
    s = first ? std::move(f) : tensor(s, f);
    first = false;
  }
  // The passive part is applied as a single contractive map, so only one
  // set of ancillas is needed for all losses and filters.
  const int nm = circuit.layout.n_modes();
  CMatrix alpha = CMatrix::Identity(nm, nm);
  for (const Transform& t : circuit.elements) {
    if (t.kind() == Transform::Kind::passive) {
      alpha = t.matrix() * alpha;
      continue;
    }
    if (max_abs(t.matrix().topRightCorner(nm, nm)) > 1e-12) {
      throw InvalidArgument("fock_output: circuit elements must be passive");
    }
    alpha = t.matrix().topLeftCorner(nm, nm) * alpha;
  }
  if (!circuit.elements.empty()) s = apply_passive_fock(s, alpha);
  return s;
}

Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& options) {
  if (options.max_spatial < 2 || options.max_spectral < 1) {
    throw InvalidArgument("random_circuit: need at least two spatial and one spectral mode");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  const int ns = pick(2, options.max_spatial);
  const int nf = pick(1, options.max_spectral);
  Circuit c;
  c.layout = ModeLayout(ns, nf);
  const FrequencyGrid grid(0.0, 1e12, nf);
  char buf[160];
  std::snprintf(buf, sizeof buf, "N_s=%d N_f=%d", ns, nf);
  c.description = buf;

  auto random_jsa = [&](double xi) {
    CMatrix f(nf, nf);
    for (int i = 0; i < nf; ++i) {
      for (int j = 0; j < nf; ++j) f(i, j) = Complex(normal(rng), normal(rng));
    }
    f *= xi / f.norm();
    return JsaMatrix{f, grid, grid};
  };
  auto add_source = [&](int a, int b) {
    const double xi = options.max_xi * (0.1 + 0.9 * unit(rng));
    if (unit(rng) < 0.5) std::swap(a, b);
    c.sources.push_back({random_jsa(xi), a, b});
    std::snprintf(buf, sizeof buf, " src(%d,%d;xi=%.3f)", a, b, xi);
    c.description += buf;
  };
  add_source(0, 1);
  if (ns >= 4) add_source(2, 3);

  const int n_elements = pick(2, 6);
  for (int e = 0; e < n_elements; ++e) {
    const int kind = pick(0, 4);
    const int m = pick(0, ns - 1);
    switch (kind) {
      case 0: {
        int m2 = pick(0, ns - 2);
        if (m2 >= m) ++m2;
        const double theta = kPi * unit(rng);
        c.elements.push_back(beam_splitter(theta, {m, m2}, c.layout));
        std::snprintf(buf, sizeof buf, " bs(%d,%d;%.3f)", m, m2, theta);
        break;
      }
      case 1: {
        const double phi = 2.0 * kPi * unit(rng);
        c.elements.push_back(phase_shifter(phi, m, c.layout));
        std::snprintf(buf, sizeof buf, " ps(%d;%.3f)", m, phi);
        break;
      }
      case 2: {
        const double tau = 4e-12 * (unit(rng) - 0.5);
        c.elements.push_back(delay(tau, m, grid, c.layout));
        std::snprintf(buf, sizeof buf, " delay(%d;%.3gs)", m, tau);
        break;
      }
      case 3: {
        const double eps = 0.6 * unit(rng);
        std::vector<int> modes;
        for (int k = 0; k < ns; ++k) {
          if (k == m || unit(rng) < 0.3) modes.push_back(k);
        }
        c.elements.push_back(loss(eps, modes, c.layout));
        std::snprintf(buf, sizeof buf, " loss(%zu modes;%.3f)", modes.size(), eps);
        break;
      }
      default: {
        const int bin = pick(0, nf - 1);
        const int modes[] = {m};
        c.elements.push_back(
            bandpass_filter(grid.bin_frequency(bin), 0.5 * grid.step(), modes, grid, c.layout));
        std::snprintf(buf, sizeof buf, " filter(%d;bin %d)", m, bin);
        break;
      }
    }
    c.description += buf;
  }
  return c;
}

Agreement compare_with_gaussian(const Circuit& circuit, int max_total, double deficit_target,
                                int max_cutoff) {
  const int ns = circuit.layout.n_spatial();
  Agreement out;
  out.cutoff = std::max(2, max_total + 2);
  FockState fock = fock_output(circuit, out.cutoff);
  double previous = 1.0;
  while (fock.truncation_deficit() > deficit_target && out.cutoff < max_cutoff) {
    // The deficit falls roughly geometrically with the cutoff; skip ahead
    // using the last observed ratio.
    const double d = fock.truncation_deficit();
    const double ratio = d / previous;
    int steps = 1;
    if (ratio > 0.0 && ratio < 0.5) {
      steps = std::max(1, static_cast<int>(std::ceil(std::log(deficit_target / d) / std::log(ratio))));
    }
    previous = d;
    out.cutoff = std::min(max_cutoff, out.cutoff + 2 * steps);
    fock = fock_output(circuit, out.cutoff);
  }
  out.truncation_deficit = fock.truncation_deficit();

  const CovarianceState state = gaussian_output(circuit);
  std::vector<int> all(ns);
  for (int i = 0; i < ns; ++i) all[i] = i;
  DetectionLimits limits;
  limits.pnr_cutoff = ns * max_total;
  const GaussianDetector det(state, all, limits);

  auto record = [&](double gaussian, double oracle, const std::string& label) {
    const double d = std::abs(gaussian - oracle);
    ++out.patterns;
    if (out.worst_pattern.empty() || d > out.max_deviation) {
      out.max_deviation = d;
      out.worst_pattern = label;
    }
  };

  // Born-rule histogram of per-spatial-mode counts, clipped at max_total + 1,
  // from which every requested pattern is a partial sum.
  const int cap = max_total + 1;
  std::vector<int> cells(ns + 1, 1);
  for (int i = 0; i < ns; ++i) cells[i + 1] = cells[i] * (cap + 1);
  std::vector<double> hist(cells[ns], 0.0);
  const int nf = circuit.layout.n_spectral();
  for (const FockState::Branch& b : fock.branches()) {
    for (const auto& [occ, amp] : b.amplitudes) {
      int cell = 0;
      for (int i = 0; i < ns; ++i) {
        int n = 0;
        for (int w = 0; w < nf; ++w) n += occupation_of(occ, i * nf + w);
        cell += std::min(n, cap) * cells[i];
      }
      hist[cell] += std::norm(amp);
    }
  }

  // Ternary assignment per mode: 0 unmeasured, 1 off, 2 on.
  std::vector<int> t(ns, 0);
  while (true) {
    int k = 0;
    while (k < ns && t[k] == 2) t[k++] = 0;
    if (k == ns) break;
    ++t[k];
    std::uint32_t on = 0, off = 0;
    for (int i = 0; i < ns; ++i) {
      if (t[i] == 1) off |= 1u << i;
      if (t[i] == 2) on |= 1u << i;
    }
    double o = 0.0;
    for (int cell = 0; cell < cells[ns]; ++cell) {
      bool match = true;
      for (int i = 0; i < ns && match; ++i) {
        const int n = cell / cells[i] % (cap + 1);
        if (t[i] == 1) match = n == 0;
        if (t[i] == 2) match = n > 0;
      }
      if (match) o += hist[cell];
    }
    const double g = on == 0 ? det.p_off(off) : det.p_threshold(on, off);
    record(g, o, format_ternary(t));
  }

  const PnrTable table = det.pnr_table(std::vector<int>(ns, max_total));
  for (std::size_t f = 0; f < table.probabilities.size(); ++f) {
    std::vector<int> n = table.shape->multi_index(f);
    int total = 0, cell = 0;
    for (int i = 0; i < ns; ++i) {
      total += n[i];
      cell += n[i] * cells[i];
    }
    if (total > max_total) continue;
    record(table.probabilities[f], hist[cell], format_counts(n));
  }
  return out;
}

}  // namespace mmg::oracle
