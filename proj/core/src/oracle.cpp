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

#include "mmg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mmg/error.hpp"

namespace mmg::oracle {
namespace {

constexpr int kMaxModes = 8;
constexpr double kPruneProbability = 1e-26;
constexpr double kTargetTolerance = 1e-14;

double sqrt_factorial(int n) {
  static std::vector<double> table = [] {
    std::vector<double> t(256);
    double f = 1.0;
    t[0] = 1.0;
    for (int i = 1; i < 256; ++i) {
      f *= i;
      t[i] = std::sqrt(f);
    }
    return t;
  }();
  return table[n];
}

double factorial(int n) {
  const double s = sqrt_factorial(n);
  return s * s;
}

void check_layout(const ModeLayout& layout) {
  if (layout.n_modes() > kMaxModes) {
    throw LimitExceeded("oracle: at most 8 modes supported, got " +
                        std::to_string(layout.n_modes()));
  }
}

int photons_in_spatial(Occupation occ, int spatial, int n_spectral) {
  int n = 0;
  for (int w = 0; w < n_spectral; ++w) n += occupation_of(occ, spatial * n_spectral + w);
  return n;
}

struct Target {
  int slot;  // < n_modes: system mode; otherwise ancilla slot - n_modes
  Complex weight;
};

struct Partial {
  Occupation system;
  Occupation ancilla;
  Complex coeff;
};

// All ways to place n photons on the targets, with multinomial weights.
void compositions(const std::vector<Target>& targets, int n, std::size_t t, Partial cur,
                  double multinomial, std::vector<Partial>& out) {
  if (t + 1 == targets.size()) {
    Complex w = cur.coeff * multinomial / factorial(n) * std::pow(targets[t].weight, n);
    const int s = targets[t].slot;
    if (s < kMaxModes) {
      cur.system = with_added(cur.system, s, n);
    } else {
      cur.ancilla = with_added(cur.ancilla, s - kMaxModes, n);
    }
    cur.coeff = w;
    out.push_back(cur);
    return;
  }
  for (int m = 0; m <= n; ++m) {
    Partial next = cur;
    next.coeff *= std::pow(targets[t].weight, m);
    const int s = targets[t].slot;
    if (s < kMaxModes) {
      next.system = with_added(next.system, s, m);
    } else {
      next.ancilla = with_added(next.ancilla, s - kMaxModes, m);
    }
    compositions(targets, n - m, t + 1, next, multinomial / factorial(m), out);
  }
}

}  // namespace

int total_photons(Occupation occ, int n_modes) {
  int n = 0;
  for (int m = 0; m < n_modes; ++m) n += occupation_of(occ, m);
  return n;
}

FockState::FockState(ModeLayout layout, int cutoff) : layout_(layout), cutoff_(cutoff) {
  check_layout(layout_);
  if (cutoff < 0 || cutoff > 255) throw InvalidArgument("FockState: cutoff must lie in [0, 255]");
  branches_.push_back(Branch{{}, {{0, Complex(1.0)}}});
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const Branch& b : branches_) {
    for (const auto& [occ, amp] : b.amplitudes) s += std::norm(amp);
  }
  return s;
}

Complex FockState::amplitude(Occupation occ) const {
  if (branches_.size() != 1) throw InvalidArgument("FockState::amplitude: state is mixed");
  auto it = branches_[0].amplitudes.find(occ);
  return it == branches_[0].amplitudes.end() ? Complex(0.0) : it->second;
}

FockState fock_from_jsa(const JsaMatrix& jsa, int signal, int idler, const ModeLayout& layout,
                        int cutoff) {
  check_layout(layout);
  const int n = layout.n_spectral();
  if (jsa.f.rows() != n || jsa.f.cols() != n) {
    throw DimensionError("fock_from_jsa: JSA size does not match the layout");
  }
  if (signal == idler) throw InvalidArgument("fock_from_jsa: modes must differ");
  layout.annihilation_index(signal, 0);
  layout.annihilation_index(idler, 0);
  SchmidtData sd = schmidt_decompose(jsa);
  std::vector<double> lambda;
  for (int l = 0; l < sd.values.size(); ++l) {
    if (sd.values(l) > 1e-8) lambda.push_back(sd.values(l));
  }
  const int r = static_cast<int>(lambda.size());

  FockState state(layout, cutoff);
  FockState::Amplitudes amps;
  const int max_pairs = cutoff / 2;
  std::vector<int> pairs(r, 0);
  double vac = 1.0;
  for (double l : lambda) vac /= std::cosh(l);
  while (true) {
    int total = 0;
    for (int p : pairs) total += p;
    if (total <= max_pairs) {
      Complex c = vac;
      Occupation occ = 0;
      for (int l = 0; l < r; ++l) {
        c *= std::pow(Complex(0.0, -std::tanh(lambda[l])), pairs[l]);
        occ = with_added(occ, signal * n + l, pairs[l]);
        occ = with_added(occ, idler * n + l, pairs[l]);
      }
      amps[occ] = c;
    }
    // odometer over pair counts, bounded by the total
    int v = r - 1;
    while (v >= 0) {
      ++pairs[v];
      int s = 0;
      for (int p : pairs) s += p;
      if (s <= max_pairs) break;
      pairs[v] = 0;
      --v;
    }
    if (v < 0) break;
  }
  state.branches()[0].amplitudes = std::move(amps);

  // Schmidt slot l -> bins: signal through U, idler through V*.
  CMatrix w = CMatrix::Identity(layout.n_modes(), layout.n_modes());
  w.block(signal * n, signal * n, n, n) = sd.u;
  w.block(idler * n, idler * n, n, n) = sd.v.conjugate();
  return apply_passive_fock(state, w);
}

FockState tensor(const FockState& a, const FockState& b) {
  if (!(a.layout() == b.layout())) throw DimensionError("tensor: layouts differ");
  const int nm = a.layout().n_modes();
  FockState out(a.layout(), a.cutoff());
  out.branches().clear();
  for (const auto& ba : a.branches()) {
    for (const auto& bb : b.branches()) {
      FockState::Branch nb;
      nb.ancilla = ba.ancilla;
      nb.ancilla.insert(nb.ancilla.end(), bb.ancilla.begin(), bb.ancilla.end());
      for (const auto& [oa, xa] : ba.amplitudes) {
        for (const auto& [ob, xb] : bb.amplitudes) {
          for (int m = 0; m < nm; ++m) {
            if (occupation_of(oa, m) && occupation_of(ob, m)) {
              throw InvalidArgument("tensor: states overlap on mode " + std::to_string(m));
            }
          }
          if (total_photons(oa, nm) + total_photons(ob, nm) > a.cutoff()) continue;
          nb.amplitudes[oa + ob] += xa * xb;
        }
      }
      out.branches().push_back(std::move(nb));
    }
  }
  return out;
}

FockState apply_passive_fock(const FockState& state, const CMatrix& alpha) {
  const int nm = state.layout().n_modes();
  if (alpha.rows() != nm || alpha.cols() != nm) {
    throw DimensionError("apply_passive_fock: matrix does not match the layout");
  }
  CMatrix defect = CMatrix::Identity(nm, nm) - alpha.adjoint() * alpha;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (defect + defect.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw UnphysicalState("apply_passive_fock: matrix is not contractive");
  }
  // One ancilla per nonzero eigenvalue of I - alpha^dagger alpha; beta rows
  // are sqrt(d_k) w_k^dagger, so beta^dagger beta completes alpha^dagger alpha.
  std::vector<CVector> beta_rows;
  for (int k = 0; k < nm; ++k) {
    const double d = es.eigenvalues()(k);
    if (d > kTargetTolerance) beta_rows.push_back(std::sqrt(d) * es.eigenvectors().col(k).conjugate());
  }
  const int na = static_cast<int>(beta_rows.size());

  std::vector<std::vector<Target>> targets(nm);
  for (int j = 0; j < nm; ++j) {
    for (int k = 0; k < nm; ++k) {
      if (std::abs(alpha(k, j)) > kTargetTolerance) targets[j].push_back({k, alpha(k, j)});
    }
    for (int a = 0; a < na; ++a) {
      const Complex b = beta_rows[a](j);
      if (std::abs(b) > kTargetTolerance) targets[j].push_back({kMaxModes + a, b});
    }
  }

  FockState out(state.layout(), state.cutoff());
  out.branches().clear();
  std::vector<Partial> cur;
  std::vector<Partial> next;
  for (const auto& branch : state.branches()) {
    std::map<Occupation, FockState::Amplitudes> by_ancilla;
    for (const auto& [occ, amp] : branch.amplitudes) {
      double norm = 1.0;
      for (int j = 0; j < nm; ++j) norm *= sqrt_factorial(occupation_of(occ, j));
      cur.assign(1, Partial{0, 0, amp / norm});
      for (int j = 0; j < nm; ++j) {
        const int nj = occupation_of(occ, j);
        if (nj == 0) continue;
        if (targets[j].empty()) {
          cur.clear();
          break;
        }
        next.clear();
        for (const Partial& p : cur) {
          compositions(targets[j], nj, 0, p, factorial(nj), next);
        }
        std::swap(cur, next);
      }
      for (const Partial& p : cur) {
        double f = 1.0;
        for (int k = 0; k < nm; ++k) f *= sqrt_factorial(occupation_of(p.system, k));
        for (int a = 0; a < na; ++a) f *= sqrt_factorial(occupation_of(p.ancilla, a));
        by_ancilla[p.ancilla][p.system] += p.coeff * f;
      }
    }
    for (auto& [anc, amps] : by_ancilla) {
      FockState::Branch nb;
      nb.ancilla = branch.ancilla;
      for (int a = 0; a < na; ++a) nb.ancilla.push_back(static_cast<std::uint8_t>(occupation_of(anc, a)));
      for (auto& [occ, amp] : amps) {
        if (std::norm(amp) > kPruneProbability) nb.amplitudes.emplace(occ, amp);
      }
      if (!nb.amplitudes.empty()) out.branches().push_back(std::move(nb));
    }
  }
  // Branches with equal ancilla records are the same orthogonal sector.
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  std::vector<FockState::Branch> merged;
  for (auto& b : out.branches()) {
    auto [it, inserted] = index.emplace(b.ancilla, merged.size());
    if (inserted) {
      merged.push_back(std::move(b));
    } else {
      for (auto& [occ, amp] : b.amplitudes) merged[it->second].amplitudes[occ] += amp;
    }
  }
  out.branches() = std::move(merged);
  return out;
}

FockState apply(const FockState& state, const Transform& t) {
  if (!(t.layout() == state.layout())) throw DimensionError("oracle::apply: layout mismatch");
  if (t.kind() == Transform::Kind::passive) return apply_passive_fock(state, t.matrix());
  const int nm = state.layout().n_modes();
  if (max_abs(t.matrix().topRightCorner(nm, nm)) > 1e-12) {
    throw InvalidArgument("oracle::apply: squeezing transforms are built with fock_from_jsa");
  }
  return apply_passive_fock(state, t.matrix().topLeftCorner(nm, nm));
}

double fock_detection(const FockState& state, const DetectionPattern& pattern) {
  const int n = state.layout().n_spectral();
  for (int m : pattern.modes()) state.layout().annihilation_index(m, 0);
  double p = 0.0;
  for (const auto& branch : state.branches()) {
    for (const auto& [occ, amp] : branch.amplitudes) {
      bool match = true;
      for (std::size_t i = 0; i < pattern.modes().size() && match; ++i) {
        const int k = photons_in_spatial(occ, pattern.modes()[i], n);
        if (pattern.is_pnr()) {
          match = k == pattern.counts()[i];
        } else {
          match = (pattern.clicks()[i] == Click::on) == (k > 0);
        }
      }
      if (match) p += std::norm(amp);
    }
  }
  return p;
}

double fock_vacuum_probability(const FockState& state, const std::vector<int>& modes) {
  std::vector<Click> off(modes.size(), Click::off);
  return fock_detection(state, DetectionPattern::threshold(modes, off));
}

double heralded_purity(const FockState& state, int herald_mode, int heralded_mode) {
  const int n = state.layout().n_spectral();
  if (herald_mode == heralded_mode) throw InvalidArgument("heralded_purity: modes must differ");
  Occupation mask = 0;
  for (int w = 0; w < n; ++w) mask |= Occupation{0xFF} << (8 * (heralded_mode * n + w));
  // environment -> (heralded sub-occupation -> amplitude)
  std::map<std::pair<std::size_t, Occupation>, std::map<Occupation, Complex>> env;
  std::map<Occupation, int> basis;
  for (std::size_t b = 0; b < state.branches().size(); ++b) {
    for (const auto& [occ, amp] : state.branches()[b].amplitudes) {
      if (photons_in_spatial(occ, herald_mode, n) != 1) continue;
      env[{b, occ & ~mask}][occ & mask] += amp;
      basis.emplace(occ & mask, 0);
    }
  }
  int idx = 0;
  for (auto& [occ, i] : basis) i = idx++;
  CMatrix rho = CMatrix::Zero(idx, idx);
  for (const auto& [key, vec] : env) {
    CVector v = CVector::Zero(idx);
    for (const auto& [occ, amp] : vec) v(basis[occ]) = amp;
    rho += v * v.adjoint();
  }
  const double p = rho.trace().real();
  if (!(p > 0.0)) throw InvalidArgument("heralded_purity: herald probability is zero");
  rho /= p;
  return (rho * rho).trace().real();
}

}  // namespace mmg::oracle
