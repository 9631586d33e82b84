#include "qlg/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlg/fit.hpp"
#include "qlg/scale.hpp"

namespace qlg {

namespace {

std::string vec_str(const IVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

CollisionKernel build_collision_kernel(const LatticeBox& box, const RVec& eta,
                                       const PeriodicPotential& V, double tol) {
  CollisionKernel K;
  K.box = box;
  const int d = box.dim;
  const auto modes = V.active_modes();
  const cplx pref = kI / kFourPiSq;
  std::vector<double> rowsum(box.n_entries(), 0.0);
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e);
    const IVec q = box.kappa2_of(e);
    for (const auto& md : modes) {
      const IVec& n = md.n;
      const double w = std::norm(md.v);
      double den1 = 0.0, den2 = 0.0;
      for (int i = 0; i < d; ++i) {
        den1 += n[i] * (q[i] - 2.0 * eta[i] - xi[i] - n[i]);
        den2 += n[i] * (q[i] - 2.0 * eta[i] + xi[i] + n[i]);
      }
      if (std::abs(den1) < tol || std::abs(den2) < tol)
        throw ConfigError("limit collision: vanishing denominator at n=" + vec_str(n) +
                          " 2kappa=" + vec_str(q) + " xi=" + vec_str(xi));
      const bool perp = idot(n, xi) == 0;
      auto add = [&](const IVec& qq, cplx c) {
        const long col = box.entry(xi, qq);
        if (col < 0) return;
        K.terms.push_back({e, col, c});
        rowsum[e] += std::abs(c);
      };
      add(q, pref * w / den1 + pref * w / den2);
      if (perp) {
        IVec qm(q), qp(q);
        for (int i = 0; i < d; ++i) {
          qm[i] -= 2 * n[i];
          qp[i] += 2 * n[i];
        }
        add(qm, -pref * w / den1);
        add(qp, -pref * w / den2);
      }
    }
  }
  // Merge duplicates so the kernel is canonical.
  std::sort(K.terms.begin(), K.terms.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<CollisionKernel::Term> merged;
  for (const auto& t : K.terms) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().w += t.w;
    else
      merged.push_back(t);
  }
  K.terms = std::move(merged);
  K.row_sum_bound = rowsum.empty() ? 0.0 : *std::max_element(rowsum.begin(), rowsum.end());
  return K;
}

TestField limit_collision_apply(const TestField& psi, const RVec& eta, const PeriodicPotential& V) {
  const CollisionKernel K = build_collision_kernel(psi.box, eta, V);
  TestField out(psi.box, psi.grid, psi.m);
  const long np = psi.np();
  for (const auto& t : K.terms) {
    const cplx* in = psi.row(t.col);
    cplx* o = out.row(t.row);
    for (long p = 0; p < np; ++p) o[p] += t.w * in[p];
  }
  return out;
}

void collision_forward(const CollisionKernel& K, const cplx* in, cplx* out, long stride) {
  for (const auto& t : K.terms) out[t.col * stride] += t.w * in[t.row * stride];
}

ConvergenceReport y_eps_convergence(const TestField& psi, double s, double t, const RVec& eta,
                                    const PeriodicPotential& V, const RVec& eps_list) {
  ConvergenceReport rep;
  const TestField lim = (t - s) * limit_collision_apply(psi, eta, V);
  for (double eps : eps_list) {
    const TestField diff = apply_Y_eps_star(psi, s, t, eps, eta, V) - lim;
    rep.eps.push_back(eps);
    rep.gap.push_back(em_norm(diff, 0));
  }
  bool positive = rep.eps.size() >= 2;
  for (double g : rep.gap) positive = positive && g > 0.0;
  if (positive) rep.slope = loglog_fit(rep.eps, rep.gap).slope;
  return rep;
}

std::vector<WaveField> boltzmann_evolve(const WaveField& T0, const PeriodicPotential& V,
                                        const RVec& times, double dt) {
  if (!(dt > 0.0)) throw ConfigError("boltzmann: time step must be positive");
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < T0.t))
    throw ConfigError("boltzmann: output times must be sorted and not before the initial time");
  const LatticeBox& box = T0.box;
  const CollisionKernel K = build_collision_kernel(box, T0.eta, V);
  if (K.row_sum_bound * dt > 0.5)
    throw ConfigError("boltzmann: step too large for the collision operator (||Y|| dt > 1/2)");
  const long ne = box.n_entries(), nn = T0.n_nodes();
  const int d = box.dim;
  // D_j(e) = -8 pi^2 i (kappa - eta).omega_j
  auto rate = [&](long j, long e) {
    const IVec q = box.kappa2_of(e);
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += (0.5 * q[i] - T0.eta[i]) * T0.omega[j][i];
    return -2.0 * kFourPiSq * kI * s;
  };
  std::vector<WaveField> out;
  WaveField cur = T0;
  std::vector<cplx> k1(ne), k2(ne), k3(ne), k4(ne), tmp(ne), rates(ne);
  // Right side in the interaction picture: C' = e^{-D t'} Y e^{D t'} C with t' = local time.
  auto rhs = [&](const std::vector<cplx>& C, double tl, std::vector<cplx>& o) {
    for (long e = 0; e < ne; ++e) tmp[e] = std::exp(rates[e] * tl) * C[e];
    std::fill(o.begin(), o.end(), cplx{});
    collision_forward(K, tmp.data(), o.data(), 1);
    for (long e = 0; e < ne; ++e) o[e] *= std::exp(-rates[e] * tl);
  };
  for (double target : times) {
    const double span = target - cur.t;
    const int steps = span > 0 ? int(std::ceil(span / dt - 1e-12)) : 0;
    if (steps > 0) {
      const double h = span / steps;
      for (long j = 0; j < nn; ++j) {
        for (long e = 0; e < ne; ++e) rates[e] = rate(j, e);
        std::vector<cplx> C(cur.amps(j), cur.amps(j) + ne), Y(ne);
        // Each step restarts the interaction picture at its left end.
        for (int s = 0; s < steps; ++s) {
          rhs(C, 0.0, k1);
          for (long e = 0; e < ne; ++e) Y[e] = C[e] + 0.5 * h * k1[e];
          rhs(Y, 0.5 * h, k2);
          for (long e = 0; e < ne; ++e) Y[e] = C[e] + 0.5 * h * k2[e];
          rhs(Y, 0.5 * h, k3);
          for (long e = 0; e < ne; ++e) Y[e] = C[e] + h * k3[e];
          rhs(Y, h, k4);
          for (long e = 0; e < ne; ++e)
            C[e] = std::exp(rates[e] * h) *
                   (C[e] + h / 6.0 * (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e]));
        }
        std::copy(C.begin(), C.end(), cur.amps(j));
      }
    }
    cur.t = target;
    out.push_back(cur);
  }
  return out;
}

ComparisonReport compare_to_limit(const std::vector<WaveField>& sim,
                                  const std::vector<WaveField>& limit,
                                  const std::vector<TestField>& psi_set) {
  if (sim.size() != limit.size()) throw ConfigError("compare: snapshot counts differ");
  ComparisonReport rep;
  rep.sup_gap.assign(psi_set.size(), 0.0);
  for (std::size_t k = 0; k < sim.size(); ++k) {
    if (std::abs(sim[k].t - limit[k].t) > 1e-12) throw ConfigError("compare: snapshot times differ");
    for (std::size_t i = 0; i < psi_set.size(); ++i) {
      const double gap = std::abs(sim[k].pair(psi_set[i]) - limit[k].pair(psi_set[i]));
      rep.rows.push_back({int(i), sim[k].t, gap});
      rep.sup_gap[i] = std::max(rep.sup_gap[i], gap);
    }
  }
  return rep;
}

}  // namespace qlg
