#include "qlg/drivers.hpp"

#include <cmath>

#include "qlg/quadrature.hpp"

namespace qlg {

namespace {

double lin(const IVec& n, const IVec& kappa2, const RVec& eta, const IVec& extra, int sign_extra) {
  // n . (2 kappa - 2 eta + sign_extra * extra)
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i)
    s += n[i] * (kappa2[i] - 2.0 * eta[i] + sign_extra * extra[i]);
  return s;
}

IVec add(const IVec& a, const IVec& b, int sb = 1) {
  IVec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += sb * b[i];
  return r;
}

// (e^{ix} - 1)/(ix) without cancellation: e^{ix/2} sin(x/2)/(x/2).
cplx expm1_over(double x) {
  const double h = 0.5 * x;
  const double sinc = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
  return std::exp(kI * h) * sinc;
}

// Accumulates out(xi, kappa) += coef * in(xi + dxi, kappa + dk2/2) over every entry
// of the box, with out-of-box reads as zero. coef may depend on the entry.
template <class Coef>
void shifted_add(const TestField& in, TestField& out, const IVec& dxi, const IVec& dk2, Coef coef) {
  const LatticeBox& box = in.box;
  const long np = in.np();
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e);
    const IVec q = box.kappa2_of(e);
    const long src = box.entry(add(xi, dxi), add(q, dk2));
    if (src < 0) continue;
    const cplx c = coef(xi, q);
    if (c == cplx{}) continue;
    const cplx* r = in.row(src);
    cplx* o = out.row(e);
    for (long p = 0; p < np; ++p) o[p] += c * r[p];
  }
}

}  // namespace

PhaseSet phase_set(const IVec& n, const IVec& np_, const IVec& xi, const IVec& q, const RVec& eta) {
  PhaseSet ph{};
  const int d = int(n.size());
  auto f = [&](const IVec& v, const IVec& kap2, const IVec& extra) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += v[i] * (kap2[i] - 2.0 * eta[i] + extra[i]);
    return kFourPiSq * s;
  };
  IVec e(d);
  for (int i = 0; i < d; ++i) e[i] = -n[i] - xi[i];
  ph.a1 = f(n, q, e);
  for (int i = 0; i < d; ++i) e[i] = n[i] + xi[i];
  ph.a2 = f(n, q, e);
  for (int i = 0; i < d; ++i) e[i] = -2 * n[i] - np_[i] - xi[i];
  ph.b1 = f(np_, q, e);
  for (int i = 0; i < d; ++i) e[i] = np_[i] + xi[i];
  ph.b2 = f(np_, q, e);
  for (int i = 0; i < d; ++i) e[i] = -np_[i] - xi[i];
  ph.b3 = f(np_, q, e);
  for (int i = 0; i < d; ++i) e[i] = 2 * n[i] + np_[i] + xi[i];
  ph.b4 = f(np_, q, e);
  ph.alpha1 = f(n, q, np_);
  for (int i = 0; i < d; ++i) e[i] = -np_[i];
  ph.alpha2 = f(n, q, e);
  for (int i = 0; i < d; ++i) e[i] = -n[i];
  ph.beta1 = f(np_, q, e);
  ph.beta2 = f(np_, q, n);
  ph.c1 = f(n, q, e);
  ph.c2 = f(n, q, n);
  return ph;
}

cplx exp_integral(double c, double s, double t) {
  const double tau = t - s;
  return std::exp(kI * (c * s)) * tau * expm1_over(c * tau);
}

cplx phi_st(double a, double b, double s, double t) {
  const double tau = t - s;
  if (tau <= 0.0) return cplx{};
  const cplx shift = std::exp(kI * ((a + b) * s));
  if (a == 0.0 && b == 0.0) return 0.5 * tau * tau;
  if (std::max(std::abs(a), std::abs(b)) * tau < 0.1) {
    // sum_{j,k} (ia)^j (ib)^k tau^{j+k+2} / (j! k! (k+1)(j+k+2))
    cplx acc{};
    cplx pa = 1.0;
    double fj = 1.0;
    for (int j = 0; j < 24; ++j) {
      cplx pb = 1.0;
      double fk = 1.0;
      for (int k = 0; j + k < 24; ++k) {
        acc += pa * pb * std::pow(tau, j + k + 2) / (fj * fk * (k + 1) * (j + k + 2));
        pb *= kI * b;
        fk *= (k + 1);
      }
      pa *= kI * a;
      fj *= (j + 1);
    }
    return shift * acc;
  }
  if (a + b == 0.0) {
    // resonant branch: -[tau/(ia) - (e^{i a tau} - 1)/(ia)^2]
    const cplx ia = kI * a;
    return -(tau / ia - tau * expm1_over(a * tau) / ia);
  }
  if (b == 0.0) {
    const cplx ia = kI * a;
    return tau * std::exp(kI * (a * t)) / ia - exp_integral(a, s, t) / ia;
  }
  if (a == 0.0) {
    const cplx ib = kI * b;
    return (exp_integral(b, s, t) - tau * std::exp(kI * (b * s))) / ib;
  }
  if (std::abs(b) >= std::abs(a))
    return (exp_integral(a + b, s, t) - std::exp(kI * (b * s)) * exp_integral(a, s, t)) / (kI * b);
  return (std::exp(kI * (a * t)) * exp_integral(b, s, t) - exp_integral(a + b, s, t)) / (kI * a);
}

TestField apply_A_star(const TestField& psi, double s, double t, const RVec& eta) {
  if (psi.m < 1) throw ConfigError("transport driver needs a test field of order >= 1");
  TestField out(psi.box, psi.grid, psi.m - 1);
  const int d = psi.box.dim;
  const long np = psi.np();
  for (int i = 0; i < d; ++i) {
    const auto g = p_derivative(psi, i, 1);
    for (long e = 0; e < psi.box.n_entries(); ++e) {
      const double kv = 0.5 * psi.box.kappa2_of(e)[i] - eta[i];
      const double c = 4.0 * kPi * (t - s) * kv;
      for (long p = 0; p < np; ++p) out.at(e, p) += c * g[e * np + p];
    }
  }
  return out;
}

TestField apply_Q_star(const TestField& psi, double u, double eps, const RVec& eta,
                       const PeriodicPotential& V) {
  TestField out(psi.box, psi.grid, psi.m);
  const double pref = 1.0 / std::sqrt(eps);
  for (const auto& md : V.active_modes()) {
    const IVec& n = md.n;
    IVec mn(n);
    for (auto& c : mn) c = -c;
    shifted_add(psi, out, n, mn, [&](const IVec& xi, const IVec& q) {
      const double a1 = kFourPiSq * lin(n, q, eta, add(n, xi), -1) / eps;
      return kI * pref * md.v * std::exp(kI * (a1 * u));
    });
    shifted_add(psi, out, n, n, [&](const IVec& xi, const IVec& q) {
      const double a2 = kFourPiSq * lin(n, q, eta, add(n, xi), 1) / eps;
      return -kI * pref * md.v * std::exp(kI * (a2 * u));
    });
  }
  return out;
}

TestField apply_X1_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                        const PeriodicPotential& V) {
  TestField out(psi.box, psi.grid, psi.m);
  const double pref = 1.0 / std::sqrt(eps);
  for (const auto& md : V.active_modes()) {
    const IVec& n = md.n;
    IVec mn(n);
    for (auto& c : mn) c = -c;
    shifted_add(psi, out, n, mn, [&](const IVec& xi, const IVec& q) {
      const double a1 = kFourPiSq * lin(n, q, eta, add(n, xi), -1) / eps;
      return kI * pref * md.v * exp_integral(a1, s, t);
    });
    shifted_add(psi, out, n, n, [&](const IVec& xi, const IVec& q) {
      const double a2 = kFourPiSq * lin(n, q, eta, add(n, xi), 1) / eps;
      return -kI * pref * md.v * exp_integral(a2, s, t);
    });
  }
  return out;
}

namespace {

// Shared walk over the four (n, n') families of Q*Q*. `keep(family, n, n', xi)`
// selects the terms; returns the assembled field.
template <class Keep>
TestField second_order(const TestField& psi, double s, double t, double eps, const RVec& eta,
                       const PeriodicPotential& V, Keep keep) {
  TestField out(psi.box, psi.grid, psi.m);
  const auto modes = V.active_modes();
  const int d = psi.box.dim;
  for (const auto& m1 : modes)
    for (const auto& m2 : modes) {
      const IVec& n = m1.n;
      const IVec& np_ = m2.n;
      const cplx vv = m1.v * m2.v / eps;
      const IVec dxi = add(n, np_);
      // family 1: -, kappa - n/2 - n'/2, phases (b1, a1)
      // family 2: +, kappa - n/2 + n'/2, phases (b2, a1)
      // family 3: +, kappa + n/2 - n'/2, phases (b3, a2)
      // family 4: -, kappa + n/2 + n'/2, phases (b4, a2)
      const int sn[4] = {-1, -1, 1, 1};
      const int snp[4] = {-1, 1, -1, 1};
      const double sign[4] = {-1.0, 1.0, 1.0, -1.0};
      for (int f = 0; f < 4; ++f) {
        IVec dk(d);
        for (int i = 0; i < d; ++i) dk[i] = sn[f] * n[i] + snp[f] * np_[i];
        shifted_add(psi, out, dxi, dk, [&](const IVec& xi, const IVec& q) -> cplx {
          if (!keep(f, n, np_, xi)) return cplx{};
          const PhaseSet ph = phase_set(n, np_, xi, q, eta);
          const double a = (f < 2 ? ph.a1 : ph.a2) / eps;
          const double bs[4] = {ph.b1, ph.b2, ph.b3, ph.b4};
          return sign[f] * vv * phi_st(bs[f] / eps, a, s, t);
        });
      }
    }
  return out;
}

// The resonant index set collected by Y.
bool resonant_pair(int family, const IVec& n, const IVec& np_, const IVec& xi) {
  for (std::size_t i = 0; i < n.size(); ++i)
    if (np_[i] != -n[i]) return false;
  if (family == 0 || family == 3) return true;
  return idot(n, xi) == 0;
}

}  // namespace

TestField apply_Y_eps_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                           const PeriodicPotential& V) {
  // Written directly from the displayed sum over n; the family walk is kept for Z.
  TestField out(psi.box, psi.grid, psi.m);
  for (const auto& md : V.active_modes()) {
    const IVec& n = md.n;
    const double w = std::norm(md.v) / eps;
    IVec zero(n.size(), 0), mn2(n.size()), pn2(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
      mn2[i] = -2 * n[i];
      pn2[i] = 2 * n[i];
    }
    auto a1 = [&](const IVec& xi, const IVec& q) {
      return kFourPiSq * lin(n, q, eta, add(n, xi), -1) / eps;
    };
    auto a2 = [&](const IVec& xi, const IVec& q) {
      return kFourPiSq * lin(n, q, eta, add(n, xi), 1) / eps;
    };
    shifted_add(psi, out, zero, zero, [&](const IVec& xi, const IVec& q) {
      return -w * phi_st(-a1(xi, q), a1(xi, q), s, t) - w * phi_st(-a2(xi, q), a2(xi, q), s, t);
    });
    shifted_add(psi, out, zero, mn2, [&](const IVec& xi, const IVec& q) -> cplx {
      if (idot(n, xi) != 0) return cplx{};
      return w * phi_st(-a1(xi, q), a1(xi, q), s, t);
    });
    shifted_add(psi, out, zero, pn2, [&](const IVec& xi, const IVec& q) -> cplx {
      if (idot(n, xi) != 0) return cplx{};
      return w * phi_st(-a2(xi, q), a2(xi, q), s, t);
    });
  }
  return out;
}

TestField apply_Z_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                       const PeriodicPotential& V) {
  return second_order(psi, s, t, eps, eta, V,
                      [](int f, const IVec& n, const IVec& np_, const IVec& xi) {
                        return !resonant_pair(f, n, np_, xi);
                      });
}

TestField apply_X2_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                        const PeriodicPotential& V) {
  return second_order(psi, s, t, eps, eta, V,
                      [](int, const IVec&, const IVec&, const IVec&) { return true; });
}

double max_phase(const LatticeBox& box, const RVec& eta, const PeriodicPotential& V) {
  double best = 0.0;
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e);
    const IVec q = box.kappa2_of(e);
    for (const auto& m1 : V.active_modes())
      for (const auto& m2 : V.active_modes()) {
        const PhaseSet ph = phase_set(m1.n, m2.n, xi, q, eta);
        for (double v : {ph.a1, ph.a2, ph.b1, ph.b2, ph.b3, ph.b4})
          best = std::max(best, std::abs(v));
      }
  }
  return best;
}

cplx remainder_natural(const History& history, const TestField& psi, double s, double t,
                       double eps, const RVec& eta, const PeriodicPotential& V, int nodes) {
  if (psi.m < 2) throw ConfigError("the remainder needs a test field of order 2");
  if (t <= s) return cplx{};
  // Panels sized so each carries at most ~12 radians of the fastest driver phase
  // (pairs of phases add, hence the factor 2).
  const double omega = 2.0 * max_phase(psi.box, eta, V) / eps + 1.0;
  const int panels = std::max(1, int(std::ceil(omega * (t - s) / 12.0)));
  const QuadRule rule = composite_gauss_legendre(nodes, panels, s, t);
  const TestField Apsi = apply_A_star(psi, 0.0, 1.0, eta);
  const TestField AApsi = apply_A_star(Apsi, 0.0, 1.0, eta);
  cplx acc{};
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double v = rule.x[k];
    TestField G = (t - v) * (AApsi + apply_Q_star(Apsi, v, eps, eta, V));
    G += apply_A_star(apply_X1_star(psi, v, t, eps, eta, V), 0.0, 1.0, eta);
    const TestField X2 = apply_X2_star(psi, v, t, eps, eta, V);
    G += apply_A_star(X2, 0.0, 1.0, eta);
    G += apply_Q_star(X2, v, eps, eta, V);
    acc += rule.w[k] * history(v).pair(G);
  }
  return acc;
}

cplx remainder_sharp(const History& history, const TestField& psi, double s, double t, double eps,
                     const RVec& eta, const PeriodicPotential& V) {
  if (psi.m < 1) throw ConfigError("the sharp remainder needs a test field of order 1");
  if (t <= s) return cplx{};
  const WaveField Ts = history(s);
  const WaveField Tt = history(t);
  return Tt.pair(psi) - Ts.pair(psi) - Ts.pair(apply_X1_star(psi, s, t, eps, eta, V));
}

cplx remainder_increment(const WaveField& Ts, const WaveField& Tt, const TestField& psi,
                         const PeriodicPotential& V) {
  const double s = Ts.t, t = Tt.t, eps = Ts.eps;
  TestField G = apply_A_star(psi, s, t, Ts.eta);
  G += apply_X1_star(psi, s, t, eps, Ts.eta, V);
  G += apply_X2_star(psi, s, t, eps, Ts.eta, V);
  return Tt.pair(psi) - Ts.pair(psi) - Ts.pair(G);
}

}  // namespace qlg
