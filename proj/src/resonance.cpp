#include "qlg/resonance.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qlg/fit.hpp"
#include "qlg/quadrature.hpp"

namespace qlg {

namespace {
constexpr double kFrozenDrift = 0.25;
}  // namespace

WaveField frozen_field(const LatticeBox& box, const RVec& eta, double eps, double t) {
  WaveField W;
  W.box = box;
  W.t = t;
  W.eps = eps;
  W.eta = eta;
  W.omega = {RVec(box.dim, 0.0)};
  W.weight = {1.0};
  W.amp.assign(box.n_entries(), cplx{});
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e), q = box.kappa2_of(e);
    double k2 = 0.0;
    int l1 = 0;
    for (int i = 0; i < box.dim; ++i) {
      const double k = 0.5 * q[i] - eta[i] - (i == 0 ? kFrozenDrift : 0.0);
      k2 += k * k;
      l1 += std::abs(xi[i]);
    }
    W.amp[e] = std::exp(-0.25 * kPi * k2) * std::pow(0.5, l1);
  }
  return W;
}

namespace {

EtaNodes tensor(int dim, const QuadRule& first, const QuadRule& other) {
  EtaNodes out;
  long total = long(first.x.size());
  for (int i = 1; i < dim; ++i) total *= long(other.x.size());
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    RVec pt(dim);
    double w = 1.0;
    for (int i = dim - 1; i >= 1; --i) {
      const long k = r % long(other.x.size());
      r /= long(other.x.size());
      pt[i] = other.x[k];
      w *= other.w[k];
    }
    pt[0] = first.x[r];
    w *= first.w[r];
    out.th.push_back(pt);
    out.w.push_back(w);
  }
  return out;
}

}  // namespace

EtaNodes eta_gauss_nodes(int dim, int per_axis) {
  const QuadRule q = gauss_legendre(per_axis, -0.25, 0.25);
  return tensor(dim, q, q);
}

EtaNodes eta_composite_nodes(int dim, int panels, int per_panel, int other_axis) {
  return tensor(dim, composite_gauss_legendre(per_panel, panels, -0.25, 0.25),
                gauss_legendre(other_axis, -0.25, 0.25));
}

TestField zero_mode_test_field(const LatticeBox& box, const PGrid& grid, const Observable& F,
                               const RVec& eta, int m) {
  TestField psi(box, grid, m);
  const IntBox kb = box.kappa_box();
  const IVec zero(box.dim, 0);
  RVec k(box.dim);
  for (long ki = 0; ki < kb.size(); ++ki) {
    const IVec q = kb.point(ki);
    for (int i = 0; i < box.dim; ++i) k[i] = 0.5 * q[i] - eta[i];
    const long e = box.entry(zero, q);
    for (long p = 0; p < grid.size(); ++p) psi.at(e, p) = F(grid.point(p), k);
  }
  return psi;
}

cplx observable_xi0(const FieldProvider& T, const Observable& F, const PGrid& grid, double t,
                    double eps, const EtaNodes& eta, int xi_radius) {
  cplx acc{};
  for (std::size_t j = 0; j < eta.th.size(); ++j) {
    const WaveField W = T(eta.th[j]);
    TestField psi = zero_mode_test_field(W.box, grid, F, eta.th[j]);
    if (xi_radius > 0) {
      const LatticeBox& box = W.box;
      const int d = box.dim;
      RVec k(d);
      for (long e = 0; e < box.n_entries(); ++e) {
        const IVec xi = box.xi_of(e), q = box.kappa2_of(e);
        long amax = 0;
        for (int v : xi) amax = std::max<long>(amax, std::abs(v));
        if (amax == 0 || amax > xi_radius) continue;
        for (int i = 0; i < d; ++i) k[i] = 0.5 * q[i] - eta.th[j][i];
        for (long p = 0; p < grid.size(); ++p) {
          const RVec pt = grid.point(p);
          double ph = 0.0;
          for (int i = 0; i < d; ++i) ph += xi[i] * (pt[i] - 4.0 * kPi * k[i] * t);
          psi.at(e, p) = std::exp(kI * (kTwoPi * ph / eps)) * F(pt, k);
        }
      }
    }
    acc += eta.w[j] * W.pair(psi);
  }
  return acc;
}

std::vector<Segment> resonance_lines(int n_radius, double box) {
  if (n_radius < 1) throw ConfigError("resonance lines need n_radius >= 1");
  if (!(box > 0)) throw ConfigError("resonance lines need a positive view box");
  std::vector<Segment> out;
  const IntBox b{2, n_radius};
  for (long i = 0; i < b.size(); ++i) {
    const IVec n = b.point(i);
    if (n[0] == 0 && n[1] == 0) continue;
    // k(s) = n + s (-n2, n1); clip s to the square.
    const double px = n[0], py = n[1], dx = -n[1], dy = n[0];
    double lo = -1e300, hi = 1e300;
    bool empty = false;
    for (auto [p, dd] : {std::pair{px, dx}, std::pair{py, dy}}) {
      if (dd == 0.0) {
        if (std::abs(p) > box) empty = true;
        continue;
      }
      double a = (-box - p) / dd, c = (box - p) / dd;
      if (a > c) std::swap(a, c);
      lo = std::max(lo, a);
      hi = std::min(hi, c);
    }
    if (empty || hi <= lo) continue;
    out.push_back({n, px + lo * dx, py + lo * dy, px + hi * dx, py + hi * dy});
  }
  return out;
}

std::vector<Segment> resonance_lines_for(const PeriodicPotential& V, double box) {
  if (V.dim() != 2) throw ConfigError("resonance picture is two-dimensional");
  const auto all = resonance_lines(std::max(1, V.radius()), box);
  std::vector<Segment> out;
  for (const auto& md : V.active_modes())
    for (const auto& s : all)
      if (s.n == md.n) out.push_back(s);
  return out;
}

std::string resonance_svg(const std::vector<Segment>& lines, double box) {
  std::ostringstream os;
  os << std::setprecision(10);
  const double size = 512.0, sc = size / (2.0 * box);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& s : lines) {
    os << "<line x1=\"" << (s.x1 + box) * sc << "\" y1=\"" << (box - s.y1) * sc << "\" x2=\""
       << (s.x2 + box) * sc << "\" y2=\"" << (box - s.y2) * sc
       << "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

double delta_kernel(double c, double tau, double eps) {
  if (!(tau > 0)) throw ConfigError("delta kernel needs tau > 0");
  const double lam = kFourPiSq * tau / eps;
  const double x = lam * c;
  const double den = kFourPiSq * kFourPiSq;
  if (std::abs(x) < 1e-6) return eps * lam * lam * (0.5 - x * x / 24.0) / den;
  const double s = std::sin(0.5 * x);
  return eps * 2.0 * s * s / (den * c * c);
}

double delta_kernel_mass(double tau, double eps, double C) {
  const double lam = kFourPiSq * tau / eps;
  const int panels = std::max(4, int(std::ceil(2.0 * lam * C / kPi)));
  const QuadRule q = composite_gauss_legendre(8, panels, 0.0, C);
  double inner = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) inner += q.w[i] * delta_kernel(q.x[i], tau, eps);
  inner *= 2.0;  // even in c
  // int_C^inf (1 - cos(lam c))/c^2 dc = 1/C - cos(lam C)/C + lam (pi/2 - Si(lam C))
  const double tail =
      1.0 / C - std::cos(lam * C) / C + lam * (0.5 * kPi - gsl_sf_Si(lam * C));
  return inner + 2.0 * eps * tail / (kFourPiSq * kFourPiSq);
}

MassSplit resonant_mass_split(const FieldProvider& T, const Observable& F, const PGrid& grid,
                              double s, double t, double eps, const EtaNodes& eta,
                              const PeriodicPotential& V, double r) {
  if (!(r > 0)) throw ConfigError("slab half-width must be positive");
  const double tau = t - s;
  MassSplit out;
  const auto modes = V.active_modes();
  for (std::size_t j = 0; j < eta.th.size(); ++j) {
    const RVec& et = eta.th[j];
    const WaveField W = T(et);
    const TField Ts = W.sample(grid, false);
    const LatticeBox& box = W.box;
    const int d = box.dim;
    const IntBox kb = box.kappa_box();
    const IVec zero(d, 0);
    RVec k(d), kn(d);
    for (long ki = 0; ki < kb.size(); ++ki) {
      const IVec q = kb.point(ki);
      const long e = box.entry(zero, q);
      for (int i = 0; i < d; ++i) k[i] = 0.5 * q[i] - et[i];
      for (const auto& md : modes) {
        double c = 0.0;
        for (int i = 0; i < d; ++i) {
          c += md.n[i] * (q[i] - 2.0 * et[i] - md.n[i]);
          kn[i] = k[i] - md.n[i];
        }
        const double K = 2.0 * std::norm(md.v) * delta_kernel(c, tau, eps);
        cplx S{};
        for (long p = 0; p < grid.size(); ++p) {
          const RVec pt = grid.point(p);
          S += Ts.at(e, p) * (F(pt, kn) - F(pt, k));
        }
        S *= grid.weight() * K * eta.w[j];
        if (std::abs(c) <= r) {
          out.on += S;
          out.on_abs += std::abs(S);
        } else {
          out.off += S;
          out.off_abs += std::abs(S);
        }
      }
    }
  }
  return out;
}

namespace {

double smooth_bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

}  // namespace

SingleModeReport single_mode_scenario(double rho, const RVec& eps_list, bool control, double tau) {
  if (!(rho > 0.0 && rho < 0.25)) throw ConfigError("single mode: rho must lie in (0, 1/4)");
  if (eps_list.size() < 2) throw ConfigError("single mode: need at least two eps values");
  // F(p, k) = f(p) g1(k1) g2(k2); with the frozen field amplitude also a product,
  // the eta, kappa sums factorise by axis. The p factor and the second axis are
  // common to every eps and only rescale the term, so the report keeps the
  // first-axis factor times the (eps independent) second-axis factor.
  auto g1 = [&](double k1) {
    if (control) return smooth_bump((k1 - 0.5) / rho);          // inside the band at +1/2
    return smooth_bump(k1 / (0.5 - 2.0 * rho));                  // |k1| < 1/2 - 2 rho, in S_1
  };
  auto g2 = [](double k2) { return smooth_bump(k2 / 0.75); };
  auto h = [](double k) { return std::exp(-0.25 * kPi * k * k); };
  auto h1 = [](double k) { return std::exp(-0.25 * kPi * (k - kFrozenDrift) * (k - kFrozenDrift)); };
  const int K2 = 6;  // 2 kappa range; covers supp g1 shifted by +-1
  // second axis: sum_kappa int d eta h g2
  const QuadRule q2 = gauss_legendre(16, -0.25, 0.25);
  double axis2 = 0.0;
  for (int qq = -K2; qq <= K2; ++qq)
    for (std::size_t i = 0; i < q2.x.size(); ++i) {
      const double k = 0.5 * qq - q2.x[i];
      axis2 += q2.w[i] * h(k) * g2(k);
    }
  SingleModeReport rep;
  for (double eps : eps_list) {
    // resolve the kernel oscillation in eta_1: period eps / (4 pi tau)
    const double period = eps / (4.0 * kPi * tau);
    const int panels = int(std::ceil(0.5 / (0.5 * period)));
    const QuadRule q1 = composite_gauss_legendre(6, panels, -0.25, 0.25);
    double acc = 0.0;
    for (int qq = -K2; qq <= K2; ++qq)
      for (std::size_t i = 0; i < q1.x.size(); ++i) {
        const double e1 = q1.x[i];
        const double k = 0.5 * qq - e1;
        const double hk = h1(k);
        for (int sg : {-1, 1}) {
          const double c = sg * (qq - 2.0 * e1 - sg);
          acc += q1.w[i] * hk * 2.0 * delta_kernel(c, tau, eps) * (g1(k - sg) - g1(k));
        }
      }
    rep.eps.push_back(eps);
    rep.term.push_back(std::abs(acc * axis2));
  }
  rep.ratio = rep.term.back() / rep.term.front();
  PeriodicPotential V(2);
  V.set({1, 0}, 1.0);
  rep.lines = resonance_lines_for(V, 2.0);
  return rep;
}

NonResonantReport observable_nonresonant_bounds(const FieldProvider& T, const Observable& F,
                                                const PGrid& grid, const LatticeBox& box,
                                                double s, double t, const RVec& eps_list,
                                                const EtaNodes& eta, const PeriodicPotential& V) {
  NonResonantReport rep;
  rep.eps = eps_list;
  rep.x1_term.assign(eps_list.size(), 0.0);
  rep.z_term.assign(eps_list.size(), 0.0);
  rep.transport_term.assign(eps_list.size(), 0.0);
  for (std::size_t j = 0; j < eta.th.size(); ++j) {
    const RVec& et = eta.th[j];
    const WaveField W = T(et);
    if (!(W.box == box)) throw ConfigError("observable: provider box differs");
    const TestField psi = zero_mode_test_field(box, grid, F, et);
    const double A = std::abs(W.pair(apply_A_star(psi, s, t, et)));
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      const double eps = eps_list[k];
      rep.x1_term[k] += eta.w[j] * std::abs(W.pair(apply_X1_star(psi, s, t, eps, et, V)));
      rep.z_term[k] += eta.w[j] * std::abs(W.pair(apply_Z_star(psi, s, t, eps, et, V)));
      rep.transport_term[k] += eta.w[j] * A;
    }
  }
  if (eps_list.size() >= 2) {
    rep.x1_slope = loglog_fit(rep.eps, rep.x1_term).slope;
    rep.z_slope = loglog_fit(rep.eps, rep.z_term).slope;
  }
  return rep;
}

}  // namespace qlg
