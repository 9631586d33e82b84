// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qlg/bfz.hpp"
#include "qlg/boltzmann.hpp"
#include "qlg/divisors.hpp"
#include "qlg/drivers.hpp"
#include "qlg/dynamics.hpp"
#include "qlg/fields.hpp"
#include "qlg/fit.hpp"
#include "qlg/quadrature.hpp"
#include "qlg/resonance.hpp"
#include "qlg/scale.hpp"
#include "qlg/wigner.hpp"

using namespace qlg;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

// Smooth wavefunction spread over the two cells [-1, 1).
SampledWavefunction two_cell_state(int q) {
  return SampledWavefunction::from_function(
      [](const RVec& x) {
        return bump(x[0] / 0.95) * std::exp(kI * (kTwoPi * 0.7 * x[0])) * (1.0 + 0.3 * x[0]);
      },
      1, 1, q);
}

// 1. BFZ unitarity and inversion.
Outcome bfz_unitarity() {
  const auto phi = two_cell_state(128);
  const BfzField f = bfz_forward(phi, 64, 128);
  const double norm_err = std::abs(std::sqrt(f.norm2()) - std::sqrt(phi.norm2())) / std::sqrt(phi.norm2());
  const auto back = bfz_inverse(f);
  double num2 = 0.0;
  for (long i = 0; i < phi.size(); ++i) num2 += std::norm(back.values[i] - phi.values[i]);
  const double trip = std::sqrt(num2 * phi.h() / phi.norm2());
  const double tol = 1e-8;
  return {norm_err <= tol && trip <= tol,
          "norm_rel=" + num(norm_err) + " roundtrip_rel=" + num(trip) + " tol=1e-8"};
}

// 2. Wigner transform reconstructed from the Bloch-Wigner field.
// A wide Gaussian spread over many cells, so coarse theta grids alias.
Outcome representation_formula() {
  const auto phi = SampledWavefunction::from_function(
      [](const RVec& x) { return std::exp(-kPi * x[0] * x[0] / 4.0) * std::exp(kI * (kPi * x[0])); },
      1, 6, 32);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> xs(-64, 64), ks(-16, 16);
  std::vector<std::pair<RVec, RVec>> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({{xs(rng) / 32.0}, {ks(rng) / 8.0}});
  RVec Ms, errs;
  for (int M : {4, 8, 16, 32}) {
    const BfzField f = bfz_forward(phi, M, 32);
    double worst = 0.0;
    for (const auto& [x, k] : pts) {
      const MomentumSplit s = split_momentum(k);
      const BlochWignerField bw =
          bloch_wigner_transform(f, s.eta, LatticeBox(1, 4.0, 0), 4, {x});
      worst = std::max(worst, std::abs(reconstruct_wigner(bw, x, k) - wigner_transform(phi, x, k)));
    }
    Ms.push_back(M);
    errs.push_back(std::max(worst, 1e-300));
  }
  const double tol = 1e-5;
  // Once the finest grid reaches round-off the order is not measurable; require
  // monotone non-increase down to that floor instead.
  const double floor_level = 1e-12;
  double order = -loglog_fit(Ms, errs).slope;
  bool order_ok = order >= 1.0;
  if (errs.front() < floor_level) order_ok = errs.back() < floor_level;
  std::string d = "err(M=4..32)=";
  for (double e : errs) d += num(e) + " ";
  return {errs.back() <= tol && order_ok, d + "order=" + num(order)};
}

// 3. Gaussian Wigner function: peak value and position marginal.
Outcome gaussian_wigner() {
  const double c = std::pow(2.0, 0.25);
  const auto phi = SampledWavefunction::from_function(
      [c](const RVec& x) { return cplx(c * std::exp(-kPi * x[0] * x[0])); }, 1, 4, 64);
  const double peak = std::abs(wigner_transform(phi, {0.0}, {0.0}) - 2.0);
  double marg = 0.0;
  const QuadRule q = composite_gauss_legendre(16, 12, -6.0, 6.0);
  for (double x : {0.0, 0.3, -0.55}) {
    cplx acc{};
    for (std::size_t i = 0; i < q.x.size(); ++i) acc += q.w[i] * wigner_transform(phi, {x}, {q.x[i]});
    marg = std::max(marg, std::abs(acc - c * c * std::exp(-2.0 * kPi * x * x)));
  }
  return {peak <= 1e-6 && marg <= 1e-6, "|W(0,0)-2|=" + num(peak) + " marginal=" + num(marg) + " tol=1e-6"};
}

// Fourth-order centred difference.
template <class F>
auto centred_derivative(const F& f, double t, double h) {
  auto a = f(t - 2 * h), b = f(t - h), c = f(t + h), d = f(t + 2 * h);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - 8.0 * b[i] + 8.0 * c[i] - d[i]) / (12.0 * h);
  return a;
}

double rel_gap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num2 = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num2 = std::max(num2, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num2 / den;
}

// 4. Time derivative of the evolved fields against their evolution equations.
Outcome evolution_consistency() {
  const double eps = 0.04, dt = 1e-4;
  const auto phi = two_cell_state(32);
  const auto V = PeriodicPotential::single_mode(1, {1}, 1.0);
  const FiberPropagator prop(phi, V, eps, 6);
  const RVec eta{0.125};
  const LatticeBox box(1, 2.0, 2);
  // Bloch-Wigner field in microscopic time.
  const std::vector<RVec> ps = {{-0.3}, {0.1}, {0.45}};
  const ThetaNodes cell = cell_nodes(1, 16);
  auto bw_at = [&](double tau) { return bloch_wigner_at(prop, tau, eta, box, 4, ps, cell); };
  const double tau0 = 0.7;
  const auto fd_bw = centred_derivative([&](double u) { return bw_at(u).coeffs; }, tau0, dt);
  const auto rhs_bw = bw_evolution_rhs(bw_at(tau0), V, eps).coeffs;
  const double g1 = rel_gap(fd_bw, rhs_bw);
  // Kinetic field in macroscopic time.
  const PGrid grid = PGrid::symmetric(1, 9, 0.5);
  const ThetaNodes win = window_nodes(1, 3.0 * eps, 40);
  const double t0 = 0.3;
  const auto fd_t = centred_derivative(
      [&](double t) { return simulate_wave(prop, eta, box, t, win).sample(grid, false).values; }, t0, dt);
  const auto rhs_t = t_evolution_rhs(simulate_wave(prop, eta, box, t0, win).sample(grid, true), V).values;
  const double g2 = rel_gap(fd_t, rhs_t);
  return {g1 <= 1e-4 && g2 <= 1e-4,
          "bloch_wigner_rel=" + num(g1) + " kinetic_rel=" + num(g2) + " tol=1e-4"};
}

// Nested Gauss-Legendre over the simplex s <= v <= u <= t.
cplx phi_st_quadrature(double a, double b, double s, double t) {
  const int panels = 4 + int(std::ceil((std::abs(a) + std::abs(b)) * (t - s) / 4.0));
  const QuadRule qu = composite_gauss_legendre(20, panels, s, t);
  cplx acc{};
  for (std::size_t i = 0; i < qu.x.size(); ++i) {
    const double u = qu.x[i];
    const QuadRule qv = composite_gauss_legendre(20, panels, s, u);
    cplx inner{};
    for (std::size_t j = 0; j < qv.x.size(); ++j) inner += qv.w[j] * std::exp(kI * (b * qv.x[j]));
    acc += qu.w[i] * std::exp(kI * (a * u)) * inner;
  }
  return acc;
}

// 5. Closed-form double oscillatory integral on every branch.
Outcome phi_st_closed_forms() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> fr(-40.0, 40.0), st(-1.0, 1.0), len(0.01, 1.0), tiny(-0.05, 0.05);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double a = fr(rng), b = fr(rng);
    const double s = st(rng), t = s + len(rng);
    switch (i % 10) {
      case 0: b = -a; break;           // resonant
      case 1: a = 0.0; break;
      case 2: b = 0.0; break;
      case 3: a = b = 0.0; break;
      case 4: a = tiny(rng), b = tiny(rng); break;  // Taylor branch
      default: break;
    }
    worst = std::max(worst, std::abs(phi_st(a, b, s, t) - phi_st_quadrature(a, b, s, t)));
  }
  const double e1 = std::abs(phi_st(kTwoPi, -kTwoPi, 0.0, 1.0) - kI / kTwoPi);
  const double e2 = std::abs(phi_st(kTwoPi, kTwoPi, 0.0, 1.0));
  const double tol = 1e-10;
  return {worst <= tol && e1 <= 1e-14 && e2 <= 1e-14,
          "max_abs_err=" + num(worst) + " special=" + num(e1) + "," + num(e2) + " tol=1e-10"};
}

// 6. Small divisors at d = 2.
Outcome small_divisors() {
  DivisorConfig cfg;  // d = 2, delta = 0.1, radius 20
  const double fail = a_eta_failure_fraction(cfg, 10000, 6);
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  bool finite = true;
  for (int i = 0; i < 20; ++i) finite = finite && std::isfinite(c_delta({u(rng), u(rng)}, cfg).c_delta_value);
  const bool zero_rejected = !in_A_eta({0.0, 0.0}, cfg).member;
  return {finite && fail <= 0.02 && zero_rejected,
          "failure_fraction=" + num(fail) + " c_delta_finite=" + std::to_string(finite) +
              " eta0_rejected=" + std::to_string(zero_rejected)};
}

// Shared one-dimensional driver setup: V(+-1) = 2, an irrational offset.
struct DriverSetup {
  PeriodicPotential V = PeriodicPotential::single_mode(1, {1}, 2.0);
  RVec eta{(std::sqrt(5.0) - 1.0) / 8.0};
  LatticeBox box{1, 8.0, 4};
  PGrid grid = PGrid::symmetric(1, 64, 2.0);
};

double slope(const RVec& x, const RVec& y) { return loglog_fit(x, y).slope; }

// 7. Scalings of the rough drivers, measured on a probe dictionary.
Outcome driver_scalings() {
  const DriverSetup S;
  ProbeSpec ps;
  ps.count = 24;
  const auto probes = probe_dictionary(S.box, S.grid, 2, ps);
  const double gamma = 0.4;
  auto norm_of = [&](auto apply, int m_out) { return operator_norm_probe(apply, probes, m_out); };
  // eps fits at |t - s| = 1/2
  const RVec eps = geomspace(1e-3, 1e-1, 5);
  RVec x1, z, y;
  for (double e : eps) {
    x1.push_back(norm_of([&](const TestField& f) { return apply_X1_star(f, 0.0, 0.5, e, S.eta, S.V); }, 1));
    z.push_back(norm_of([&](const TestField& f) { return apply_Z_star(f, 0.0, 0.5, e, S.eta, S.V); }, 0));
    y.push_back(norm_of([&](const TestField& f) { return apply_Y_eps_star(f, 0.0, 0.5, e, S.eta, S.V); }, 0));
  }
  const double sx1 = slope(eps, x1), sz = slope(eps, z), sy = slope(eps, y);
  // |t - s| fits
  const RVec taus = geomspace(std::pow(2.0, -11), std::pow(2.0, -6), 6);
  RVec a, tx1, tz;
  for (double t : taus) {
    a.push_back(norm_of([&](const TestField& f) { return apply_A_star(f, 0.0, t, S.eta); }, 1));
    tx1.push_back(norm_of([&](const TestField& f) { return apply_X1_star(f, 0.0, t, 0.1, S.eta, S.V); }, 1));
    tz.push_back(norm_of([&](const TestField& f) { return apply_Z_star(f, 0.0, t, 0.1, S.eta, S.V); }, 0));
  }
  const RVec ytaus = geomspace(std::pow(2.0, -7), std::pow(2.0, -2), 6);
  RVec ty;
  for (double t : ytaus)
    ty.push_back(norm_of([&](const TestField& f) { return apply_Y_eps_star(f, 0.0, t, 1e-3, S.eta, S.V); }, 0));
  const double sa = slope(taus, a), stx1 = slope(taus, tx1), stz = slope(taus, tz), sty = slope(ytaus, ty);
  const bool ok = sx1 >= 0.5 - gamma && sz >= 1.0 - 2.0 * gamma && std::abs(sy) <= 0.05 &&
                  std::abs(sa - 1.0) <= 0.02 && std::abs(sty - 1.0) <= 0.05 &&
                  stx1 >= gamma - 0.1 && stx1 <= 1.05 && stz >= 2.0 * gamma - 0.1 && stz <= 2.05;
  return {ok, "eps: X1=" + num(sx1) + " Z=" + num(sz) + " Y=" + num(sy) + "; tau: A=" + num(sa) +
                  " Y=" + num(sty) + " X1=" + num(stx1) + " Z=" + num(stz)};
}

// 8. Smoothing operators between neighbouring scale levels.
Outcome smoothing_scalings() {
  const LatticeBox box(1, 48.0, 0);
  const PGrid grid = PGrid::symmetric(1, 4097, 4.0);  // h = 1/512
  ProbeSpec plateau;
  plateau.count = 12;
  plateau.shape = ProbeShape::Plateau;
  ProbeSpec smooth = plateau;
  smooth.shape = ProbeShape::Smooth;
  const auto pp = probe_dictionary(box, grid, 1, plateau);
  const auto sp = probe_dictionary(box, grid, 2, smooth);
  // The gain is fitted where the mollifier is wide against the probe ramps; the
  // defect where nu^{1/2} is small enough for the damping to stay linear.
  const RVec nus = geomspace(2e-3, 2e-2, 4), nud = geomspace(2.5e-4, 2.5e-3, 4);
  RVec gain, defect;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const SmoothingSpec sg{nus[i], 4}, sd{nud[i], 4};
    gain.push_back(operator_norm_probe([&](const TestField& f) { return smoothing_apply(f, sg); }, pp, 2));
    defect.push_back(operator_norm_probe(
        [&](const TestField& f) { return smoothing_apply(f, sd) - f; }, sp, 1));
  }
  const double s1 = slope(nus, gain), s2 = slope(nud, defect);
  return {std::abs(s1 + 1.0) <= 0.1 && std::abs(s2 - 0.5) <= 0.1,
          "J:E1->E2 slope=" + num(s1) + " (J-Id):E2->E1 slope=" + num(s2)};
}

// Simulated kinetic field for the one-dimensional scenarios.
struct KineticRun {
  FiberPropagator prop;
  RVec eta;
  LatticeBox box;
  ThetaNodes nodes;
  WaveField at(double t) const { return simulate_wave(prop, eta, box, t, nodes); }
};

KineticRun kinetic_run(double eps, const PeriodicPotential& V, const LatticeBox& box) {
  return {FiberPropagator(two_cell_state(32), V, eps, 8), {(std::sqrt(5.0) - 1.0) / 8.0}, box,
          window_nodes(1, 3.0 * eps, 120)};
}

// 9. Holder regularity of the remainder. Wide probes keep the transport shift
// below the probe scale over the whole |t - s| range.
Outcome remainder_regularity() {
  const auto V = PeriodicPotential::single_mode(1, {1}, 0.5);
  const LatticeBox box(1, 2.0, 4);
  const PGrid grid = PGrid::symmetric(1, 129, 4.0);
  ProbeSpec ps;
  ps.count = 24;
  const auto probes = probe_dictionary(box, grid, 2, ps);
  const double gamma = 0.4, safety = 2.0;
  RVec taus;
  for (int k = 2; k <= 7; ++k) taus.push_back(std::pow(2.0, -k));
  const RVec eps_list{0.1, 0.03, 0.01};
  std::vector<RVec> rem;
  for (double eps : eps_list) {
    const KineticRun run = kinetic_run(eps, V, box);
    const WaveField Ts = run.at(0.0);
    RVec r;
    for (double tau : taus) {
      const WaveField Tt = run.at(tau);
      double best = 0.0;
      for (const auto& f : probes) best = std::max(best, std::abs(remainder_increment(Ts, Tt, f, V)));
      r.push_back(best);
    }
    rem.push_back(r);
  }
  // constants calibrated once, on the largest eps
  double c_holder = 0.0, c_naive = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    c_holder = std::max(c_holder, safety * rem[0][k] / std::pow(taus[k], 3.0 * gamma));
    c_naive = std::max(c_naive, safety * rem[0][k] / (std::pow(eps_list[0], -1.5) * taus[k] * taus[k]));
  }
  bool ok = true;
  std::string detail;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    const double sl = slope(taus, rem[e]);
    bool bounded = true;
    for (std::size_t k = 0; k < taus.size(); ++k) {
      bounded = bounded && rem[e][k] <= c_holder * std::pow(taus[k], 3.0 * gamma);
      bounded = bounded && rem[e][k] <= c_naive * std::pow(eps_list[e], -1.5) * taus[k] * taus[k];
    }
    ok = ok && sl >= 3.0 * gamma - 0.1 && bounded;
    detail += "eps=" + num(eps_list[e]) + ":slope=" + num(sl) + (bounded ? "" : "(bound violated)") + " ";
  }
  return {ok, detail + "C=" + num(c_holder)};
}

// Random test field supported away from the box edge.
TestField random_test_field(const LatticeBox& box, const PGrid& grid, int margin, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  TestField f(box, grid, 2);
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e), q = box.kappa2_of(e);
    bool inner = true;
    for (int i = 0; i < box.dim; ++i)
      inner = inner && std::abs(xi[i]) <= box.xi_radius - margin &&
              std::abs(q[i]) <= box.kappa_box().r - margin;
    if (!inner) continue;
    const cplx c(g(rng), g(rng));
    for (long p = 0; p < grid.size(); ++p) f.at(e, p) = c * bump(grid.point(p)[0] / 1.5);
  }
  return f;
}

// 10. The limit collision operator.
Outcome limit_operator() {
  const DriverSetup S;
  double zero_mode = 0.0, scale = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TestField f = random_test_field(S.box, S.grid, 2, seed);
    const TestField y = limit_collision_apply(f, S.eta, S.V);
    for (long e = 0; e < S.box.n_entries(); ++e) {
      bool xi0 = true;
      for (int v : S.box.xi_of(e)) xi0 = xi0 && v == 0;
      for (long p = 0; p < S.grid.size(); ++p) {
        scale = std::max(scale, std::abs(y.at(e, p)));
        if (xi0) zero_mode = std::max(zero_mode, std::abs(y.at(e, p)));
      }
    }
  }
  const TestField f = random_test_field(S.box, S.grid, 2, 11);
  const auto rep = y_eps_convergence(f, 0.0, 0.5, S.eta, S.V, geomspace(1e-4, 1e-2, 5));
  return {zero_mode <= 1e-14 * std::max(1.0, scale) && std::abs(rep.slope - 1.0) <= 0.2,
          "max|Y*psi(xi=0)|=" + num(zero_mode) + " eps_slope=" + num(rep.slope)};
}

// Five Gaussian observables; the last two carry xi != 0 components.
std::vector<TestField> gaussian_suite(const LatticeBox& box, const PGrid& grid) {
  std::vector<TestField> out;
  auto gauss = [&](double c, double w) {
    std::vector<double> g(grid.size());
    for (long p = 0; p < grid.size(); ++p) {
      const double x = (grid.point(p)[0] - c) / w;
      g[p] = std::exp(-kPi * x * x);
    }
    return g;
  };
  auto add = [&](TestField& f, int xi, int q, cplx c, const std::vector<double>& g) {
    const long e = box.entry({xi}, {q});
    for (long p = 0; p < grid.size(); ++p) f.at(e, p) += c * g[p];
  };
  const auto g0 = gauss(0.0, 0.6), g1 = gauss(0.4, 0.4), g2 = gauss(-0.3, 0.8);
  TestField f(box, grid, 2);
  for (int q = -4; q <= 4; q += 2) add(f, 0, q, std::exp(-0.1 * q * q), g0);
  out.push_back(f);
  f = TestField(box, grid, 2);
  add(f, 0, 2, 1.0, g1);
  out.push_back(f);
  f = TestField(box, grid, 2);
  add(f, 0, 0, 1.0, g2);
  add(f, 0, -2, 0.5, g2);
  out.push_back(f);
  f = TestField(box, grid, 2);
  add(f, 1, 1, 1.0, g0);
  add(f, -1, 1, cplx(0.0, 1.0), g0);
  out.push_back(f);
  f = TestField(box, grid, 2);
  add(f, 0, 2, 1.0, g2);
  add(f, 2, 0, 0.7, g1);
  out.push_back(f);
  return out;
}

// 11. Simulated kinetic field against the linear Boltzmann evolution.
Outcome boltzmann_comparison() {
  const LatticeBox box(1, 3.0, 3);
  const PGrid grid = PGrid::symmetric(1, 65, 2.0);
  const auto suite = gaussian_suite(box, grid);
  RVec times;
  for (int k = 0; k <= 50; ++k) times.push_back(0.01 * k);
  auto sup_gaps = [&](double eps, const PeriodicPotential& V) {
    const KineticRun run = kinetic_run(eps, V, box);
    std::vector<WaveField> sim;
    for (double t : times) sim.push_back(run.at(t));
    const auto lim = boltzmann_evolve(sim.front(), V, times, 2e-3);
    return compare_to_limit(sim, lim, suite).sup_gap;
  };
  const auto V = PeriodicPotential::single_mode(1, {1}, 1.0);
  std::vector<RVec> gaps;
  for (double eps : {0.1, 0.05, 0.025}) gaps.push_back(sup_gaps(eps, V));
  bool monotone = true;
  std::string detail;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    monotone = monotone && gaps[1][i] < gaps[0][i] && gaps[2][i] < gaps[1][i];
    detail += "psi" + std::to_string(i) + "=" + num(gaps[0][i]) + ">" + num(gaps[1][i]) + ">" +
              num(gaps[2][i]) + " ";
  }
  PeriodicPotential none(1);
  const auto ctrl = sup_gaps(0.05, none);
  const double control = *std::max_element(ctrl.begin(), ctrl.end());
  return {monotone && control <= 1e-8, detail + "V=0 control=" + num(control)};
}

// 12. Delta-approximation kernel, off-slab mass and the resonance lines.
Outcome resonant_layer() {
  const double tau = 0.5;
  double mass_err = 0.0;
  for (double eps : {0.1, 0.01, 1e-3}) mass_err = std::max(mass_err, std::abs(delta_kernel_mass(tau, eps) - tau / (4.0 * kPi)));
  // off-slab mass of the resonant observable term, d = 1, frozen field
  const LatticeBox box(1, 3.0, 0);
  const PGrid grid = PGrid::symmetric(1, 9, 1.0);
  const auto V = PeriodicPotential::single_mode(1, {1}, 1.0);
  const Observable F = [](const RVec& p, const RVec& k) {
    return bump(p[0] / 1.2) * std::exp(-2.0 * (k[0] - 0.3) * (k[0] - 0.3));
  };
  const RVec eps_list{0.1, 0.05, 0.025, 0.0125};
  RVec off;
  for (double eps : eps_list) {
    const int panels = int(std::ceil(0.5 / (0.5 * eps / (4.0 * kPi * tau))));
    const EtaNodes nodes = eta_composite_nodes(1, panels, 6, 1);
    const FieldProvider T = [&](const RVec& eta) { return frozen_field(box, eta, eps, 0.0); };
    off.push_back(resonant_mass_split(T, F, grid, 0.0, tau, eps, nodes, V, 0.5).off_abs);
  }
  const double off_slope = slope(eps_list, off);
  double line_err = 0.0;
  for (const auto& sg : resonance_lines(3, 4.0)) {
    const double nn = double(sg.n[0] * sg.n[0] + sg.n[1] * sg.n[1]);
    line_err = std::max({line_err, std::abs(sg.n[0] * sg.x1 + sg.n[1] * sg.y1 - nn),
                         std::abs(sg.n[0] * sg.x2 + sg.n[1] * sg.y2 - nn)});
  }
  return {mass_err <= 1e-4 && std::abs(off_slope - 1.0) <= 0.1 && line_err <= 1e-12,
          "mass_err=" + num(mass_err) + " off_slab_slope=" + num(off_slope) + " line_err=" + num(line_err)};
}

// 13. Single-mode example: observable supported off the resonant bands.
Outcome single_mode_example() {
  const RVec eps_list{1e-2, 1e-3};
  const auto off_band = single_mode_scenario(0.1, eps_list, false);
  const auto control = single_mode_scenario(0.1, eps_list, true);
  bool lines_ok = off_band.lines.size() == 2;
  for (const auto& sg : off_band.lines)
    lines_ok = lines_ok && sg.n[1] == 0 && std::abs(sg.x1 - sg.n[0]) < 1e-14 && std::abs(sg.x2 - sg.n[0]) < 1e-14;
  return {off_band.ratio <= 0.2 && control.ratio >= 0.5 && lines_ok,
          "ratio=" + num(off_band.ratio) + " control_ratio=" + num(control.ratio) +
              " lines=" + std::to_string(off_band.lines.size())};
}

// 14. Non-resonant observable terms and the eta-integral bound.
Outcome observable_bounds() {
  const double gamma = 0.4, tau = 0.5;
  const LatticeBox box(1, 3.0, 2);
  const PGrid grid = PGrid::symmetric(1, 9, 1.0);
  const auto V = PeriodicPotential::single_mode(1, {1}, 1.0);
  const Observable F = [](const RVec& p, const RVec& k) {
    return bump(p[0] / 1.2) * std::exp(-2.0 * (k[0] - 0.3) * (k[0] - 0.3));
  };
  const RVec eps_list{0.1, 0.05, 0.025, 0.0125};
  const int panels = int(std::ceil(0.5 / (0.25 * eps_list.back() / (4.0 * kPi * tau))));
  const EtaNodes nodes = eta_composite_nodes(1, panels, 6, 1);
  const FieldProvider T = [&](const RVec& eta) { return frozen_field(box, eta, 0.1, 0.0); };
  const auto rep = observable_nonresonant_bounds(T, F, grid, box, 0.0, tau, eps_list, nodes, V);
  const bool slopes = rep.x1_slope >= 0.5 - gamma - 0.1 && rep.z_slope >= 1.0 - 2.0 * gamma - 0.1;
  // eta integral, d = 2, alpha + beta + sigma = 2 - 2 gamma
  DivisorConfig cfg;
  const double a = 0.5, b = 0.5, sg = 2.0 - 2.0 * gamma - a - b;
  const double C = 2.0 * validate_eta_integral({1, 0}, {0, 1}, {0, 0}, a, b, sg, cfg).ratio;
  struct Case {
    IVec n, np, q;
  };
  const std::vector<Case> cases = {{{1, 0}, {2, 0}, {1, 0}}, {{1, 1}, {-2, -2}, {1, 0}},
                                   {{2, -1}, {4, -2}, {0, 1}}, {{1, 2}, {-1, 1}, {2, 0}},
                                   {{2, 1}, {1, -3}, {-1, 1}}, {{3, 0}, {0, 2}, {1, 1}}};
  double worst = 0.0;
  int collinear = 0, generic = 0;
  for (const auto& c : cases) {
    const auto r = validate_eta_integral(c.n, c.np, c.q, a, b, sg, cfg);
    worst = std::max(worst, r.ratio / C);
    (r.collinear ? collinear : generic)++;
  }
  return {slopes && worst <= 1.0 && collinear > 0 && generic > 0,
          "X1_slope=" + num(rep.x1_slope) + " Z_slope=" + num(rep.z_slope) + " eta_integral_max_ratio/C=" +
              num(worst) + " C=" + num(C)};
}

using Criterion = std::pair<const char*, std::function<Outcome()>>;

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all = {
      {"bfz unitarity and inversion", bfz_unitarity},
      {"representation formula", representation_formula},
      {"gaussian wigner", gaussian_wigner},
      {"evolution consistency", evolution_consistency},
      {"phi_st closed forms", phi_st_closed_forms},
      {"small divisors", small_divisors},
      {"driver norm scalings", driver_scalings},
      {"smoothing operators", smoothing_scalings},
      {"remainder regularity", remainder_regularity},
      {"limit operator", limit_operator},
      {"boltzmann comparison", boltzmann_comparison},
      {"resonant layer", resonant_layer},
      {"single-mode example", single_mode_example},
      {"observable bounds", observable_bounds},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only && int(i + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%02zu] %s :: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].first,
                o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
