#include "qlg/divisors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qlg/drivers.hpp"
#include "qlg/fit.hpp"
#include "qlg/lattice.hpp"
#include "qlg/quadrature.hpp"

namespace qlg {

void DivisorConfig::validate() const {
  if (dim < 1) throw ConfigError("divisors: dimension must be positive");
  if (!(delta > 0.0 && delta < 1.0 / (dim + 3)))
    throw ConfigError("divisors: delta must lie in (0, 1/(d+3))");
  if (!(gamma > 1.0 / 3.0 && gamma < 0.5)) throw ConfigError("divisors: gamma must lie in (1/3, 1/2)");
  if (n_radius < 1) throw ConfigError("divisors: n_radius must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{j=0}^{J} (f + j)^{-s}, f in (0, 1]. Exact for small j, Euler-Maclaurin beyond.
double shifted_power_sum(double f, long J, double s) {
  if (J < 0) return 0.0;
  constexpr long kDirect = 12;
  double acc = 0.0;
  const long head = std::min(J, kDirect - 1);
  for (long j = 0; j <= head; ++j) acc += std::pow(f + j, -s);
  if (J < kDirect) return acc;
  const double a = f + kDirect, b = f + J;
  const double g = std::pow(a, -s), h = std::pow(b, -s);
  acc += (std::pow(b, 1.0 - s) - std::pow(a, 1.0 - s)) / (1.0 - s);
  acc += 0.5 * (g + h);
  // B2/2! (g'(b) - g'(a)) + B4/4! (g'''(b) - g'''(a))
  acc += (1.0 / 12.0) * (-s) * (h / b - g / a);
  acc += (-1.0 / 720.0) * (-s * (s + 1) * (s + 2)) * (h / (b * b * b) - g / (a * a * a));
  return acc;
}

// sum over |a| <= A of |x - a|^{-s}; +inf if some |x - a| == 0 in range.
double lattice_power_sum(double x, long A, double s) {
  const double fl = std::floor(x);
  const long k = long(fl);
  const double f0 = x - fl;  // distance to a = k
  double acc = 0.0;
  // a = k, k-1, ..., -A
  if (k >= -A) {
    const long lo_end = std::min(k, A);
    const long J = lo_end - (-A);
    const double start = f0 + double(k - lo_end);
    if (start == 0.0) return kInf;
    acc += shifted_power_sum(start, J, s);
  }
  // a = k+1, ..., A
  const long first = std::max(k + 1, -A);
  if (first <= A) {
    const double start = double(first) - x;
    if (start == 0.0) return kInf;
    acc += shifted_power_sum(start, A - first, s);
  }
  return acc;
}

std::vector<IVec> nonzero_modes(int dim, int R) {
  IntBox box{dim, R};
  std::vector<IVec> out;
  for (long i = 0; i < box.size(); ++i) {
    IVec n = box.point(i);
    if (std::any_of(n.begin(), n.end(), [](int v) { return v != 0; })) out.push_back(n);
  }
  return out;
}

double ndot(const IVec& n, const RVec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) s += n[i] * x[i];
  return s;
}

}  // namespace

DivisorResult c_delta(const RVec& eta, const DivisorConfig& cfg) {
  cfg.validate();
  if (int(eta.size()) != cfg.dim) throw ConfigError("c_delta: eta has the wrong dimension");
  for (double e : eta)
    if (std::abs(e) > 0.5) throw ConfigError("c_delta: eta outside [-1/2, 1/2]^d");
  const int d = cfg.dim;
  const double s = 1.0 - cfg.delta;
  double acc = 0.0;
  for (const IVec& n : nonzero_modes(d, cfg.n_radius)) {
    const double nn = std::sqrt(double(idot(n, n)));
    const long A = long(std::floor(2.0 * std::sqrt(double(d)) * nn));
    const double sum = lattice_power_sum(ndot(n, eta), A, s);
    if (std::isinf(sum)) {
      acc = kInf;
      break;
    }
    acc += std::pow(1.0 + nn * nn, -0.5 * (d + 1 + cfg.delta)) * sum;
  }
  DivisorResult r;
  r.eta = eta;
  r.truncation_radius = cfg.n_radius;
  r.c_delta_value = std::max(acc, 1.0);
  // Shell count ~ 2d (2R)^{d-1}, shell weight ~ R^{-d-delta}: the tail behaves like R^{-delta}/delta.
  r.tail_estimate = 2.0 * d * std::pow(2.0, d - 1) * std::pow(double(cfg.n_radius), -cfg.delta) /
                    cfg.delta;
  return r;
}

MembershipResult in_A_eta(const RVec& eta, const DivisorConfig& cfg) {
  cfg.validate();
  if (int(eta.size()) != cfg.dim) throw ConfigError("in_A_eta: eta has the wrong dimension");
  const int d = cfg.dim;
  RVec big(d);
  for (int i = 0; i < d; ++i) {
    if (std::abs(eta[i]) > 0.25) throw ConfigError("in_A_eta: eta outside [-1/4, 1/4]^d");
    big[i] = 2.0 * eta[i];
  }
  MembershipResult m;
  m.c_value = c_delta(big, cfg).c_delta_value;
  const double cpow = std::pow(m.c_value, 1.0 / (1.0 - cfg.delta));
  for (const IVec& n : nonzero_modes(d, cfg.n_radius)) {
    const double x = ndot(n, big);
    // The nearest integer is the worst a; |a| <= 2 sqrt(d)|n| + 1 always contains it.
    const long a = std::lround(x);
    const double dist = std::abs(x - double(a));
    const double ratio = dist == 0.0 ? kInf : 1.0 / (dist * cpow * std::pow(bracket(n), d + 2));
    if (ratio > m.worst_ratio || m.witness_n.empty()) {
      m.worst_ratio = ratio;
      m.witness_n = n;
      m.witness_a = a;
    }
  }
  m.member = std::isfinite(m.c_value) && m.worst_ratio <= 1.0;
  return m;
}

double a_eta_failure_fraction(const DivisorConfig& cfg, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.25, 0.25);
  int fails = 0;
  RVec eta(cfg.dim);
  for (int k = 0; k < samples; ++k) {
    for (auto& e : eta) e = U(rng);
    if (!in_A_eta(eta, cfg).member) ++fails;
  }
  return double(fails) / samples;
}

namespace {

// Lemma-side quantities for one draw.
struct Draw {
  IVec n, np, l, lp;
  double eps, s, tau;
};

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(std::log(lo), std::log(hi));
  return std::exp(U(rng));
}

IVec random_vec(std::mt19937_64& rng, int d, int r, bool nonzero) {
  std::uniform_int_distribution<int> U(-r, r);
  IVec v(d);
  do {
    for (auto& x : v) x = U(rng);
  } while (nonzero && std::all_of(v.begin(), v.end(), [](int x) { return x == 0; }));
  return v;
}

// 4 pi^2 n.(l - 2 eta), the eps-free frequency of the lemmas.
double lemma_phase(const IVec& n, const IVec& l, const RVec& eta) {
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) s += n[i] * (l[i] - 2.0 * eta[i]);
  return kFourPiSq * s;
}

// sup over a window of end times of f(tau): removes the zeros of the oscillation
// before fitting an envelope slope.
template <class F>
double envelope(F f, double tau_lo, double tau_hi) {
  double best = 0.0;
  for (int k = 0; k < 64; ++k) best = std::max(best, f(tau_lo + (tau_hi - tau_lo) * k / 63.0));
  return best;
}

}  // namespace

BoundReport validate_osc_bounds(const DivisorConfig& cfg, const std::string& lemma, int samples,
                                std::uint64_t seed, const RVec& eta) {
  cfg.validate();
  if (samples < 1) throw ConfigError("validate_osc_bounds: samples must be positive");
  const MembershipResult mem = in_A_eta(eta, cfg);
  if (!mem.member) throw ConfigError("validate_osc_bounds: eta is not in the small-divisor set");
  const double c = mem.c_value;
  const double g = cfg.gamma, dl = cfg.delta;
  const int d = cfg.dim;
  constexpr double kSlack = 4.0;  // constants of the interpolation steps are <= 2 each
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U01(0.0, 1.0);
  BoundReport rep;
  rep.lemma = lemma;
  rep.samples = samples;
  auto note = [&](double ratio, const std::string& what) {
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > kSlack && rep.failures.size() < 20) rep.failures.push_back(what);
  };
  auto draw = [&]() {
    Draw dr;
    dr.n = random_vec(rng, d, 3, true);
    dr.np = random_vec(rng, d, 3, true);
    dr.l = random_vec(rng, d, 5, false);
    dr.lp = random_vec(rng, d, 5, false);
    dr.eps = log_uniform(rng, 1e-3, 1e-1);
    dr.s = U01(rng);
    dr.tau = log_uniform(rng, 1e-3, 1.0);
    return dr;
  };

  if (lemma == "phi-st") {
    for (int k = 0; k < samples; ++k) {
      const double a = (U01(rng) < 0.5 ? -1 : 1) * log_uniform(rng, 1.0, 1e4);
      const bool resonant = k % 3 == 0;
      const double b = resonant ? -a : (U01(rng) < 0.5 ? -1 : 1) * log_uniform(rng, 1.0, 1e4);
      const double s = U01(rng), tau = log_uniform(rng, 1e-3, 1.0);
      const double lhs = std::abs(phi_st(a, b, s, s + tau));
      double rhs;
      if (resonant) {
        rhs = tau / std::abs(a);
      } else {
        const double A = std::abs(a), B = std::abs(b), S = std::abs(a + b);
        rhs = std::pow(tau, 2 * g) *
              (std::pow(A * B, g - 1) + std::pow(B, -0.5) * std::pow(A, g - 1) * std::pow(S, g - 0.5) +
               std::pow(A, -0.5) * std::pow(B, g - 1) * std::pow(S, g - 0.5) +
               std::pow(A * B, -0.5) * std::pow(S, 2 * g - 1));
        rhs = std::min(rhs, 0.5 * tau * tau);  // the trivial bound also holds
        rhs = std::max(rhs, 1e-300);
      }
      note(lhs / rhs, "a=" + std::to_string(a) + " b=" + std::to_string(b));
    }
    RVec taus = geomspace(0.05, 1.0, 12), vals;
    for (double t : taus) vals.push_back(std::abs(phi_st(1000.0, -1000.0, 0.0, t)));
    rep.fitted_exponents["resonant_tau"] = loglog_fit(taus, vals).slope;
    RVec as = geomspace(100.0, 1e4, 12);
    vals.clear();
    for (double a : as) vals.push_back(std::abs(phi_st(a, -a, 0.0, 1.0)));
    rep.fitted_exponents["resonant_a"] = loglog_fit(as, vals).slope;
    return rep;
  }

  if (lemma == "single-phase") {
    for (int k = 0; k < samples; ++k) {
      const Draw dr = draw();
      const double a = lemma_phase(dr.n, dr.l, eta) / dr.eps;
      const double lhs = std::abs(exp_integral(a, dr.s, dr.s + dr.tau)) / std::sqrt(dr.eps);
      const double rhs = std::pow(c, (1 - g) / (1 - dl)) * std::pow(dr.eps, 0.5 - g) *
                         std::pow(dr.tau, g) * std::pow(bracket(dr.n), (d + 2) * (1 - g));
      note(lhs / rhs, "eps=" + std::to_string(dr.eps));
    }
    const IVec n(d, 1), l(d, 0);
    const double a0 = lemma_phase(n, l, eta);
    RVec eps = geomspace(1e-3, 1e-1, 9), vals;
    for (double e : eps)
      vals.push_back(envelope([&](double t) { return std::abs(exp_integral(a0 / e, 0.0, t)); },
                              0.5, 1.0) / std::sqrt(e));
    rep.fitted_exponents["eps"] = loglog_fit(eps, vals).slope;
    return rep;
  }

  if (lemma == "resonant-pair") {
    for (int k = 0; k < samples; ++k) {
      const Draw dr = draw();
      const double a = lemma_phase(dr.n, dr.l, eta) / dr.eps;
      const double lhs = std::abs(phi_st(a, -a, dr.s, dr.s + dr.tau)) / dr.eps;
      const double rhs = dr.tau * std::pow(c, 1 / (1 - dl)) * std::pow(bracket(dr.n), d + 2);
      note(lhs / rhs, "eps=" + std::to_string(dr.eps));
    }
    const IVec n(d, 1), l(d, 0);
    const double a0 = lemma_phase(n, l, eta) / 1e-2;
    RVec taus = geomspace(0.05, 1.0, 12), vals;
    for (double t : taus) vals.push_back(std::abs(phi_st(a0, -a0, 0.0, t)) / 1e-2);
    rep.fitted_exponents["tau"] = loglog_fit(taus, vals).slope;
    return rep;
  }

  if (lemma == "double-phase") {
    for (int k = 0; k < samples; ++k) {
      const Draw dr = draw();
      const double a = lemma_phase(dr.n, dr.l, eta) / dr.eps;
      const double b = lemma_phase(dr.np, dr.lp, eta) / dr.eps;
      if (a + b == 0.0) continue;
      const double lhs = std::abs(phi_st(a, b, dr.s, dr.s + dr.tau)) / dr.eps;
      const double rhs = std::pow(dr.eps, 1 - 2 * g) * std::pow(dr.tau, 2 * g) *
                         std::pow(c, (2 - 2 * g) / (1 - dl)) *
                         std::pow(bracket(dr.n) * bracket(dr.np), 2 * (d + 2));
      note(lhs / rhs, "eps=" + std::to_string(dr.eps));
    }
    IVec n(d, 0), np(d, 0), l(d, 0);
    n[0] = 1;
    np[0] = 2;
    l[0] = 1;
    const double a0 = lemma_phase(n, l, eta), b0 = lemma_phase(np, l, eta);
    RVec eps = geomspace(1e-3, 1e-1, 9), vals;
    for (double e : eps)
      vals.push_back(envelope([&](double t) { return std::abs(phi_st(a0 / e, b0 / e, 0.0, t)); },
                              0.5, 1.0) / e);
    rep.fitted_exponents["eps"] = loglog_fit(eps, vals).slope;
    return rep;
  }

  throw ConfigError("unknown bound '" + lemma +
                    "' (expected phi-st, single-phase, resonant-pair, double-phase)");
}

EtaIntegralReport validate_eta_integral(const IVec& n, const IVec& np, const IVec& kappa2,
                                        double alpha, double beta, double sigma,
                                        const DivisorConfig& cfg, double exclusion_tol) {
  cfg.validate();
  const int d = cfg.dim;
  if (d > 2) throw ConfigError("eta integral validator supports d = 1, 2");
  if (int(n.size()) != d || int(np.size()) != d || int(kappa2.size()) != d)
    throw ConfigError("eta integral: vector dimension mismatch");
  if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1 && sigma >= 0 && sigma < 1))
    throw ConfigError("eta integral: need 0 < alpha, beta < 1 and 0 <= sigma < 1");
  if (std::abs(alpha + beta + sigma - (2 - 2 * cfg.gamma)) > 1e-12)
    throw ConfigError("eta integral: alpha + beta + sigma must equal 2 - 2 gamma");
  if (idot(n, n) == 0 || idot(np, np) == 0) throw ConfigError("eta integral: n, n' must be nonzero");

  // With v = 2 eta in [-1/2,1/2]^d: |alpha_1| ~ |n.v - k1|, |beta_1| ~ |n'.v - k2|.
  const long k1 = idot(n, kappa2) + idot(n, np);
  const long k2 = idot(np, kappa2) - idot(np, n);
  EtaIntegralReport rep;
  rep.scale = std::pow(bracket(n), 4) * std::pow(bracket(np), 4);

  // Coordinates w1 = n.v, w2 = m.v: m = n' when independent, else n'.v = p w1.
  IVec m(d, 0);
  double p = 0.0, det = 1.0;
  if (d == 1) {
    rep.collinear = true;
    p = double(np[0]) / n[0];
    det = std::abs(double(n[0]));
  } else {
    const long cross = long(n[0]) * np[1] - long(n[1]) * np[0];
    if (cross == 0) {
      rep.collinear = true;
      m = {-n[1], n[0]};
      p = double(idot(np, n)) / double(idot(n, n));
    } else {
      m = np;
    }
    det = std::abs(double(long(n[0]) * m[1] - long(n[1]) * m[0]));
  }
  if (rep.collinear && std::abs(p + 1.0) < 1e-15 && k1 + k2 == 0) {
    rep.excluded = true;  // alpha_1 + beta_1 vanishes identically
    return rep;
  }

  // Each factor is |c (w - r)| with its root r among the cut points, so the
  // distance w - r is formed as (endpoint - r) + offset, exact next to a cut.
  auto dist = [](double e, double o, double r) { return std::abs((e - r) + o); };
  auto power = [](double x, double e) { return std::pow(std::max(x, 1e-300), -e); };
  // Range of w2 for fixed w1 inside the square (d = 2).
  auto w2_range = [&](double w1, double& lo, double& hi) {
    lo = -kInf;
    hi = kInf;
    // v = M^{-1}(w1, w2), M rows n and m
    const double D = double(long(n[0]) * m[1] - long(n[1]) * m[0]);
    const double cx1 = m[1] / D, cx2 = -n[1] / D;  // v_x = cx1 w1 + cx2 w2
    const double cy1 = -m[0] / D, cy2 = n[0] / D;
    for (auto [c1, c2] : {std::pair{cx1, cx2}, std::pair{cy1, cy2}}) {
      if (c2 == 0.0) {
        if (std::abs(c1 * w1) > 0.5) lo = hi = 0.0;
        continue;
      }
      double a = (-0.5 - c1 * w1) / c2, b = (0.5 - c1 * w1) / c2;
      if (a > b) std::swap(a, b);
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    if (hi < lo) hi = lo;
  };
  auto split_integrate = [](const AnchoredFn& f, double lo, double hi, RVec cuts, double tol) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = std::max(lo, cuts[i]), b = std::min(hi, cuts[i + 1]);
      if (b > a) acc += integrate_endpoint_singular(f, a, b, tol);
    }
    return acc;
  };

  const double W = 0.5 * (std::abs(n[0]) + (d == 2 ? std::abs(n[1]) : 0));
  RVec outer_cuts{double(k1)};
  // Collinear case: everything depends on w1 alone.
  // u1 = w1 - k1, u2 = p (w1 - k2/p), u3 = (1+p)(w1 - (k1+k2)/(1+p)).
  const double r2 = p != 0 ? k2 / p : 0.0, r3 = 1 + p != 0 ? (k1 + k2) / (1 + p) : 0.0;
  auto collinear_integrand = [&](double e, double o) {
    const double u1 = dist(e, o, double(k1));
    const double u2 = p != 0 ? std::abs(p) * dist(e, o, r2) : std::abs(double(k2));
    const double u3 = 1 + p != 0 ? std::abs(1 + p) * dist(e, o, r3) : std::abs(double(k1 + k2));
    if (u3 < exclusion_tol) return 0.0;
    return power(u2, alpha) * power(u1, beta) * power(u3, sigma);
  };
  if (rep.collinear) {
    if (p != 0) outer_cuts.push_back(r2);
    if (1 + p != 0) outer_cuts.push_back(r3);
  }
  double value;
  if (d == 1) {
    value = split_integrate(collinear_integrand, -W, W, outer_cuts, 1e-9) / det;
  } else {
    // Corners of the parallelogram image change the inner interval; cut there too.
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) outer_cuts.push_back(0.5 * (sx * n[0] + sy * n[1]));
    AnchoredFn inner = [&](double e, double o) {
      const double w1 = e + o;
      double lo, hi;
      w2_range(w1, lo, hi);
      if (hi <= lo) return 0.0;
      if (rep.collinear) return (hi - lo) * collinear_integrand(e, o);
      // m = n': u2 = w2 - k2, u3 = w2 - (k1 + k2 - w1)
      const double f1 = power(dist(e, o, double(k1)), beta);
      const double s2 = double(k2), s3 = double(k1 + k2) - w1;
      return f1 * split_integrate(
                      [&](double e2, double o2) {
                        const double u3 = dist(e2, o2, s3);
                        if (u3 < exclusion_tol) return 0.0;
                        return power(dist(e2, o2, s2), alpha) * power(u3, sigma);
                      },
                      lo, hi, {s2, s3}, 1e-9);
    };
    value = split_integrate(inner, -W, W, outer_cuts, 1e-7) / det;
  }
  rep.value = value / std::pow(2.0, d);  // d eta = 2^{-d} dv
  rep.ratio = rep.value / rep.scale;
  return rep;
}

}  // namespace qlg
