#include "qlg/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qlg {

std::vector<cplx> fiber_coefficients(const SampledWavefunction& phi, const RVec& theta, int L) {
  const int d = phi.dim;
  IntBox basis{d, L};
  std::vector<cplx> c(basis.size(), cplx{});
  const double w = std::pow(phi.h(), d);
  // Separable phases would be faster; the direct sum keeps this an independent check.
  std::vector<RVec> pts(phi.size());
  for (long j = 0; j < phi.size(); ++j) pts[j] = phi.point(j);
  for (long a = 0; a < basis.size(); ++a) {
    const IVec m = basis.point(a);
    RVec f(d);
    for (int i = 0; i < d; ++i) f[i] = m[i] - theta[i];
    cplx acc{};
    for (long j = 0; j < phi.size(); ++j) {
      if (phi.values[j] == cplx{}) continue;
      acc += phi.values[j] * std::exp(-kI * (kTwoPi * dot(f, pts[j])));
    }
    c[a] = acc * w;
  }
  return c;
}

FiberPropagator::FiberPropagator(SampledWavefunction phi0, PeriodicPotential V, double eps,
                                 int mode_radius)
    : phi0_(std::move(phi0)), V_(std::move(V)), eps_(eps), L_(mode_radius) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (V_.dim() != phi0_.dim) throw ConfigError("potential and wavefunction dimensions differ");
  if (mode_radius < 1) throw ConfigError("mode radius must be positive");
}

const FiberPropagator::Entry& FiberPropagator::entry(const RVec& theta) const {
  std::vector<long long> key(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) key[i] = std::llround(theta[i] * 1e12);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  auto e = std::make_unique<Entry>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fiber_hamiltonian_matrix(theta, V_, eps_, L_));
  e->Q = es.eigenvectors();
  e->lambda = es.eigenvalues();
  const auto c0 = fiber_coefficients(phi0_, theta, L_);
  Eigen::Map<const Eigen::VectorXcd> c(c0.data(), long(c0.size()));
  e->b = e->Q.adjoint() * c;
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(key, std::move(e));
  return *it->second;
}

std::vector<cplx> FiberPropagator::coefficients(const RVec& theta, double tau) const {
  const Entry& e = entry(theta);
  Eigen::VectorXcd v(e.b.size());
  for (long i = 0; i < e.b.size(); ++i) v[i] = std::exp(-kI * (e.lambda[i] * tau)) * e.b[i];
  Eigen::VectorXcd c = e.Q * v;
  return std::vector<cplx>(c.data(), c.data() + c.size());
}

FiberCoeffFn FiberPropagator::at_time(double tau) const {
  // Closure-local memo: the same theta is queried for many modes.
  using Memo = std::map<std::vector<long long>, std::vector<cplx>>;
  auto memo = std::make_shared<Memo>();
  auto mu = std::make_shared<std::mutex>();
  const IntBox b = basis();
  return [this, tau, memo, mu, b](const RVec& theta, const IVec& m) -> cplx {
    const long idx = b.index(m);
    if (idx < 0) return cplx{};
    std::vector<long long> key(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) key[i] = std::llround(theta[i] * 1e12);
    std::lock_guard<std::mutex> lock(*mu);
    auto it = memo->find(key);
    if (it == memo->end()) it = memo->emplace(key, coefficients(theta, tau)).first;
    return it->second[idx];
  };
}

BfzField evolve_fiber(const BfzField& field, const PeriodicPotential& V, double eps,
                      double t_micro) {
  if (t_micro < 0.0) throw ConfigError("microscopic time must be nonnegative");
  BfzField out = field;
  const int d = field.dim;
  const long nx = field.n_x();
  const double lam = std::sqrt(eps);
  for (long t = 0; t < field.n_theta(); ++t) {
    const RVec th = field.theta(t);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(nx, nx);
    for (long a = 0; a < nx; ++a) {
      const IVec m = torus_mode(a, d, field.N);
      RVec mt(d);
      for (int i = 0; i < d; ++i) mt[i] = m[i] - th[i];
      H(a, a) += kFourPiSq * norm2(mt);
      for (const auto& [n, v] : V.coeffs()) {
        IVec src(d);
        for (int i = 0; i < d; ++i) src[i] = m[i] - n[i];
        const long b = torus_mode_index(src, d, field.N);
        if (b >= 0) H(a, b) += lam * v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    std::vector<cplx> s(field.values.begin() + t * nx, field.values.begin() + (t + 1) * nx);
    const auto c = torus_dft(s, d, field.N);
    Eigen::Map<const Eigen::VectorXcd> cv(c.data(), nx);
    Eigen::VectorXcd b = es.eigenvectors().adjoint() * cv;
    for (long i = 0; i < nx; ++i) b[i] *= std::exp(-kI * (es.eigenvalues()[i] * t_micro));
    Eigen::VectorXcd cn = es.eigenvectors() * b;
    std::vector<cplx> cnv(cn.data(), cn.data() + nx);
    const auto u = torus_idft(cnv, d, field.N);
    std::copy(u.begin(), u.end(), out.values.begin() + t * nx);
  }
  return out;
}

ThetaNodes cell_nodes(int dim, int M) { return window_nodes(dim, 0.5, M); }

ThetaNodes window_nodes(int dim, double half_width, int per_axis) {
  ThetaNodes n;
  IntBox b{dim, 0};
  const long total = ipow(per_axis, dim);
  const double h = 2.0 * half_width / per_axis;
  (void)b;
  for (long idx = 0; idx < total; ++idx) {
    RVec th(dim);
    long r = idx;
    for (int i = dim - 1; i >= 0; --i) {
      th[i] = -half_width + (double(r % per_axis) + 0.5) * h;
      r /= per_axis;
    }
    n.th.push_back(th);
    n.w.push_back(std::pow(h, dim));
  }
  return n;
}

BlochWignerField bloch_wigner_at(const FiberPropagator& prop, double tau, const RVec& eta,
                                 const LatticeBox& kappa_box, int Nz,
                                 const std::vector<RVec>& p_samples, const ThetaNodes& nodes) {
  return bloch_wigner_from_fibers(prop.dim(), prop.at_time(tau), nodes, eta, kappa_box, Nz,
                                  p_samples, 2 * prop.mode_radius());
}

BlochWignerField bw_evolution_rhs(const BlochWignerField& bw, const PeriodicPotential& V,
                                  double eps) {
  const int d = bw.dim;
  BlochWignerField out = bw;
  const long np = bw.np(), nk = bw.nk(), nxi = bw.xi_modes.size();
  std::fill(out.coeffs.begin(), out.coeffs.end(), cplx{});
  out.grad_coeffs.clear();
  const IntBox kb = bw.box.kappa_box();
  const double lam = std::sqrt(eps);
  const auto modes = V.active_modes();
  for (long a = 0; a < nxi; ++a) {
    const IVec xi = bw.xi_modes.point(a);
    for (long k = 0; k < nk; ++k) {
      const IVec q = kb.point(k);
      RVec kv(d);
      for (int i = 0; i < d; ++i) kv[i] = 0.5 * q[i] - bw.eta[i];
      const cplx zfac = -4.0 * kPi * kI * kTwoPi * dot(kv, to_real(xi));
      for (long p = 0; p < np; ++p) {
        const long idx = (a * np + p) * nk + k;
        cplx v = zfac * bw.coeffs[idx];
        for (int i = 0; i < d; ++i) v += -4.0 * kPi * kv[i] * bw.grad_coeffs[i][idx];
        // Q: e^{2 pi i n.z} moves coefficient xi - n to xi.
        for (const auto& md : modes) {
          IVec xs(d), kp(d), km(d);
          for (int i = 0; i < d; ++i) {
            xs[i] = xi[i] - md.n[i];
            kp[i] = q[i] + md.n[i];
            km[i] = q[i] - md.n[i];
          }
          const long as = bw.xi_modes.index(xs);
          if (as < 0) continue;
          const long ip = kb.index(kp), im = kb.index(km);
          cplx diff{};
          if (ip >= 0) diff += bw.coeffs[(as * np + p) * nk + ip];
          if (im >= 0) diff -= bw.coeffs[(as * np + p) * nk + im];
          v += kI * lam * md.v * diff;
        }
        out.coeffs[idx] = v;
      }
    }
  }
  const long nz = out.nz();
  for (long zi = 0; zi < nz; ++zi) {
    const RVec zz = out.z(zi);
    for (long p = 0; p < np; ++p)
      for (long k = 0; k < nk; ++k) out.values[(zi * np + p) * nk + k] = out.eval(zz, p, k);
  }
  return out;
}

TField build_t_field(const BlochWignerField& bw, const LatticeBox& box, const PGrid& grid,
                     double t, double eps) {
  const int d = bw.dim;
  if (bw.np() != grid.size()) throw ConfigError("Bloch-Wigner p samples do not match the grid");
  for (long p = 0; p < grid.size(); ++p) {
    const RVec x = grid.point(p);
    for (int i = 0; i < d; ++i)
      if (std::abs(bw.p_samples[p][i] * eps - x[i]) > 1e-9)
        throw ConfigError("Bloch-Wigner p samples must be the grid points divided by eps");
  }
  TField T(box, grid);
  T.t = t;
  T.eps = eps;
  T.eta = bw.eta;
  const bool grad = !bw.grad_coeffs.empty();
  if (grad) T.grad_p.assign(d, std::vector<cplx>(T.values.size(), cplx{}));
  const IntBox kbT = box.kappa_box(), kbW = bw.box.kappa_box();
  const long np = grid.size();
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e);
    const IVec q = box.kappa2_of(e);
    const long a = bw.xi_modes.index(xi);
    const long k = kbW.index(q);
    if (a < 0 || k < 0) continue;
    RVec kv(d);
    for (int i = 0; i < d; ++i) kv[i] = 0.5 * q[i] - bw.eta[i];
    const cplx frame = std::exp(kI * (2.0 * kFourPiSq / eps * dot(to_real(xi), kv) * t));
    for (long p = 0; p < np; ++p) {
      const long idx = (a * np + p) * bw.nk() + k;
      T.at(e, p) = frame * bw.coeffs[idx];
      if (grad)
        for (int i = 0; i < d; ++i) T.grad_p[i][e * np + p] = frame * bw.grad_coeffs[i][idx] / eps;
    }
  }
  (void)kbT;
  return T;
}

WaveField simulate_wave(const FiberPropagator& prop, const RVec& eta, const LatticeBox& box,
                        double t, const ThetaNodes& nodes) {
  const int d = prop.dim();
  const double eps = prop.eps();
  const double tau = t / eps;
  WaveField W;
  W.box = box;
  W.t = t;
  W.eps = eps;
  W.eta = eta;
  const long nn = long(nodes.w.size()), ne = box.n_entries();
  W.weight = nodes.w;
  W.omega.resize(nn);
  W.amp.assign(nn * ne, cplx{});
  const IntBox basis = prop.basis();
  // per-entry frame phase and mode indices
  std::vector<cplx> frame(ne);
  std::vector<long> ip(ne, -1), im(ne, -1);
  for (long e = 0; e < ne; ++e) {
    const IVec xi = box.xi_of(e);
    const IVec q = box.kappa2_of(e);
    RVec kv(d);
    IVec mp(d), mm(d);
    bool ok = true;
    for (int i = 0; i < d; ++i) {
      kv[i] = 0.5 * q[i] - eta[i];
      if ((q[i] + xi[i]) % 2 != 0) ok = false;
      mp[i] = (q[i] + xi[i]) / 2;
      mm[i] = (q[i] - xi[i]) / 2;
    }
    frame[e] = std::exp(kI * (2.0 * kFourPiSq / eps * dot(to_real(xi), kv) * t));
    if (!ok) continue;
    ip[e] = basis.index(mp);
    im[e] = basis.index(mm);
  }
  for (long j = 0; j < nn; ++j) {
    RVec plus(d), minus(d), om(d);
    for (int i = 0; i < d; ++i) {
      plus[i] = eta[i] + nodes.th[j][i];
      minus[i] = eta[i] - nodes.th[j][i];
      om[i] = -2.0 * nodes.th[j][i] / eps;
    }
    W.omega[j] = om;
    const auto cp = prop.coefficients(plus, tau);
    const auto cm = prop.coefficients(minus, tau);
    cplx* a = W.amps(j);
    for (long e = 0; e < ne; ++e) {
      if (ip[e] < 0 || im[e] < 0) continue;
      a[e] = frame[e] * cp[ip[e]] * std::conj(cm[im[e]]);
    }
  }
  return W;
}

void apply_q_forward(const LatticeBox& box, const cplx* in, cplx* out, long stride, double t,
                     double eps, const RVec& eta, const PeriodicPotential& V) {
  const int d = box.dim;
  const auto modes = V.active_modes();
  const double pref = 1.0 / std::sqrt(eps);
  const double f = kFourPiSq / eps * t;
  for (long e = 0; e < box.n_entries(); ++e) {
    const IVec xi = box.xi_of(e);
    const IVec q = box.kappa2_of(e);
    for (const auto& md : modes) {
      IVec xs(d), kp(d), km(d);
      double s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < d; ++i) {
        xs[i] = xi[i] - md.n[i];
        kp[i] = q[i] + md.n[i];
        km[i] = q[i] - md.n[i];
        const double base = q[i] - 2.0 * eta[i];
        s1 += md.n[i] * (base + md.n[i] - xi[i]);
        s2 += md.n[i] * (base - md.n[i] + xi[i]);
      }
      const long ep = box.entry(xs, kp), em = box.entry(xs, km);
      const cplx c1 = kI * pref * md.v * std::exp(kI * (f * s1));
      const cplx c2 = -kI * pref * md.v * std::exp(kI * (f * s2));
      for (long p = 0; p < stride; ++p) {
        cplx v{};
        if (ep >= 0) v += c1 * in[ep * stride + p];
        if (em >= 0) v += c2 * in[em * stride + p];
        out[e * stride + p] += v;
      }
    }
  }
}

TField t_evolution_rhs(const TField& T, const PeriodicPotential& V) {
  const int d = T.box.dim;
  TField out = T;
  out.grad_p.clear();
  std::fill(out.values.begin(), out.values.end(), cplx{});
  const long np = T.np();
  for (int i = 0; i < d; ++i) {
    const std::vector<cplx> g = T.grad_p.empty() ? p_derivative(T, i, 1) : T.grad_p[i];
    for (long e = 0; e < T.box.n_entries(); ++e) {
      const IVec q = T.box.kappa2_of(e);
      const double kv = 0.5 * q[i] - T.eta[i];
      for (long p = 0; p < np; ++p) out.values[e * np + p] += -4.0 * kPi * kv * g[e * np + p];
    }
  }
  apply_q_forward(T.box, T.values.data(), out.values.data(), np, T.t, T.eps, T.eta, V);
  return out;
}

}  // namespace qlg
