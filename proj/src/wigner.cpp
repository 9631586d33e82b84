#include "qlg/wigner.hpp"

#include <cmath>

namespace qlg {

cplx wigner_transform(const SampledWavefunction& phi, const RVec& x, const RVec& k) {
  const int d = phi.dim;
  const long side = phi.side();
  const double L = 2.0 * phi.R;
  // Substituting u = x - y/2 gives 2^d int e^{4 pi i k.(x-u)} phi(u) conj(phi(2x-u)) du.
  // phi(2x - u_j) comes from the periodic trigonometric interpolant of the samples,
  // masked outside the support box so the periodic copies never contribute.
  auto coef = torus_dft(phi.values, d, int(side));
  for (long m = 0; m < long(coef.size()); ++m) {
    const IVec mode = torus_mode(m, d, int(side));
    double ph = 0.0;
    for (int i = 0; i < d; ++i) ph += mode[i] * (2.0 * x[i] + 2.0 * phi.R) / L;
    coef[m] *= std::exp(kI * (kTwoPi * ph));
  }
  // g_j = sum_m coef_m e^{-2 pi i m.j/side}: a forward transform without scaling.
  auto g = torus_dft(coef, d, int(side));
  const double scale = double(phi.size());
  cplx acc{};
  for (long j = 0; j < phi.size(); ++j) {
    const RVec u = phi.point(j);
    bool inside = true;
    double ph = 0.0;
    for (int i = 0; i < d; ++i) {
      const double r = 2.0 * x[i] - u[i];
      if (r < -phi.R || r > phi.R) inside = false;
      ph += k[i] * (x[i] - u[i]);
    }
    if (!inside) continue;
    acc += std::exp(kI * (2.0 * kTwoPi * ph)) * phi.values[j] * std::conj(g[j] * scale);
  }
  return acc * std::pow(2.0 * phi.h(), d);
}

RVec BlochWignerField::z(long idx) const {
  RVec t(dim);
  for (int i = dim - 1; i >= 0; --i) {
    t[i] = double(idx % Nz) / Nz;
    idx /= Nz;
  }
  return t;
}

cplx BlochWignerField::eval(const RVec& zz, long p, long k) const {
  cplx acc{};
  for (long a = 0; a < xi_modes.size(); ++a) {
    const cplx c = coeff(a, p, k);
    if (c == cplx{}) continue;
    acc += c * std::exp(kI * (kTwoPi * dot(to_real(xi_modes.point(a)), zz)));
  }
  return acc;
}

double BlochWignerField::sup_abs() const {
  double m = 0.0;
  for (auto v : values) m = std::max(m, std::abs(v));
  return m;
}

bool on_half_grid(const RVec& eta, int M, double tol) {
  for (double e : eta) {
    const double s = 2.0 * e * M;
    if (std::abs(s - std::round(s)) > tol) return false;
  }
  return true;
}

namespace {

// Grid index of theta (mod 1) on theta_j = -1/2 + j/M plus the integer shift n
// with theta = theta_j + n.
void locate_theta(const RVec& theta, int M, long& idx, IVec& shift) {
  const int d = int(theta.size());
  idx = 0;
  shift.assign(d, 0);
  for (int i = 0; i < d; ++i) {
    const double s = (theta[i] + 0.5) * M;
    const long j = std::lround(s);
    const long jr = ((j % M) + M) % M;
    shift[i] = int((j - jr) / M);
    idx = idx * M + jr;
  }
}

}  // namespace

BlochWignerField bloch_wigner_from_fibers(int dim, const FiberCoeffFn& c, const ThetaNodes& nodes,
                                          const RVec& eta, const LatticeBox& kappa_box, int Nz,
                                          const std::vector<RVec>& p_samples, int xi_radius) {
  const int d = dim;
  BlochWignerField bw;
  bw.dim = d;
  bw.Nz = Nz;
  bw.p_samples = p_samples;
  bw.eta = eta;
  bw.box = kappa_box;
  bw.xi_modes = IntBox{d, xi_radius};

  const long np = bw.np(), nk = bw.nk(), nxi = bw.xi_modes.size();
  const long nn = long(nodes.w.size());
  bw.coeffs.assign(nxi * np * nk, cplx{});
  bw.grad_coeffs.assign(d, std::vector<cplx>(bw.coeffs.size(), cplx{}));

  // p phases per (node, p), shared by every (xi, kappa)
  std::vector<cplx> phase(nn * np);
  for (long j = 0; j < nn; ++j)
    for (long p = 0; p < np; ++p)
      phase[j * np + p] = nodes.w[j] * std::exp(kI * (-2.0 * kTwoPi * dot(nodes.th[j], p_samples[p])));

  const IntBox kb = kappa_box.kappa_box();
  for (long a = 0; a < nxi; ++a) {
    const IVec xi = bw.xi_modes.point(a);
    for (long k = 0; k < nk; ++k) {
      const IVec q = kb.point(k);  // 2 kappa
      IVec mp(d), mm(d);
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        if ((q[i] + xi[i]) % 2 != 0) ok = false;
        mp[i] = (q[i] + xi[i]) / 2;
        mm[i] = (q[i] - xi[i]) / 2;
      }
      if (!ok) continue;
      for (long j = 0; j < nn; ++j) {
        RVec plus(d), minus(d);
        for (int i = 0; i < d; ++i) {
          plus[i] = eta[i] + nodes.th[j][i];
          minus[i] = eta[i] - nodes.th[j][i];
        }
        const cplx prod = c(plus, mp) * std::conj(c(minus, mm));
        if (prod == cplx{}) continue;
        for (long p = 0; p < np; ++p) {
          const long idx = (a * np + p) * nk + k;
          const cplx v = prod * phase[j * np + p];
          bw.coeffs[idx] += v;
          for (int i = 0; i < d; ++i) bw.grad_coeffs[i][idx] += -2.0 * kTwoPi * kI * nodes.th[j][i] * v;
        }
      }
    }
  }

  const long nz = bw.nz();
  bw.values.assign(nz * np * nk, cplx{});
  for (long zi = 0; zi < nz; ++zi) {
    const RVec zz = bw.z(zi);
    for (long p = 0; p < np; ++p)
      for (long k = 0; k < nk; ++k) bw.values[(zi * np + p) * nk + k] = bw.eval(zz, p, k);
  }
  return bw;
}

BlochWignerField bloch_wigner_transform(const BfzField& field, const RVec& eta,
                                        const LatticeBox& kappa_box, int Nz,
                                        const std::vector<RVec>& p_samples) {
  const int d = field.dim;
  if (int(eta.size()) != d) throw ConfigError("eta has wrong dimension");
  if (!on_half_grid(eta, field.M))
    throw ConfigError("eta must lie on the half-grid (1/(2M)) Z^d of the theta grid");

  const long nth = field.n_theta();
  const long nx = field.n_x();
  std::vector<std::vector<cplx>> fib(nth);
  for (long t = 0; t < nth; ++t) {
    std::vector<cplx> s(field.values.begin() + t * nx, field.values.begin() + (t + 1) * nx);
    fib[t] = torus_dft(s, d, field.N);
  }
  // c(theta_j + n, m) = c(theta_j, m - n) by gamma-equivariance.
  FiberCoeffFn coef = [&](const RVec& theta, const IVec& m) -> cplx {
    long t;
    IVec shift;
    locate_theta(theta, field.M, t, shift);
    IVec mm(d);
    for (int i = 0; i < d; ++i) mm[i] = m[i] - shift[i];
    const long j = torus_mode_index(mm, d, field.N);
    return j < 0 ? cplx{} : fib[t][j];
  };

  // Nodes theta' = theta_j - eta reduced to [-1/2, 1/2); eta +- theta' are grid points.
  ThetaNodes nodes;
  for (long i = 0; i < nth; ++i) {
    RVec th = field.theta(i);
    for (int a = 0; a < d; ++a) {
      double v = th[a] - eta[a];
      v -= std::floor(v + 0.5);
      th[a] = v;
    }
    nodes.th.push_back(th);
    nodes.w.push_back(1.0 / double(nth));
  }
  return bloch_wigner_from_fibers(d, coef, nodes, eta, kappa_box, Nz, p_samples, field.N);
}

cplx reconstruct_wigner(const BlochWignerField& bw, const RVec& x, const RVec& k) {
  const int d = bw.dim;
  const MomentumSplit s = split_momentum(k);
  for (int i = 0; i < d; ++i)
    if (std::abs(s.eta[i] - bw.eta[i]) > 1e-12)
      throw ConfigError("momentum splits to a different eta than the field was built with");
  long p = -1;
  for (long j = 0; j < bw.np(); ++j) {
    bool same = true;
    for (int i = 0; i < d; ++i) same = same && std::abs(bw.p_samples[j][i] - x[i]) < 1e-12;
    if (same) {
      p = j;
      break;
    }
  }
  if (p < 0) throw ConfigError("position is not one of the field's p samples");
  const long kidx = bw.box.kappa_box().index(s.kappa2);
  if (kidx < 0) return cplx{};
  RVec z(d);
  for (int i = 0; i < d; ++i) z[i] = x[i] - std::floor(x[i]);
  return std::pow(2.0, d) * bw.eval(z, p, kidx);
}

}  // namespace qlg
