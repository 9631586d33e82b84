#include "qlg/bfz.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace qlg {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> run_dft(const std::vector<cplx>& in, int dim, int N, int sign) {
  std::vector<cplx> out(in.size());
  std::vector<int> n(dim, N);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft(dim, n.data(),
                         reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                         reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

long SampledWavefunction::size() const { return ipow(int(side()), dim); }

RVec SampledWavefunction::point(long idx) const {
  RVec x(dim);
  for (int i = dim - 1; i >= 0; --i) {
    x[i] = -R + double(idx % side()) / q;
    idx /= side();
  }
  return x;
}

double SampledWavefunction::norm2() const {
  double s = 0.0;
  for (auto v : values) s += std::norm(v);
  return s * std::pow(h(), dim);
}

SampledWavefunction SampledWavefunction::from_function(const std::function<cplx(const RVec&)>& f,
                                                       int dim, int R, int q) {
  SampledWavefunction w;
  w.dim = dim;
  w.R = R;
  w.q = q;
  w.values.resize(w.size());
  for (long i = 0; i < w.size(); ++i) w.values[i] = f(w.point(i));
  return w;
}

RVec BfzField::theta(long idx) const {
  RVec t(dim);
  for (int i = dim - 1; i >= 0; --i) {
    t[i] = -0.5 + double(idx % M) / M;
    idx /= M;
  }
  return t;
}

RVec BfzField::x(long idx) const {
  RVec t(dim);
  for (int i = dim - 1; i >= 0; --i) {
    t[i] = double(idx % N) / N;
    idx /= N;
  }
  return t;
}

double BfzField::norm2() const {
  double s = 0.0;
  for (auto v : values) s += std::norm(v);
  return s / double(n_theta()) / double(n_x());
}

std::vector<cplx> torus_dft(const std::vector<cplx>& samples, int dim, int N) {
  auto c = run_dft(samples, dim, N, FFTW_FORWARD);
  const double scale = 1.0 / double(samples.size());
  for (auto& v : c) v *= scale;
  return c;
}

std::vector<cplx> torus_idft(const std::vector<cplx>& coeffs, int dim, int N) {
  return run_dft(coeffs, dim, N, FFTW_BACKWARD);
}

IVec torus_mode(long idx, int dim, int N) {
  IVec m(dim);
  for (int i = dim - 1; i >= 0; --i) {
    int k = int(idx % N);
    m[i] = k < (N + 1) / 2 ? k : k - N;
    idx /= N;
  }
  return m;
}

long torus_mode_index(const IVec& m, int dim, int N) {
  long idx = 0;
  for (int i = 0; i < dim; ++i) {
    if (m[i] < -N / 2 || m[i] >= (N + 1) / 2) return -1;
    idx = idx * N + (m[i] >= 0 ? m[i] : m[i] + N);
  }
  return idx;
}

BfzField bfz_forward(const SampledWavefunction& phi, int M, int N) {
  if (phi.q % N != 0) throw ConfigError("torus grid N must divide the samples per unit cell");
  if (M < 1 || N < 1) throw ConfigError("grid sizes must be positive");
  BfzField f;
  f.dim = phi.dim;
  f.M = M;
  f.N = N;
  f.source_R = phi.R;
  const int d = phi.dim;
  const int stride = phi.q / N;
  f.values.assign(f.n_theta() * f.n_x(), cplx{});

  // Cells m with |m|_inf <= R cover the support; x - m runs over sample points.
  IntBox cells{d, phi.R};
  for (long ti = 0; ti < f.n_theta(); ++ti) {
    const RVec th = f.theta(ti);
    for (long xi = 0; xi < f.n_x(); ++xi) {
      const RVec x = f.x(xi);
      IVec lx(d);
      {
        long r = xi;
        for (int i = d - 1; i >= 0; --i) {
          lx[i] = int(r % N);
          r /= N;
        }
      }
      cplx acc{};
      for (long c = 0; c < cells.size(); ++c) {
        const IVec m = cells.point(c);
        long sidx = 0;
        bool inside = true;
        RVec y(d);
        for (int i = 0; i < d; ++i) {
          // sample index of x - m on the wavefunction grid
          long j = long(lx[i]) * stride + long(phi.R - m[i]) * phi.q;
          if (j < 0 || j >= phi.side()) {
            inside = false;
            break;
          }
          sidx = sidx * phi.side() + j;
          y[i] = x[i] - m[i];
        }
        if (!inside) continue;
        acc += std::exp(kI * (kTwoPi * dot(th, y))) * phi.values[sidx];
      }
      f.at(ti, xi) = acc;
    }
  }
  return f;
}

SampledWavefunction bfz_inverse(const BfzField& field) {
  SampledWavefunction w;
  w.dim = field.dim;
  w.R = field.source_R;
  w.q = field.N;
  w.values.assign(w.size(), cplx{});
  const int d = field.dim;
  const double wt = 1.0 / double(field.n_theta());
  for (long s = 0; s < w.size(); ++s) {
    const RVec x = w.point(s);
    long xi = 0;
    for (int i = 0; i < d; ++i) {
      long j = std::lround((x[i] - std::floor(x[i])) * field.N) % field.N;
      xi = xi * field.N + j;
    }
    cplx acc{};
    for (long ti = 0; ti < field.n_theta(); ++ti)
      acc += std::exp(-kI * (kTwoPi * dot(field.theta(ti), x))) * field.at(ti, xi);
    w.values[s] = acc * wt;
  }
  return w;
}

std::vector<cplx> fiber_hamiltonian_apply(const std::vector<cplx>& u, int dim, int N,
                                          const RVec& theta, const PeriodicPotential& V,
                                          double eps) {
  const auto c = torus_dft(u, dim, N);
  std::vector<cplx> out(c.size(), cplx{});
  const double lam = std::sqrt(eps);
  const auto modes = V.coeffs();
  for (long k = 0; k < long(c.size()); ++k) {
    const IVec m = torus_mode(k, dim, N);
    RVec mt(dim);
    for (int i = 0; i < dim; ++i) mt[i] = m[i] - theta[i];
    out[k] += kFourPiSq * norm2(mt) * c[k];
    for (const auto& [n, v] : modes) {
      IVec src(dim);
      for (int i = 0; i < dim; ++i) src[i] = m[i] - n[i];
      const long j = torus_mode_index(src, dim, N);
      if (j >= 0) out[k] += lam * v * c[j];
    }
  }
  return torus_idft(out, dim, N);
}

Eigen::MatrixXcd fiber_hamiltonian_matrix(const RVec& theta, const PeriodicPotential& V,
                                          double eps, int L) {
  const int d = int(theta.size());
  IntBox basis{d, L};
  const long n = basis.size();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  const double lam = std::sqrt(eps);
  for (long a = 0; a < n; ++a) {
    const IVec m = basis.point(a);
    RVec mt(d);
    for (int i = 0; i < d; ++i) mt[i] = m[i] - theta[i];
    H(a, a) += kFourPiSq * norm2(mt);
    for (const auto& [nv, v] : V.coeffs()) {
      IVec src(d);
      for (int i = 0; i < d; ++i) src[i] = m[i] - nv[i];
      const long b = basis.index(src);
      if (b >= 0) H(a, b) += lam * v;
    }
  }
  return H;
}

}  // namespace qlg
