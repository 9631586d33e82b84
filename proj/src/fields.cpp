#include "qlg/fields.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace qlg {

RVec PGrid::point(long idx) const {
  RVec p(dim);
  for (int i = dim - 1; i >= 0; --i) {
    p[i] = lo + double(idx % n) * h;
    idx /= n;
  }
  return p;
}

PGrid PGrid::symmetric(int dim, int n, double half_width) {
  PGrid g;
  g.dim = dim;
  g.n = n;
  g.lo = -half_width;
  g.h = 2.0 * half_width / (n - 1);
  return g;
}

void LatticeField::check_compatible(const LatticeField& o) const {
  if (!(box == o.box) || !(grid == o.grid)) throw ConfigError("field grids do not match");
}

TestField& TestField::operator+=(const TestField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  m = std::min(m, o.m);
  return *this;
}

TestField& TestField::operator-=(const TestField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  m = std::min(m, o.m);
  return *this;
}

TestField& TestField::operator*=(cplx a) {
  for (auto& v : values) v *= a;
  return *this;
}

double TField::sup_l2_xi() const {
  const long nk = box.n_kappa(), nxi = box.n_xi();
  double best = 0.0;
  for (long k = 0; k < nk; ++k)
    for (long p = 0; p < np(); ++p) {
      double s = 0.0;
      for (long x = 0; x < nxi; ++x) s += std::norm(at(x * nk + k, p));
      best = std::max(best, std::sqrt(s));
    }
  return best;
}

TField WaveField::sample(const PGrid& g, bool with_grad) const {
  TField T(box, g);
  T.t = t;
  T.eps = eps;
  T.eta = eta;
  const int d = box.dim;
  const long ne = n_entries(), np = g.size();
  if (with_grad) T.grad_p.assign(d, std::vector<cplx>(T.values.size(), cplx{}));
  for (long j = 0; j < n_nodes(); ++j) {
    const cplx* a = amps(j);
    for (long p = 0; p < np; ++p) {
      const cplx ph = weight[j] * std::exp(kI * (kTwoPi * dot(omega[j], g.point(p))));
      for (long e = 0; e < ne; ++e) {
        if (a[e] == cplx{}) continue;
        const cplx v = ph * a[e];
        T.values[e * np + p] += v;
        if (with_grad)
          for (int i = 0; i < d; ++i) T.grad_p[i][e * np + p] += kI * (kTwoPi * omega[j][i]) * v;
      }
    }
  }
  return T;
}

std::vector<cplx> p_derivative(const LatticeField& f, int axis, int order) {
  const PGrid& g = f.grid;
  const long np = g.size(), ne = f.box.n_entries();
  long stride = 1;
  for (int i = g.dim - 1; i > axis; --i) stride *= g.n;
  std::vector<cplx> out(f.values.size(), cplx{});
  static constexpr double c1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  static constexpr double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  const double* c = order == 1 ? c1 : c2;
  const double scale = order == 1 ? 1.0 / g.h : 1.0 / (g.h * g.h);
  if (order != 1 && order != 2) throw ConfigError("only first and second p-derivatives");
  for (long e = 0; e < ne; ++e) {
    const cplx* row = f.row(e);
    cplx* o = out.data() + e * np;
    for (long p = 0; p < np; ++p) {
      const long coord = (p / stride) % g.n;
      cplx acc{};
      for (int s = -2; s <= 2; ++s) {
        const long cc = coord + s;
        if (cc < 0 || cc >= g.n || c[s + 2] == 0.0) continue;
        acc += c[s + 2] * row[p + s * stride];
      }
      o[p] = acc * scale;
    }
  }
  return out;
}

std::vector<cplx> p_transform(const std::vector<RVec>& omega, const LatticeField& psi) {
  const long nn = long(omega.size()), np = psi.np(), ne = psi.box.n_entries();
  Eigen::MatrixXcd E(nn, np);
  for (long p = 0; p < np; ++p) {
    const RVec pt = psi.grid.point(p);
    for (long j = 0; j < nn; ++j) E(j, p) = std::exp(kI * (kTwoPi * dot(omega[j], pt)));
  }
  Eigen::Map<const Eigen::MatrixXcd> Psi(psi.values.data(), np, ne);
  Eigen::MatrixXcd S = (E * Psi) * psi.grid.weight();
  return std::vector<cplx>(S.data(), S.data() + S.size());  // column-major: entry * nn + node
}

cplx WaveField::pair(const LatticeField& psi) const {
  if (!(psi.box == box)) throw ConfigError("field grids do not match");
  const auto S = p_transform(omega, psi);
  const long nn = n_nodes(), ne = n_entries();
  cplx acc{};
  for (long e = 0; e < ne; ++e)
    for (long j = 0; j < nn; ++j) acc += weight[j] * amp[j * ne + e] * S[e * nn + j];
  return acc;
}

WaveField& WaveField::operator-=(const WaveField& o) {
  if (o.amp.size() != amp.size() || o.weight != weight) throw ConfigError("wave fields differ");
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] -= o.amp[i];
  return *this;
}

}  // namespace qlg
