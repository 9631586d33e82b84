#include "qlg/lattice.hpp"

#include <cmath>
#include <sstream>

namespace qlg {

RVec MomentumSplit::momentum() const {
  RVec k(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) k[i] = 0.5 * kappa2[i] - eta[i];
  return k;
}

MomentumSplit split_momentum(const RVec& k) {
  MomentumSplit s;
  s.kappa2.resize(k.size());
  s.eta.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    // kappa in [k - 1/4, k + 1/4)  <=>  2 kappa = ceil(2k - 1/2)
    const double q = std::ceil(2.0 * k[i] - 0.5);
    s.kappa2[i] = int(q);
    // Both operands lie within a factor of two of each other (or kappa = 0),
    // so the subtraction is exact and kappa - eta returns k bit for bit.
    s.eta[i] = 0.5 * q - k[i];
    if (s.eta[i] >= 0.25) {  // guards the rare rounding at the tie
      s.kappa2[i] -= 1;
      s.eta[i] = 0.5 * s.kappa2[i] - k[i];
    }
  }
  return s;
}

void PeriodicPotential::set(const IVec& n, cplx v, bool complete_hermitian) {
  if (int(n.size()) != dim_) throw ConfigError("potential mode has wrong dimension");
  coeffs_[n] = v;
  if (complete_hermitian) {
    IVec m(n);
    for (auto& c : m) c = -c;
    coeffs_[m] = std::conj(v);
  }
}

int PeriodicPotential::radius() const {
  int r = 0;
  for (const auto& [n, v] : coeffs_)
    for (int c : n) r = std::max(r, std::abs(c));
  return r;
}

cplx PeriodicPotential::coeff(const IVec& n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? cplx{} : it->second;
}

bool PeriodicPotential::is_hermitian(double tol) const {
  for (const auto& [n, v] : coeffs_) {
    IVec m(n);
    for (auto& c : m) c = -c;
    if (std::abs(coeff(m) - std::conj(v)) > tol) return false;
  }
  return true;
}

bool PeriodicPotential::empty() const { return active_modes().empty(); }

std::vector<PeriodicPotential::Mode> PeriodicPotential::active_modes() const {
  std::vector<Mode> out;
  for (const auto& [n, v] : coeffs_) {
    bool zero = true;
    for (int c : n) zero = zero && c == 0;
    if (!zero && v != cplx{}) out.push_back({n, v});
  }
  return out;
}

PeriodicPotential PeriodicPotential::single_mode(int dim, const IVec& n, cplx amplitude) {
  PeriodicPotential V(dim);
  V.set(n, amplitude, true);
  return V;
}

double evaluate_potential(const PeriodicPotential& V, const RVec& x) {
  cplx s{};
  for (const auto& [n, v] : V.coeffs()) s += v * std::exp(kI * (kTwoPi * dot(to_real(n), x)));
  if (std::abs(s.imag()) > 1e-10) {
    std::ostringstream os;
    os << "potential is not real at x: imaginary residue " << s.imag();
    throw ConfigError(os.str());
  }
  return s.real();
}

long IntBox::size() const {
  long s = 1;
  for (int i = 0; i < dim; ++i) s *= side();
  return s;
}

long IntBox::index(const IVec& q) const {
  long idx = 0;
  for (int i = 0; i < dim; ++i) {
    if (q[i] < -r || q[i] > r) return -1;
    idx = idx * side() + (q[i] + r);
  }
  return idx;
}

IVec IntBox::point(long idx) const {
  IVec q(dim);
  for (int i = dim - 1; i >= 0; --i) {
    q[i] = int(idx % side()) - r;
    idx /= side();
  }
  return q;
}

bool IntBox::contains(const IVec& q) const { return index(q) >= 0; }

LatticeBox::LatticeBox(int d, double K, int Xi) : dim(d), kappa_radius(K), xi_radius(Xi) {
  if (d < 1) throw ConfigError("dimension must be positive");
  if (K < 0 || std::abs(2.0 * K - std::round(2.0 * K)) > 1e-12)
    throw ConfigError("kappa radius must be a nonnegative multiple of 1/2");
  if (Xi < 0) throw ConfigError("xi radius must be nonnegative");
}

long LatticeBox::entry(const IVec& xi, const IVec& kappa2) const {
  const long a = xi_box().index(xi);
  if (a < 0) return -1;
  const long b = kappa_box().index(kappa2);
  if (b < 0) return -1;
  return a * n_kappa() + b;
}

void LatticeBox::check_against(const PeriodicPotential& V) const {
  if (V.dim() != dim) throw ConfigError("potential and lattice box dimensions differ");
  if (kappa_radius < V.radius() || xi_radius < V.radius())
    throw ConfigError("lattice box radius is smaller than the potential support");
}

}  // namespace qlg
