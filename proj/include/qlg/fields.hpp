#pragma once

#include "qlg/lattice.hpp"

namespace qlg {

// Uniform tensor grid in p: lo + i h per axis, i = 0 .. n-1.
struct PGrid {
  int dim = 1;
  int n = 64;
  double lo = -2.0;
  double h = 1.0 / 16;

  long size() const { return ipow(n, dim); }
  RVec point(long idx) const;
  double weight() const { return std::pow(h, dim); }
  bool operator==(const PGrid& o) const {
    return dim == o.dim && n == o.n && lo == o.lo && h == o.h;
  }
  static PGrid symmetric(int dim, int n, double half_width);
};

// Complex values on (xi, kappa) entries x p grid. Entry-major, p contiguous.
struct LatticeField {
  LatticeBox box;
  PGrid grid;
  std::vector<cplx> values;

  LatticeField() = default;
  LatticeField(const LatticeBox& b, const PGrid& g)
      : box(b), grid(g), values(std::size_t(b.n_entries() * g.size()), cplx{}) {}

  long np() const { return grid.size(); }
  cplx* row(long e) { return values.data() + e * np(); }
  const cplx* row(long e) const { return values.data() + e * np(); }
  cplx& at(long e, long p) { return values[e * np() + p]; }
  cplx at(long e, long p) const { return values[e * np() + p]; }
  void check_compatible(const LatticeField& o) const;
};

// Test function psi(xi, p, kappa) with the smoothness order it is certified for.
struct TestField : LatticeField {
  int m = 2;
  TestField() = default;
  TestField(const LatticeBox& b, const PGrid& g, int order) : LatticeField(b, g), m(order) {}

  TestField& operator+=(const TestField& o);
  TestField& operator-=(const TestField& o);
  TestField& operator*=(cplx a);
  friend TestField operator+(TestField a, const TestField& b) { return a += b; }
  friend TestField operator-(TestField a, const TestField& b) { return a -= b; }
  friend TestField operator*(cplx s, TestField a) { return a *= s; }
};

// Samples of T^eps(t, xi, p, eta, kappa) at fixed eta, optionally with an
// analytic p-gradient (one array per axis, same layout as values).
struct TField : LatticeField {
  double t = 0.0;
  double eps = 0.1;
  RVec eta;
  std::vector<std::vector<cplx>> grad_p;

  TField() = default;
  TField(const LatticeBox& b, const PGrid& g) : LatticeField(b, g) {}
  // sup over (p, kappa) of the l2 norm in xi.
  double sup_l2_xi() const;
};

// T^eps kept spectral in p: T(xi, p, kappa) = sum_j w_j e^{2 pi i omega_j.p} A_j(xi, kappa).
// This is the form the theta integral produces; p enters only through the phase.
struct WaveField {
  LatticeBox box;
  double t = 0.0;
  double eps = 0.1;
  RVec eta;
  std::vector<RVec> omega;
  RVec weight;
  std::vector<cplx> amp;  // index node * n_entries + entry

  long n_nodes() const { return long(weight.size()); }
  long n_entries() const { return box.n_entries(); }
  cplx* amps(long j) { return amp.data() + j * n_entries(); }
  const cplx* amps(long j) const { return amp.data() + j * n_entries(); }

  TField sample(const PGrid& g, bool with_grad = true) const;
  // Pairing sum over (xi, p, kappa) of T psi with the grid quadrature in p.
  cplx pair(const LatticeField& psi) const;
  WaveField& operator-=(const WaveField& o);
};

// 4th-order centred difference along one p axis (order 1 or 2); values beyond
// the grid read as zero.
std::vector<cplx> p_derivative(const LatticeField& f, int axis, int order = 1);

// The p-transform table S_j(e) = h^d sum_p e^{2 pi i omega_j.p} psi(e, p), the
// building block of every WaveField pairing.
std::vector<cplx> p_transform(const std::vector<RVec>& omega, const LatticeField& psi);

}  // namespace qlg
