#pragma once

#include <map>
#include <utility>

#include "qlg/common.hpp"

namespace qlg {

// k = kappa - eta with kappa on the half-integer lattice. kappa is stored
// doubled (kappa2 = 2 kappa) so all lattice arithmetic stays in integers.
struct MomentumSplit {
  IVec kappa2;
  RVec eta;

  RVec kappa() const { return to_real(kappa2, 0.5); }
  RVec momentum() const;
};

// Nearest half-integer, ties resolved downward, so eta lies in [-1/4, 1/4).
MomentumSplit split_momentum(const RVec& k);

// Truncated Fourier series of a real Z^d-periodic potential.
class PeriodicPotential {
 public:
  struct Mode {
    IVec n;
    cplx v;
  };

  PeriodicPotential() = default;
  explicit PeriodicPotential(int dim) : dim_(dim) {}

  // Adds V^(n). With complete_hermitian the partner V^(-n) = conj(V^(n)) is
  // written too.
  void set(const IVec& n, cplx v, bool complete_hermitian = true);

  int dim() const { return dim_; }
  int radius() const;  // N_V, sup-norm radius of the support
  cplx coeff(const IVec& n) const;
  bool is_hermitian(double tol = 1e-14) const;
  bool empty() const;

  // Modes with n != 0 and nonzero coefficient, in a fixed lexicographic order.
  std::vector<Mode> active_modes() const;
  const std::map<IVec, cplx>& coeffs() const { return coeffs_; }

  static PeriodicPotential single_mode(int dim, const IVec& n, cplx amplitude);

 private:
  int dim_ = 1;
  std::map<IVec, cplx> coeffs_;
};

// Sum_n V^(n) e^{2 pi i n.x}. Throws if the imaginary residue exceeds 1e-10.
double evaluate_potential(const PeriodicPotential& V, const RVec& x);

// Integer cube {|q|_inf <= r} in Z^d with a flat row-major index.
struct IntBox {
  int dim = 1;
  int r = 0;

  long side() const { return 2L * r + 1; }
  long size() const;
  long index(const IVec& q) const;  // -1 when outside
  IVec point(long idx) const;
  bool contains(const IVec& q) const;
};

// Index sets for kappa in (Z/2)^d and xi in Z^d. Shifts that leave the box
// read as zero.
struct LatticeBox {
  int dim = 1;
  double kappa_radius = 2.0;  // |kappa|_inf <= K, K a multiple of 1/2
  int xi_radius = 2;          // |xi|_inf <= Xi

  LatticeBox() = default;
  LatticeBox(int d, double K, int Xi);

  IntBox kappa_box() const { return {dim, int(std::lround(2.0 * kappa_radius))}; }
  IntBox xi_box() const { return {dim, xi_radius}; }
  long n_kappa() const { return kappa_box().size(); }
  long n_xi() const { return xi_box().size(); }
  long n_entries() const { return n_kappa() * n_xi(); }

  // Entry index e = xi_index * n_kappa + kappa_index, or -1 when outside.
  long entry(const IVec& xi, const IVec& kappa2) const;
  IVec xi_of(long e) const { return xi_box().point(e / n_kappa()); }
  IVec kappa2_of(long e) const { return kappa_box().point(e % n_kappa()); }

  // Requires radius >= N_V of the potential.
  void check_against(const PeriodicPotential& V) const;
  bool operator==(const LatticeBox& o) const {
    return dim == o.dim && kappa_radius == o.kappa_radius && xi_radius == o.xi_radius;
  }
};

}  // namespace qlg
