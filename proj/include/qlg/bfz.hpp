#pragma once

#include <functional>

#include <Eigen/Dense>

#include "qlg/lattice.hpp"

namespace qlg {

// Compactly supported wavefunction sampled on the half-open grid
// x_j = -R + j / q, j = 0 .. 2 R q - 1, per axis.
struct SampledWavefunction {
  int dim = 1;
  int R = 1;       // support radius in unit cells
  int q = 64;      // samples per unit length
  std::vector<cplx> values;

  long side() const { return 2L * R * q; }
  long size() const;
  double h() const { return 1.0 / q; }
  RVec point(long idx) const;
  double norm2() const;  // rectangle rule, exact for the sampled model

  static SampledWavefunction from_function(const std::function<cplx(const RVec&)>& f, int dim,
                                           int R, int q);
};

// Fibers phi~(theta, x) on theta_j = -1/2 + j / M and x_l = l / N per axis.
struct BfzField {
  int dim = 1;
  int M = 16;
  int N = 32;
  int source_R = 1;
  std::vector<cplx> values;  // index theta * N^d + x

  long n_theta() const { return ipow(M, dim); }
  long n_x() const { return ipow(N, dim); }
  RVec theta(long idx) const;
  RVec x(long idx) const;
  cplx& at(long t, long xi) { return values[t * n_x() + xi]; }
  cplx at(long t, long xi) const { return values[t * n_x() + xi]; }
  double norm2() const;  // quadrature of the fibered L^2 norm
};

// Torus DFT with the 1/N^d normalisation: coefficients c_m for m in [-N/2, N/2)^d,
// stored in FFT order.
std::vector<cplx> torus_dft(const std::vector<cplx>& samples, int dim, int N);
std::vector<cplx> torus_idft(const std::vector<cplx>& coeffs, int dim, int N);
// Integer frequency of an FFT-ordered index.
IVec torus_mode(long idx, int dim, int N);
long torus_mode_index(const IVec& m, int dim, int N);  // -1 when not representable

BfzField bfz_forward(const SampledWavefunction& phi, int M, int N);
SampledWavefunction bfz_inverse(const BfzField& field);

// (-Lap + 4 pi i theta.grad + 4 pi^2 |theta|^2) u + eps^{1/2} V u on the torus grid,
// spectrally; the potential acts as a Galerkin convolution on the grid modes.
std::vector<cplx> fiber_hamiltonian_apply(const std::vector<cplx>& u, int dim, int N,
                                          const RVec& theta, const PeriodicPotential& V,
                                          double eps);

// Fiber Hamiltonian on the Fourier modes |m|_inf <= L (row/column order of IntBox{dim, L}).
Eigen::MatrixXcd fiber_hamiltonian_matrix(const RVec& theta, const PeriodicPotential& V,
                                          double eps, int L);

}  // namespace qlg
