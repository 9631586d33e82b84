#pragma once

#include "qlg/bfz.hpp"

namespace qlg {

// W(x, k) = int e^{2 pi i k.y} phi(x - y/2) conj(phi(x + y/2)) dy.
cplx wigner_transform(const SampledWavefunction& phi, const RVec& x, const RVec& k);

// Bloch-Wigner field W~(z, p, eta, kappa) for one eta. The z dependence is kept
// as its exact torus Fourier series (modes xi, |xi|_inf < N), so any z can be
// evaluated without interpolation error.
struct BlochWignerField {
  int dim = 1;
  int Nz = 16;                 // z grid points per axis
  std::vector<RVec> p_samples;
  RVec eta;
  LatticeBox box;              // kappa index set (xi radius unused here)
  IntBox xi_modes;             // spectral support in z
  std::vector<cplx> coeffs;    // index (xi_mode * np + p) * nk + kappa
  // p-gradient coefficients from the theta moment (-4 pi i theta), one per axis.
  std::vector<std::vector<cplx>> grad_coeffs;
  std::vector<cplx> values;    // index (z * np + p) * nk + kappa

  long np() const { return long(p_samples.size()); }
  long nk() const { return box.n_kappa(); }
  long nz() const { return ipow(Nz, dim); }
  RVec z(long idx) const;
  cplx coeff(long xi_idx, long p, long k) const { return coeffs[(xi_idx * np() + p) * nk() + k]; }
  cplx value(long z, long p, long k) const { return values[(z * np() + p) * nk() + k]; }
  // Exact trigonometric evaluation at an arbitrary torus point.
  cplx eval(const RVec& z, long p, long k) const;
  double sup_abs() const;
};

// Checks 2 eta M in Z^d (eta on the half-grid of the theta grid).
bool on_half_grid(const RVec& eta, int M, double tol = 1e-10);

// Quadrature nodes in theta' with weights.
struct ThetaNodes {
  std::vector<RVec> th;
  RVec w;
};

// Fiber Fourier coefficient c(theta, m) of phi~(theta, .).
using FiberCoeffFn = std::function<cplx(const RVec& theta, const IVec& m)>;

// Spectral assembly: coefficient xi of W~ is
// sum_j w_j e^{-4 pi i theta_j.p} c(eta + theta_j, kappa + xi/2) conj c(eta - theta_j, kappa - xi/2).
BlochWignerField bloch_wigner_from_fibers(int dim, const FiberCoeffFn& c, const ThetaNodes& nodes,
                                          const RVec& eta, const LatticeBox& kappa_box, int Nz,
                                          const std::vector<RVec>& p_samples, int xi_radius);

BlochWignerField bloch_wigner_transform(const BfzField& field, const RVec& eta,
                                        const LatticeBox& kappa_box, int Nz,
                                        const std::vector<RVec>& p_samples);

// 2^d W~(x - floor(x), x, eta, kappa) for k = kappa - eta. The factor 2^d is
// the Jacobian of y -> 2y that the representation needs to agree with the
// Wigner transform; x must be one of the field's p samples.
cplx reconstruct_wigner(const BlochWignerField& bw, const RVec& x, const RVec& k);

}  // namespace qlg
