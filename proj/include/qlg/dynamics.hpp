#pragma once

#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "qlg/fields.hpp"
#include "qlg/wigner.hpp"

namespace qlg {

// c0(theta, m) = phi^(m - theta) for |m|_inf <= L, by the rectangle rule on the samples.
std::vector<cplx> fiber_coefficients(const SampledWavefunction& phi, const RVec& theta, int L);

// Exact fiber propagation exp(-i tau H_theta) on the modes |m|_inf <= L. One
// eigendecomposition per theta is cached, so any microscopic time costs a
// matrix-vector product. Safe for concurrent use.
class FiberPropagator {
 public:
  FiberPropagator(SampledWavefunction phi0, PeriodicPotential V, double eps, int mode_radius);

  int dim() const { return phi0_.dim; }
  int mode_radius() const { return L_; }
  double eps() const { return eps_; }
  const PeriodicPotential& potential() const { return V_; }
  const SampledWavefunction& initial() const { return phi0_; }
  IntBox basis() const { return {phi0_.dim, L_}; }

  // Coefficients at microscopic time tau, ordered as basis().
  std::vector<cplx> coefficients(const RVec& theta, double tau) const;
  FiberCoeffFn at_time(double tau) const;

 private:
  struct Entry {
    Eigen::MatrixXcd Q;
    Eigen::VectorXd lambda;
    Eigen::VectorXcd b;
  };
  const Entry& entry(const RVec& theta) const;

  SampledWavefunction phi0_;
  PeriodicPotential V_;
  double eps_;
  int L_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<long long>, std::unique_ptr<Entry>> cache_;
};

// Evolves every fiber of a BfzField by exp(-i t_micro H_theta), H_theta on the
// torus grid modes.
BfzField evolve_fiber(const BfzField& field, const PeriodicPotential& V, double eps,
                      double t_micro);

// Rectangle nodes theta' = -1/2 + (j + 1/2)/M covering the whole cell.
ThetaNodes cell_nodes(int dim, int M);
// Uniform nodes on |theta'|_inf <= half_width, `per_axis` of them, midpoint rule.
ThetaNodes window_nodes(int dim, double half_width, int per_axis);

// Bloch-Wigner field of the evolved state at microscopic time tau.
BlochWignerField bloch_wigner_at(const FiberPropagator& prop, double tau, const RVec& eta,
                                 const LatticeBox& kappa_box, int Nz,
                                 const std::vector<RVec>& p_samples, const ThetaNodes& nodes);

// -4 pi (kappa-eta).grad_p W - 4 pi (kappa-eta).grad_z W + i eps^{1/2} Q W, on the
// spectral coefficients (grad_p from the stored theta moment).
BlochWignerField bw_evolution_rhs(const BlochWignerField& bw, const PeriodicPotential& V,
                                  double eps);

// T(xi, p, kappa) = e^{8 pi^2 i eps^{-1} xi.(kappa-eta) t} * (z-coefficient xi of W~^eps).
// bw must be the unscaled field at tau = t/eps sampled at p_samples = grid points / eps.
TField build_t_field(const BlochWignerField& bw, const LatticeBox& box, const PGrid& grid,
                     double t, double eps);

// T^eps at macroscopic time t in spectral-in-p form; omega_j = -2 theta_j / eps.
WaveField simulate_wave(const FiberPropagator& prop, const RVec& eta, const LatticeBox& box,
                        double t, const ThetaNodes& nodes);

// -4 pi (kappa-eta).grad_p T + Q_t T. Uses T.grad_p when present, otherwise
// 4th-order centred differences on the p grid.
TField t_evolution_rhs(const TField& T, const PeriodicPotential& V);

// Q_t^eps acting on the (xi, kappa) entries of one p sample (or node amplitudes).
void apply_q_forward(const LatticeBox& box, const cplx* in, cplx* out, long stride, double t,
                     double eps, const RVec& eta, const PeriodicPotential& V);

}  // namespace qlg
