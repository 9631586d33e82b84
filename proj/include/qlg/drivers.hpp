#pragma once

#include <functional>

#include "qlg/fields.hpp"

namespace qlg {

// Frequencies of the rough-driver expansion with the eps^{-1} factored out:
// the stored value c' gives c = c' / eps. Integer inputs are n, n', xi and 2 kappa.
struct PhaseSet {
  double a1, a2;                  // expansion of X^1
  double b1, b2, b3, b4;          // second factor of X^2
  double alpha1, alpha2, beta1, beta2;  // observable form at xi = 0
  double c1, c2;                  // resonant observable term
};

PhaseSet phase_set(const IVec& n, const IVec& n_prime, const IVec& xi, const IVec& kappa2,
                   const RVec& eta);

// int_s^t du int_s^u dv e^{i a u} e^{i b v}, closed form on every branch.
cplx phi_st(double a, double b, double s, double t);
// int_s^t e^{i c u} du
cplx exp_integral(double c, double s, double t);

// 4 pi (t - s)(kappa - eta).grad_p psi. Lowers the certified order by one.
TestField apply_A_star(const TestField& psi, double s, double t, const RVec& eta);
// Q_u^{eps, eta, *} as displayed after the rough difference equation.
TestField apply_Q_star(const TestField& psi, double u, double eps, const RVec& eta,
                       const PeriodicPotential& V);
TestField apply_X1_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                        const PeriodicPotential& V);
// Resonant pairs of Q*Q*: n' = -n for the diagonal terms and additionally n.xi = 0
// for the shifted ones.
TestField apply_Y_eps_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                           const PeriodicPotential& V);
// Every other (n, n') pair of Q*Q*, so that X^2 = Y + Z holds term by term.
TestField apply_Z_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                       const PeriodicPotential& V);
TestField apply_X2_star(const TestField& psi, double s, double t, double eps, const RVec& eta,
                        const PeriodicPotential& V);

// Simulated field at macroscopic time t, for the remainder functionals.
class WaveField;
using History = std::function<WaveField(double t)>;

// The three iterated integrals of the remainder. By Fubini each collapses to one
// time integral over v in [s, t]:
//   (t-v) <T_v, (A* + Q_v*) A* psi> + <T_v, A* X1*_{vt} psi> + <T_v, (A* + Q_v*) X2*_{vt} psi>,
// evaluated with composite Gauss-Legendre (`nodes` per panel, panels sized to
// the fastest phase).
cplx remainder_natural(const History& history, const TestField& psi, double s, double t,
                       double eps, const RVec& eta, const PeriodicPotential& V, int nodes = 32);

// <delta T, psi> - <T_s, X1* psi>.
cplx remainder_sharp(const History& history, const TestField& psi, double s, double t, double eps,
                     const RVec& eta, const PeriodicPotential& V);

// <delta T, psi> - <T_s, (A* + X1* + X2*) psi> from two snapshots; equals
// remainder_natural by the rough difference equation.
cplx remainder_increment(const WaveField& Ts, const WaveField& Tt, const TestField& psi,
                         const PeriodicPotential& V);

// Largest |c'| over the box and potential, used for quadrature sizing.
double max_phase(const LatticeBox& box, const RVec& eta, const PeriodicPotential& V);

}  // namespace qlg
