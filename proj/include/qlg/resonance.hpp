#pragma once

#include <functional>
#include <string>

#include "qlg/drivers.hpp"
#include "qlg/fields.hpp"
#include "qlg/wigner.hpp"

namespace qlg {

// Observable weight F(p, k), k = kappa - eta.
using Observable = std::function<double(const RVec& p, const RVec& k)>;
// T_s^eps at one eta, spectral in p.
using FieldProvider = std::function<WaveField(const RVec& eta)>;
// eta quadrature on [-1/4, 1/4]^d (points in th, weights in w).
using EtaNodes = ThetaNodes;

// A fixed, eps-independent real field: amplitude exp(-pi |kappa-eta-c|^2 / 4) 2^{-|xi|_1}
// with c = (1/4, 0, ..) and a single p-frequency omega = 0. The offset c breaks the
// k -> -k symmetry, under which gain and loss across a resonant pair would cancel.
WaveField frozen_field(const LatticeBox& box, const RVec& eta, double eps, double t);

// Tensor Gauss-Legendre on [-1/4, 1/4]^d with `per_axis` nodes per axis.
EtaNodes eta_gauss_nodes(int dim, int per_axis);
// Composite rule: the first axis split into `panels` panels of `per_panel` Gauss
// nodes (to resolve the kernel oscillation), the others with `other_axis` nodes.
EtaNodes eta_composite_nodes(int dim, int panels, int per_panel, int other_axis);

// int d eta sum_kappa int dp T(0, p, eta, kappa) F(p, kappa - eta). With
// xi_radius > 0 the modes |xi|_inf <= xi_radius are added with the phase
// e^{2 pi i xi.(p - 4 pi (kappa-eta) t)/eps} (diagnostic for the xi = 0 restriction).
cplx observable_xi0(const FieldProvider& T, const Observable& F, const PGrid& grid, double t,
                    double eps, const EtaNodes& eta, int xi_radius = 0);

struct Segment {
  IVec n;
  double x1, y1, x2, y2;
};

// Lines n.k = |n|^2 (k = 2(kappa - eta)) clipped to [-box, box]^2, |n|_inf <= n_radius.
std::vector<Segment> resonance_lines(int n_radius, double box);
// The same lines restricted to the modes of V.
std::vector<Segment> resonance_lines_for(const PeriodicPotential& V, double box);
std::string resonance_svg(const std::vector<Segment>& lines, double box);

// eps (1 - cos(4 pi^2 c tau / eps)) / (4 pi^2 c)^2 with the c -> 0 limit.
double delta_kernel(double c_prime, double tau, double eps);
// Quadrature of the kernel over [-C, C] plus the exact tail beyond C.
double delta_kernel_mass(double tau, double eps, double C = 1.0);

struct MassSplit {
  cplx on{}, off{};            // signed partial sums of the resonant term
  double on_abs = 0.0, off_abs = 0.0;  // the same with absolute integrands
};

// The resonant observable term from the cosine-combined kernel
//   2 sum_n |V(n)|^2 K(n.(2 kappa - 2 eta - n)) [F(kappa-eta-n) - F(kappa-eta)],
// split by |n.(2 kappa - 2 eta - n)| <= r.
MassSplit resonant_mass_split(const FieldProvider& T, const Observable& F, const PGrid& grid,
                              double s, double t, double eps, const EtaNodes& eta,
                              const PeriodicPotential& V, double r);

struct SingleModeReport {
  RVec eps;
  RVec term;  // |resonant term|
  double ratio = 0.0;  // last / first
  std::vector<Segment> lines;
};

// Single mode V(+-e1) in d = 2 with F supported away from the bands |k1 -+ 1/2| <= rho
// (or, for the control, inside the band at k1 = 1/2).
SingleModeReport single_mode_scenario(double rho, const RVec& eps_list, bool control,
                                      double tau = 0.5);

struct NonResonantReport {
  RVec eps;
  RVec x1_term, z_term, transport_term;  // int d eta |<T_s, D* I_{xi=0} F>|
  double x1_slope = 0.0, z_slope = 0.0;
};

NonResonantReport observable_nonresonant_bounds(const FieldProvider& T, const Observable& F,
                                                const PGrid& grid, const LatticeBox& box,
                                                double s, double t, const RVec& eps_list,
                                                const EtaNodes& eta, const PeriodicPotential& V);

// psi(xi, p, kappa) = I_{xi = 0} F(p, kappa - eta) on box x grid.
TestField zero_mode_test_field(const LatticeBox& box, const PGrid& grid, const Observable& F,
                               const RVec& eta, int m = 2);

}  // namespace qlg
