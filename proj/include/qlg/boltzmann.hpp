#pragma once

#include "qlg/drivers.hpp"
#include "qlg/fields.hpp"

namespace qlg {

// Sparse form of the limit collision adjoint: (Y*psi)(row) = sum w psi(col).
struct CollisionKernel {
  struct Term {
    long row, col;
    cplx w;
  };
  LatticeBox box;
  std::vector<Term> terms;
  double row_sum_bound = 0.0;  // max_row sum |w|, bounds ||Y|| on l-infinity
};

// Assembles the two resonant sums of the limit operator. A vanishing
// denominator throws ConfigError naming (n, 2 kappa, xi).
CollisionKernel build_collision_kernel(const LatticeBox& box, const RVec& eta,
                                       const PeriodicPotential& V, double tol = 1e-12);

// Y^{eta,*} psi.
TestField limit_collision_apply(const TestField& psi, const RVec& eta, const PeriodicPotential& V);
// Forward collision on entry vectors (stride between entries, p contiguous): the transpose.
void collision_forward(const CollisionKernel& K, const cplx* in, cplx* out, long stride);

struct ConvergenceReport {
  RVec eps;
  RVec gap;  // ||Y^eps_st psi - (t-s) Y^{eta,*} psi||_{E_0}
  double slope = 0.0;
};

ConvergenceReport y_eps_convergence(const TestField& psi, double s, double t, const RVec& eta,
                                    const PeriodicPotential& V, const RVec& eps_list);

// Weak linear Boltzmann evolution (transport plus limit collision) of a field
// that is spectral in p. Per node the transport is the diagonal phase
// -8 pi^2 i (kappa-eta).omega, handled by an integrating factor; collision is RK4.
// Returns one field per requested time (sorted ascending, all >= T0.t).
std::vector<WaveField> boltzmann_evolve(const WaveField& T0, const PeriodicPotential& V,
                                        const RVec& times, double dt);

struct ComparisonRow {
  int psi_id;
  double t;
  double gap;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  RVec sup_gap;  // per psi
};

ComparisonReport compare_to_limit(const std::vector<WaveField>& sim,
                                  const std::vector<WaveField>& limit,
                                  const std::vector<TestField>& psi_set);

}  // namespace qlg
