#pragma once

#include <cstdint>
#include <functional>

#include "qlg/fields.hpp"

namespace qlg {

// sum_{|beta| <= m} int dp sum_kappa <kappa>^m || D_p^beta psi ||_{l2_xi}.
double em_norm(const LatticeField& psi, int m);

// sum over (xi, p, kappa) of T psi with the grid quadrature in p; bilinear.
cplx dual_pairing(const TField& T, const TestField& psi);
cplx dual_pairing(const WaveField& T, const TestField& psi);

// The E_{-0} dual norm on the grid: sup over (p, kappa) of the l2 norm in xi.
double e0_dual_norm(const TField& T);

struct SmoothingSpec {
  double nu = 1e-2;
  int min_cells = 4;  // grid cells required per mollifier radius
};

// 1 / int_{|x|<1} exp(-1/(1-|x|^2)) dx.
double mollifier_constant(int dim);
// Grid quadrature of the normalised phi_nu with `cells_per_unit` cells per radius.
double mollifier_mass(int dim, double nu, int cells_per_unit);

// e^{-nu^{1/2} <kappa>} (psi *_p phi_nu), phi_nu the unit-mass bump of radius nu^{1/2}.
TestField smoothing_apply(const TestField& psi, const SmoothingSpec& spec);

using LinearOp = std::function<TestField(const TestField&)>;

enum class ProbeShape { Smooth, Plateau };

struct ProbeSpec {
  int count = 24;
  std::uint64_t seed = 1;
  ProbeShape shape = ProbeShape::Smooth;
  int margin = 2;  // keep spikes this far (in xi and 2 kappa) from the box edge
};

// Fixed dictionary of localized probes, each normalised to unit E_m norm.
// Spikes sweep the admissible kappa values evenly; xi, p-centre and width come
// from the seed.
std::vector<TestField> probe_dictionary(const LatticeBox& box, const PGrid& grid, int m,
                                        const ProbeSpec& spec);

// max over probes of ||op(probe)||_{E_m_out}: a lower bound on the operator norm.
double operator_norm_probe(const LinearOp& op, const std::vector<TestField>& probes, int m_out);

}  // namespace qlg
