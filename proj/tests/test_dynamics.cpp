#include <random>

#include "doctest.h"
#include "qlg/dynamics.hpp"

using namespace qlg;

namespace {

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

SampledWavefunction two_cell(int q) {
  return SampledWavefunction::from_function(
      [](const RVec& x) {
        return bump(x[0] / 0.95) * std::exp(kI * (kTwoPi * 0.7 * x[0])) * (1.0 + 0.3 * x[0]);
      },
      1, 1, q);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("free fiber propagation is a pure phase") {
  PeriodicPotential none(1);
  const FiberPropagator prop(two_cell(32), none, 0.05, 5);
  const RVec th{0.17};
  const auto c0 = prop.coefficients(th, 0.0);
  const auto c1 = prop.coefficients(th, 0.31);
  const IntBox basis = prop.basis();
  for (long a = 0; a < basis.size(); ++a) {
    const double m = basis.point(a)[0];
    CHECK(std::abs(c1[a] - std::exp(-kI * (kFourPiSq * (m - th[0]) * (m - th[0]) * 0.31)) * c0[a]) < 1e-12);
  }
}

TEST_CASE("propagation conserves the fiber norm") {
  const auto V = PeriodicPotential::single_mode(1, {1}, 2.0);
  const FiberPropagator prop(two_cell(32), V, 0.05, 6);
  for (double th : {-0.4, 0.0, 0.33}) {
    double n0 = 0.0, n1 = 0.0;
    for (auto v : prop.coefficients({th}, 0.0)) n0 += std::norm(v);
    for (auto v : prop.coefficients({th}, 3.7)) n1 += std::norm(v);
    CHECK(n1 == doctest::Approx(n0).epsilon(1e-12));
  }
}

TEST_CASE("Q couples kappa only to kappa +- n/2") {
  const LatticeBox box(1, 3.0, 3);
  const auto V = PeriodicPotential::single_mode(1, {1}, 1.0);
  std::vector<cplx> in(box.n_entries()), out(box.n_entries());
  const long src = box.entry({0}, {2});
  in[src] = 1.0;
  apply_q_forward(box, in.data(), out.data(), 1, 0.3, 0.1, {0.1}, V);
  int hits = 0;
  for (long e = 0; e < box.n_entries(); ++e) {
    if (out[e] == cplx{}) continue;
    ++hits;
    CHECK(std::abs(box.kappa2_of(e)[0] - 2) == 1);
    CHECK(std::abs(box.xi_of(e)[0]) == 1);
  }
  CHECK(hits == 4);
}

TEST_CASE("kinetic right-hand side without potential is pure transport") {
  PeriodicPotential none(1);
  const double eps = 0.1;
  const FiberPropagator prop(two_cell(32), none, eps, 6);
  const LatticeBox box(1, 2.0, 2);
  const RVec eta{0.125};
  const WaveField W = simulate_wave(prop, eta, box, 0.2, window_nodes(1, 3.0 * eps, 40));
  CHECK(W.eta == eta);
  const TField T = W.sample(PGrid::symmetric(1, 9, 0.5), true);
  const TField R = t_evolution_rhs(T, none);
  for (long e = 0; e < box.n_entries(); ++e) {
    const double k = 0.5 * box.kappa2_of(e)[0] - eta[0];
    for (long p = 0; p < T.np(); ++p)
      CHECK(std::abs(R.at(e, p) + 4.0 * kPi * k * T.grad_p[0][e * T.np() + p]) < 1e-12);
  }
}

TEST_CASE("free kinetic field is transported along characteristics") {
  PeriodicPotential none(1);
  const double eps = 0.1, t = 0.15;
  const FiberPropagator prop(two_cell(32), none, eps, 6);
  const LatticeBox box(1, 2.0, 2);
  const RVec eta{0.125};
  const ThetaNodes nodes = window_nodes(1, 3.0 * eps, 40);
  const WaveField T0 = simulate_wave(prop, eta, box, 0.0, nodes);
  const WaveField Tt = simulate_wave(prop, eta, box, t, nodes);
  const PGrid grid = PGrid::symmetric(1, 9, 0.5);
  const TField S = Tt.sample(grid, false);
  for (long e = 0; e < box.n_entries(); ++e) {
    const double k = 0.5 * box.kappa2_of(e)[0] - eta[0];
    PGrid shifted = grid;
    shifted.lo -= 4.0 * kPi * k * t;
    const TField S0 = T0.sample(shifted, false);
    for (long p = 0; p < grid.size(); ++p) CHECK(std::abs(S.at(e, p) - S0.at(e, p)) < 1e-10);
  }
}

}
