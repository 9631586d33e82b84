#include <random>

#include "doctest.h"
#include "qlg/scale.hpp"

using namespace qlg;

namespace {

TestField gaussian_at(const LatticeBox& box, const PGrid& grid, const IVec& xi, const IVec& q, cplx c) {
  TestField f(box, grid, 2);
  const long e = box.entry(xi, q);
  for (long p = 0; p < grid.size(); ++p) {
    const double x = grid.point(p)[0];
    f.at(e, p) = c * std::exp(-x * x);
  }
  return f;
}

}  // namespace

TEST_SUITE("scale") {

TEST_CASE("E_m norm of a Gaussian against closed-form total variations") {
  const LatticeBox box(1, 2.0, 1);
  const PGrid grid = PGrid::symmetric(1, 4001, 7.0);
  const IVec q{3};
  const TestField f = gaussian_at(box, grid, {0}, q, 1.0);
  const double w = std::sqrt(1.0 + 0.25 * 9);
  const double l1 = std::sqrt(kPi);
  const double tv1 = 2.0;                                   // int |g'|
  const double tv2 = 4.0 * std::sqrt(2.0) * std::exp(-0.5);  // int |g''|
  CHECK(em_norm(f, 0) == doctest::Approx(l1).epsilon(1e-8));
  CHECK(em_norm(f, 1) == doctest::Approx(w * (l1 + tv1)).epsilon(1e-5));
  CHECK(em_norm(f, 2) == doctest::Approx(w * w * (l1 + tv1 + tv2)).epsilon(1e-5));
  CHECK_THROWS_AS(em_norm(f, -1), ConfigError);
}

TEST_CASE("E_0 norm takes the l2 norm across xi") {
  const LatticeBox box(1, 1.0, 2);
  const PGrid grid = PGrid::symmetric(1, 801, 6.0);
  TestField f = gaussian_at(box, grid, {-1}, {1}, cplx(3.0, 0.0));
  f += gaussian_at(box, grid, {2}, {1}, cplx(0.0, 4.0));
  CHECK(em_norm(f, 0) == doctest::Approx(5.0 * std::sqrt(kPi)).epsilon(1e-8));
  // different kappa: the norms add
  TestField g = gaussian_at(box, grid, {-1}, {1}, 3.0);
  g += gaussian_at(box, grid, {2}, {-2}, 4.0);
  CHECK(em_norm(g, 0) == doctest::Approx(7.0 * std::sqrt(kPi)).epsilon(1e-8));
}

TEST_CASE("pairing is bounded by the dual norm times the E_0 norm") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  const LatticeBox box(2, 1.0, 1);
  const PGrid grid = PGrid::symmetric(2, 9, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    TField T(box, grid);
    TestField psi(box, grid, 0);
    for (auto& v : T.values) v = cplx(n01(rng), n01(rng));
    for (auto& v : psi.values) v = cplx(n01(rng), n01(rng));
    const double lhs = std::abs(dual_pairing(T, psi));
    CHECK(lhs <= e0_dual_norm(T) * em_norm(psi, 0) * (1.0 + 1e-12));
  }
}

TEST_CASE("mollifier has unit mass") {
  for (int d : {1, 2}) CHECK(mollifier_mass(d, 1e-2, 64) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(mollifier_constant(4), ConfigError);
}

TEST_CASE("smoothing damps a constant by exp(-nu^{1/2} <kappa>) away from the edges") {
  const LatticeBox box(1, 1.5, 0);
  const PGrid grid = PGrid::symmetric(1, 401, 2.0);
  TestField psi(box, grid, 2);
  for (auto& v : psi.values) v = 1.0;
  const double nu = 0.01;
  const TestField out = smoothing_apply(psi, {nu, 4});
  for (long e = 0; e < box.n_entries(); ++e) {
    const double k = 0.5 * box.kappa2_of(e)[0];
    const double damp = std::exp(-std::sqrt(nu) * std::sqrt(1.0 + k * k));
    for (long p = 0; p < grid.size(); ++p) {
      if (std::abs(grid.point(p)[0]) > 1.8) continue;
      CHECK(std::abs(out.at(e, p) - damp) < 1e-12);
    }
  }
  CHECK_THROWS_AS(smoothing_apply(psi, {0.0, 4}), ConfigError);
  CHECK_THROWS_AS(smoothing_apply(psi, {1e-6, 4}), ConfigError);
}

TEST_CASE("probe dictionary is unit normed and measures scalar multiples") {
  const LatticeBox box(1, 3.0, 2);
  const PGrid grid = PGrid::symmetric(1, 257, 3.0);
  for (auto shape : {ProbeShape::Smooth, ProbeShape::Plateau}) {
    const auto probes = probe_dictionary(box, grid, 1, {8, 3, shape, 1});
    REQUIRE(probes.size() == 8);
    for (const auto& p : probes) CHECK(em_norm(p, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(operator_norm_probe([](const TestField& f) { return f; }, probes, 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(operator_norm_probe([](const TestField& f) { return cplx(2.0) * f; }, probes, 1) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  // same seed, same dictionary
  const auto a = probe_dictionary(box, grid, 2, {4, 9, ProbeShape::Smooth, 1});
  const auto b = probe_dictionary(box, grid, 2, {4, 9, ProbeShape::Smooth, 1});
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].values == b[i].values);
}

}  // TEST_SUITE
