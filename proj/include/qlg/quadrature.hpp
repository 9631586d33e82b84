#pragma once

#include <functional>

#include "qlg/common.hpp"

namespace qlg {

struct QuadRule {
  RVec x;
  RVec w;
};

// n-point Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// `panels` equal sub-intervals, n Gauss-Legendre nodes each.
QuadRule composite_gauss_legendre(int n, int panels, double a, double b);

// Double-exponential quadrature for integrands with endpoint singularities.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double tol = 1e-10);

// Same rule, but the abscissa is handed over as (endpoint, offset) with x = endpoint + offset,
// so an integrand singular at an endpoint sees its distance without cancellation.
using AnchoredFn = std::function<double(double endpoint, double offset)>;
double integrate_endpoint_singular(const AnchoredFn& f, double a, double b, double tol = 1e-10);

// Adaptive Gauss-Kronrod on a smooth (or mildly oscillatory) integrand.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

}  // namespace qlg
