#include "qlg/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <memory>

namespace qlg {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("quadrature needs at least one node");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(std::size_t(n)),
            &gsl_integration_glfixed_table_free);
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, std::size_t(i), &r.x[i], &r.w[i], table.get());
  return r;
}

QuadRule composite_gauss_legendre(int n, int panels, double a, double b) {
  QuadRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    auto q = gauss_legendre(n, a + p * h, a + (p + 1) * h);
    r.x.insert(r.x.end(), q.x.begin(), q.x.end());
    r.w.insert(r.w.end(), q.w.begin(), q.w.end());
  }
  return r;
}

double integrate_endpoint_singular(const AnchoredFn& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  // Slivers left by cut points are below the rule's resolution.
  if (b - a < 1e-10 * (1.0 + std::abs(a) + std::abs(b))) return (b - a) * f(a, 0.5 * (b - a));
  boost::math::quadrature::tanh_sinh<double> integrator;
  // Two-argument form: xc is the signed distance to the nearer endpoint.
  auto g = [&](double x, double xc) {
    if (xc < 0) return f(a, -xc);
    if (xc > 0) return f(b, -xc);
    return f(a, x - a);
  };
  return integrator.integrate(g, a, b, tol);
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double tol) {
  return integrate_endpoint_singular(AnchoredFn([&](double e, double o) { return f(e + o); }), a,
                                     b, tol);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 25, tol);
}

}  // namespace qlg
