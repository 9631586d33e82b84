#include "qlg/fit.hpp"

#include <cmath>

namespace qlg {

LineFit loglog_fit(const RVec& x, const RVec& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit needs two or more points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  LineFit f;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

RVec geomspace(double a, double b, int n) {
  RVec r(n);
  for (int i = 0; i < n; ++i)
    r[i] = n == 1 ? a : a * std::pow(b / a, double(i) / (n - 1));
  return r;
}

}  // namespace qlg
