#pragma once

#include "qlg/common.hpp"

namespace qlg {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares line through (log x, log y). Non-positive y values are rejected.
LineFit loglog_fit(const RVec& x, const RVec& y);

// n points geometrically spaced from a to b inclusive.
RVec geomspace(double a, double b, int n);

}  // namespace qlg
