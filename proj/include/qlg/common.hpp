#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlg {

using cplx = std::complex<double>;
using RVec = std::vector<double>;
using IVec = std::vector<int>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Raised for inputs that violate an operation's preconditions. The CLI maps
// these to its config-error exit code.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline double dot(const RVec& a, const RVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline long idot(const IVec& a, const IVec& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += long(a[i]) * b[i];
  return s;
}

inline double norm2(const RVec& a) { return dot(a, a); }

// Japanese bracket <x> = (1 + |x|^2)^{1/2}.
inline double bracket(const RVec& a) { return std::sqrt(1.0 + norm2(a)); }

inline double bracket(const IVec& a) {
  return std::sqrt(1.0 + double(idot(a, a)));
}

inline RVec to_real(const IVec& a, double scale = 1.0) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = scale * a[i];
  return r;
}

inline int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace qlg
