#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qlg/common.hpp"

namespace qlg {

struct DivisorConfig {
  double delta = 0.1;
  int n_radius = 20;
  int dim = 2;
  double gamma = 0.4;
  void validate() const;  // throws ConfigError
};

struct DivisorResult {
  double c_delta_value = 1.0;  // +inf when eta hits a resonance inside the truncation
  int truncation_radius = 0;
  RVec eta;
  double tail_estimate = 0.0;  // order of the neglected shells |n|_inf > R
};

// max{c'_delta(eta), 1} on [-1/2, 1/2]^d with the n-sum truncated at |n|_inf <= R.
// The a-sum over |a| <= 2 sqrt(d)|n| is done with exact leading terms and an
// Euler-Maclaurin tail, so cost is independent of |n|.
DivisorResult c_delta(const RVec& eta, const DivisorConfig& cfg);

struct MembershipResult {
  bool member = false;
  IVec witness_n;
  long witness_a = 0;
  double worst_ratio = 0.0;  // max |2n.eta - a|^{-1} / (c^{1/(1-delta)} <n>^{d+2}); member iff <= 1
  double c_value = 1.0;
};

// Membership of eta in [-1/4, 1/4]^d in the small-divisor set, through eta -> 2 eta.
MembershipResult in_A_eta(const RVec& eta, const DivisorConfig& cfg);

// Seeded sample of the membership failure rate on [-1/4, 1/4]^d.
double a_eta_failure_fraction(const DivisorConfig& cfg, int samples, std::uint64_t seed);

struct BoundReport {
  std::string lemma;
  int samples = 0;
  double max_ratio = 0.0;
  std::map<std::string, double> fitted_exponents;
  std::vector<std::string> failures;
};

// Random-sample validation of one oscillatory bound. `lemma` is one of
// phi-st, single-phase, resonant-pair, double-phase. Ratios use constant 1.
BoundReport validate_osc_bounds(const DivisorConfig& cfg, const std::string& lemma, int samples,
                                std::uint64_t seed, const RVec& eta);

struct EtaIntegralReport {
  double value = 0.0;
  double scale = 1.0;  // <n>^4 <n'>^4
  double ratio = 0.0;
  bool collinear = false;
  bool excluded = false;  // the whole box lies on the excluded resonance
};

// int over [-1/4,1/4]^d of |beta_1|^{-alpha} |alpha_1|^{-beta} |alpha_1+beta_1|^{-sigma},
// with the frequencies' eps and 4 pi^2 factors dropped. Points with
// |alpha_1 + beta_1| < exclusion_tol are dropped. d in {1, 2}.
EtaIntegralReport validate_eta_integral(const IVec& n, const IVec& n_prime, const IVec& kappa2,
                                        double alpha, double beta, double sigma,
                                        const DivisorConfig& cfg, double exclusion_tol = 0.0);

}  // namespace qlg
