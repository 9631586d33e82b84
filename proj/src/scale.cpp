#include "qlg/scale.hpp"

#include <cmath>
#include <random>

#include "qlg/quadrature.hpp"

namespace qlg {

namespace {

// All derivative fields D^beta psi, |beta| <= m (m <= 2).
std::vector<std::vector<cplx>> derivative_family(const LatticeField& psi, int m) {
  std::vector<std::vector<cplx>> out;
  out.push_back(psi.values);
  const int d = psi.grid.dim;
  if (m >= 1)
    for (int i = 0; i < d; ++i) out.push_back(p_derivative(psi, i, 1));
  if (m >= 2) {
    for (int i = 0; i < d; ++i) {
      out.push_back(p_derivative(psi, i, 2));
      if (i + 1 < d) {
        LatticeField di(psi.box, psi.grid);
        di.values = out[1 + i];
        for (int j = i + 1; j < d; ++j) out.push_back(p_derivative(di, j, 1));
      }
    }
  }
  if (m > 2) throw ConfigError("scale orders above 2 are not supported");
  return out;
}

double kappa_weight(const IVec& kappa2, int m) {
  double s = 1.0;
  for (int v : kappa2) s += 0.25 * v * v;
  return std::pow(s, 0.5 * m);
}

}  // namespace

double em_norm(const LatticeField& psi, int m) {
  if (m < 0) throw ConfigError("E_m norm needs m >= 0");
  const auto fam = derivative_family(psi, m);
  const LatticeBox& box = psi.box;
  const long nk = box.n_kappa(), nxi = box.n_xi(), np = psi.np();
  const IntBox kb = box.kappa_box();
  double total = 0.0;
  for (const auto& f : fam)
    for (long k = 0; k < nk; ++k) {
      const double w = kappa_weight(kb.point(k), m);
      double acc = 0.0;
      for (long p = 0; p < np; ++p) {
        double s = 0.0;
        for (long x = 0; x < nxi; ++x) s += std::norm(f[(x * nk + k) * np + p]);
        acc += std::sqrt(s);
      }
      total += w * acc;
    }
  return total * psi.grid.weight();
}

cplx dual_pairing(const TField& T, const TestField& psi) {
  T.check_compatible(psi);
  cplx acc{};
  for (std::size_t i = 0; i < T.values.size(); ++i) acc += T.values[i] * psi.values[i];
  return acc * psi.grid.weight();
}

cplx dual_pairing(const WaveField& T, const TestField& psi) {
  if (!(T.box == psi.box)) throw ConfigError("pairing: lattice boxes do not match");
  return T.pair(psi);
}

double e0_dual_norm(const TField& T) { return T.sup_l2_xi(); }

namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

// Normalised bump of radius rad sampled at offsets j h, |j|_inf <= J, as a flat table.
std::vector<double> mollifier_table(int dim, double rad, double h, int J) {
  const long side = 2L * J + 1;
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= side;
  std::vector<double> w(total);
  double sum = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double x = double(r % side - J) * h / rad;
      r /= side;
      r2 += x * x;
    }
    w[idx] = bump(r2);
    sum += w[idx];
  }
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace

double mollifier_constant(int dim) {
  if (dim < 1 || dim > 3) throw ConfigError("mollifier constant for d = 1, 2, 3");
  // radial integral of the bump times the unit-sphere area
  const double area = dim == 1 ? 2.0 : (dim == 2 ? kTwoPi : 4.0 * kPi);
  const double radial = integrate_endpoint_singular(
      [dim](double r) { return std::pow(r, dim - 1) * bump(r * r); }, 0.0, 1.0, 1e-14);
  return 1.0 / (area * radial);
}

double mollifier_mass(int dim, double nu, int cells_per_unit) {
  const double rad = std::sqrt(nu);
  const double h = rad / cells_per_unit;
  const double C = mollifier_constant(dim) * std::pow(rad, -dim);
  const int J = cells_per_unit;
  const long side = 2L * J + 1;
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= side;
  double mass = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double x = double(r % side - J) / cells_per_unit;
      r /= side;
      r2 += x * x;
    }
    mass += C * bump(r2);
  }
  return mass * std::pow(h, dim);
}

TestField smoothing_apply(const TestField& psi, const SmoothingSpec& spec) {
  if (!(spec.nu > 0.0 && spec.nu < 1.0)) throw ConfigError("smoothing: nu must lie in (0, 1)");
  const PGrid& g = psi.grid;
  const double rad = std::sqrt(spec.nu);
  if (rad / g.h < spec.min_cells)
    throw ConfigError("smoothing: p grid too coarse for mollifier radius nu^{1/2}");
  const int J = int(std::floor(rad / g.h));
  const int d = g.dim;
  const auto w = mollifier_table(d, rad, g.h, J);
  const long side = 2L * J + 1;
  TestField out(psi.box, g, 2);
  const long np = g.size();
  const IntBox kb = psi.box.kappa_box();
  const long nk = psi.box.n_kappa();
  // offsets into the flat p index and per-axis displacement for bounds checks
  std::vector<std::pair<long, double>> taps;
  std::vector<IVec> disp;
  for (long idx = 0; idx < long(w.size()); ++idx) {
    if (w[idx] == 0.0) continue;
    long r = idx;
    IVec dv(d);
    for (int i = 0; i < d; ++i) {
      dv[i] = int(r % side) - J;
      r /= side;
    }
    long off = 0;
    for (int i = 0; i < d; ++i) off = off * g.n + dv[i];
    taps.push_back({off, w[idx]});
    disp.push_back(dv);
  }
  std::vector<IVec> coords(np, IVec(d));
  for (long p = 0; p < np; ++p) {
    long r = p;
    for (int i = d - 1; i >= 0; --i) {
      coords[p][i] = int(r % g.n);
      r /= g.n;
    }
  }
  for (long e = 0; e < psi.box.n_entries(); ++e) {
    const double damp = std::exp(-rad * kappa_weight(kb.point(e % nk), 1));
    const cplx* in = psi.row(e);
    cplx* o = out.row(e);
    bool any = false;
    for (long p = 0; p < np && !any; ++p) any = in[p] != cplx{};
    if (!any) continue;
    for (long p = 0; p < np; ++p) {
      cplx acc{};
      for (std::size_t t = 0; t < taps.size(); ++t) {
        bool inside = true;
        for (int i = 0; i < d && inside; ++i) {
          const int c = coords[p][i] - disp[t][i];
          inside = c >= 0 && c < g.n;
        }
        if (inside) acc += taps[t].second * in[p - taps[t].first];
      }
      o[p] = damp * acc;
    }
  }
  return out;
}

std::vector<TestField> probe_dictionary(const LatticeBox& box, const PGrid& grid, int m,
                                        const ProbeSpec& spec) {
  if (spec.count < 1) throw ConfigError("probe dictionary needs at least one probe");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const IntBox kb = box.kappa_box(), xb = box.xi_box();
  const int kr = std::max(0, kb.r - spec.margin), xr = std::max(0, xb.r - spec.margin);
  const int d = box.dim;
  const double span = grid.h * (grid.n - 1);
  std::vector<TestField> out;
  for (int c = 0; c < spec.count; ++c) {
    // kappa sweeps [-kr, kr] in the first axis; other axes and xi random.
    IVec q(d), xi(d);
    q[0] = spec.count == 1 ? 0 : -kr + int(std::lround(2.0 * kr * c / (spec.count - 1)));
    for (int i = 1; i < d; ++i) q[i] = int(std::floor(U(rng) * (2 * kr + 1))) - kr;
    for (int i = 0; i < d; ++i) xi[i] = int(std::floor(U(rng) * (2 * xr + 1))) - xr;
    RVec centre(d);
    for (auto& v : centre) v = grid.lo + span * (0.4 + 0.2 * U(rng));
    const double width = span * (0.12 + 0.08 * U(rng));
    TestField f(box, grid, m);
    const long e = box.entry(xi, q);
    for (long p = 0; p < grid.size(); ++p) {
      const RVec pt = grid.point(p);
      double val = 1.0;
      for (int i = 0; i < d; ++i) {
        const double r = (pt[i] - centre[i]) / width;
        if (spec.shape == ProbeShape::Smooth) {
          val *= bump(r * r);
        } else {
          // flat top with linear ramps four cells wide
          const double ramp = 4.0 * grid.h / width;
          val *= std::clamp((1.0 - std::abs(r)) / ramp, 0.0, 1.0);
        }
      }
      f.at(e, p) = val;
    }
    const double nrm = em_norm(f, m);
    if (nrm > 0) f *= 1.0 / nrm;
    out.push_back(std::move(f));
  }
  return out;
}

double operator_norm_probe(const LinearOp& op, const std::vector<TestField>& probes, int m_out) {
  double best = 0.0;
  for (const auto& p : probes) best = std::max(best, em_norm(op(p), m_out));
  return best;
}

}  // namespace qlg
