#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "qlg/bfz.hpp"
#include "qlg/boltzmann.hpp"
#include "qlg/divisors.hpp"
#include "qlg/drivers.hpp"
#include "qlg/dynamics.hpp"
#include "qlg/fit.hpp"
#include "qlg/resonance.hpp"
#include "qlg/scale.hpp"

namespace qlg::cli {

namespace fs = std::filesystem;

namespace {

const double kGoldenEta = (std::sqrt(5.0) - 1.0) / 8.0;

const std::map<std::string, std::string> kLemmaAnchors = {
    {"phi-st", "phi_st closed-form double oscillatory integral bound"},
    {"single-phase", "single-phase oscillatory sum bound"},
    {"resonant-pair", "resonant-pair oscillatory bound"},
    {"double-phase", "double-phase oscillatory sum bound"},
    {"eta-integral", "eta-integrability of the small-divisor weights"},
};

const std::map<std::string, std::string> kAnchors = {
    {"simulate", "kinetic field T^eps from the rescaled Bloch-Wigner evolution"},
    {"divisors", "small-divisor constant c_delta and the admissible set A_eta"},
    {"smoothing", "smoothing operator J_nu between neighbouring scale levels"},
    {"remainder", "Holder regularity of the rough remainder"},
    {"boltzmann-compare", "weak linear Boltzmann limit of the kinetic field"},
    {"resonance-map", "resonant set: lines n.k = |n|^2"},
    {"observable", "observable at xi = 0: non-resonant bounds and resonant mass split"},
    {"single-mode", "single-mode resonant observable example"},
};

[[noreturn]] void bad(const std::string& what) { throw ConfigError("config: " + what); }

void require(bool ok, const std::string& what) {
  if (!ok) bad(what);
}

// Every key of `given` must exist in `reference`, recursively through objects.
void check_keys(const Json& reference, const Json& given, const std::string& path) {
  if (!given.is_object()) bad(path.empty() ? "top level must be an object" : path + " must be an object");
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!reference.contains(it.key())) bad("unknown key '" + key + "'");
    const Json& ref = reference.at(it.key());
    if (ref.is_object()) check_keys(ref, it.value(), key);
    else if (ref.is_number() && !it.value().is_number()) bad(key + " must be a number");
    else if (ref.is_boolean() && !it.value().is_boolean()) bad(key + " must be a boolean");
    else if (ref.is_string() && !it.value().is_string()) bad(key + " must be a string");
    else if (ref.is_array() && !it.value().is_array()) bad(key + " must be an array");
  }
}

RVec parse_list(const std::string& text) {
  RVec out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      bad("cannot parse number '" + item + "' in list '" + text + "'");
    }
    if (used != item.size()) bad("cannot parse number '" + item + "' in list '" + text + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

double num(const Json& s, const char* k) { return s.at(k).get<double>(); }

int integer(const Json& s, const char* k) {
  const double v = s.at(k).get<double>();
  if (v != std::floor(v) || std::abs(v) > 1e9) bad(std::string(k) + " must be an integer");
  return int(v);
}

RVec rvec(const Json& s, const char* k) { return s.at(k).get<RVec>(); }

bool is_half_integer(double x) { return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-12; }

std::string join(const IVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::string join(const RVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt_double(v[i]);
  return s;
}

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

PeriodicPotential potential_from(const Json& cfg) {
  const Json& p = cfg.at("potential");
  const int dim = integer(p, "dim");
  require(dim >= 1 && dim <= 3, "potential.dim must be 1, 2 or 3");
  PeriodicPotential V(dim);
  for (const Json& m : p.at("modes")) {
    require(m.is_object() && m.contains("n") && m.contains("re") && m.contains("im"),
            "potential.modes entries need n, re and im");
    const IVec n = m.at("n").get<IVec>();
    require(int(n.size()) == dim, "potential mode " + join(n) + " has the wrong dimension");
    require(std::any_of(n.begin(), n.end(), [](int v) { return v != 0; }),
            "potential mode n = 0 is not allowed (a constant shift of V)");
    V.set(n, cplx(num(m, "re"), num(m, "im")), p.at("complete_hermitian").get<bool>());
  }
  require(V.is_hermitian(), "potential is not Hermitian; list the partners or set complete_hermitian");
  return V;
}

SampledWavefunction initial_state(const Json& ini, int dim) {
  const std::string kind = ini.at("kind");
  const int R = integer(ini, "R"), q = integer(ini, "q");
  const double width = num(ini, "width"), k0 = num(ini, "momentum"), tilt = num(ini, "tilt");
  require(R >= 1 && q >= 4, "sim.initial needs R >= 1 and q >= 4");
  require(width > 0.0, "sim.initial.width must be positive");
  auto carrier = [k0, tilt](const RVec& x) { return std::exp(kI * (kTwoPi * k0 * x[0])) * (1.0 + tilt * x[0]); };
  if (kind == "bump") {
    require(width <= R, "sim.initial.width must not exceed R for a bump");
    return SampledWavefunction::from_function(
        [=](const RVec& x) { return bump(std::sqrt(norm2(x)) / width) * carrier(x); }, dim, R, q);
  }
  if (kind == "gaussian")
    return SampledWavefunction::from_function(
        [=](const RVec& x) { return std::exp(-kPi * norm2(x) / (width * width)) * carrier(x); }, dim, R, q);
  bad("sim.initial.kind must be 'bump' or 'gaussian'");
}

DivisorConfig divisor_config(const Json& cfg) {
  const Json& d = cfg.at("divisors");
  DivisorConfig dc;
  dc.delta = num(d, "delta");
  dc.n_radius = integer(d, "n_radius");
  dc.dim = integer(d, "dim");
  dc.gamma = num(d, "gamma");
  dc.validate();
  return dc;
}

struct Kinetic {
  FiberPropagator prop;
  RVec eta;
  LatticeBox box;
  ThetaNodes nodes;
  WaveField at(double t) const { return simulate_wave(prop, eta, box, t, nodes); }
};

Kinetic kinetic(const Json& cfg, double eps, const PeriodicPotential& V, const LatticeBox& box) {
  const Json& s = cfg.at("sim");
  require(int(rvec(s, "eta").size()) == V.dim(), "sim.eta must have potential.dim entries");
  return {FiberPropagator(initial_state(s.at("initial"), V.dim()), V, eps, integer(s, "mode_radius")),
          rvec(s, "eta"), box, window_nodes(V.dim(), num(s, "window") * eps, integer(s, "window_nodes"))};
}

LatticeBox box_from(const Json& s, int dim, const PeriodicPotential* V) {
  const double K = num(s, "kappa_radius");
  const int Xi = integer(s, "xi_radius");
  require(K > 0.0 && is_half_integer(K), "kappa_radius must be a positive multiple of 1/2");
  require(Xi >= 0, "xi_radius must be non-negative");
  LatticeBox box(dim, K, Xi);
  if (V) box.check_against(*V);
  return box;
}

PGrid grid_from(const Json& s, int dim) {
  const int n = integer(s, "p_points");
  const double hw = num(s, "p_half_width");
  require(n >= 3 && n % 2 == 1, "p_points must be odd and at least 3");
  require(hw > 0.0, "p_half_width must be positive");
  return PGrid::symmetric(dim, n, hw);
}

RVec time_ladder(double t_final, double dt) {
  const long n = std::lround(t_final / dt);
  RVec ts;
  for (long k = 0; k <= n; ++k) ts.push_back(k * dt);
  return ts;
}

Json fits_of(const RVec& x, const RVec& y) {
  const LineFit f = loglog_fit(x, y);
  return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

// Output sink: collects artifact names and writes the manifest at the end.
struct Sink {
  fs::path dir;
  std::vector<std::string> names;
  void text(const std::string& name, const std::string& body) {
    write_text(dir / name, body);
    names.push_back(name);
  }
  void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }
};

Json report_head(const std::string& command, const std::string& anchor) {
  return Json{{"command", command}, {"anchor", anchor}};
}

// Five Gaussian observables in d = 1; the last two carry xi != 0 parts.
std::vector<TestField> gaussian_suite(const LatticeBox& box, const PGrid& grid) {
  auto gauss = [&](double c, double w) {
    RVec g(grid.size());
    for (long p = 0; p < grid.size(); ++p) {
      const double x = (grid.point(p)[0] - c) / w;
      g[p] = std::exp(-kPi * x * x);
    }
    return g;
  };
  auto add = [&](TestField& f, int xi, int q, cplx c, const RVec& g) {
    const long e = box.entry({xi}, {q});
    if (e < 0) return;
    for (long p = 0; p < grid.size(); ++p) f.at(e, p) += c * g[p];
  };
  const RVec g0 = gauss(0.0, 0.6), g1 = gauss(0.4, 0.4), g2 = gauss(-0.3, 0.8);
  std::vector<TestField> out(5, TestField(box, grid, 2));
  for (int q = -4; q <= 4; q += 2) add(out[0], 0, q, std::exp(-0.1 * q * q), g0);
  add(out[1], 0, 2, 1.0, g1);
  add(out[2], 0, 0, 1.0, g2);
  add(out[2], 0, -2, 0.5, g2);
  add(out[3], 1, 1, 1.0, g0);
  add(out[3], -1, 1, kI, g0);
  add(out[4], 0, 2, 1.0, g2);
  add(out[4], 2, 0, 0.7, g1);
  return out;
}

// ---------------------------------------------------------------- experiments

void run_simulate(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("sim");
  const PeriodicPotential V = potential_from(cfg);
  const int d = V.dim();
  const double eps = num(s, "eps");
  require(int(rvec(s, "eta").size()) == d, "sim.eta must have potential.dim entries");
  const LatticeBox box = box_from(s, d, &V);
  const PGrid grid = grid_from(s, d);
  const Kinetic run = kinetic(cfg, eps, V, box);
  CsvTable csv({"t", "xi", "p", "kappa", "re", "im"});
  Json sup = Json::array();
  const RVec times = time_ladder(num(s, "t_final"), num(s, "dt"));
  for (double t : times) {
    const TField T = run.at(t).sample(grid, false);
    sup.push_back(T.sup_l2_xi());
    for (long e = 0; e < box.n_entries(); ++e) {
      const std::string xi = join(box.xi_of(e)), kappa = join(to_real(box.kappa2_of(e), 0.5));
      for (long p = 0; p < grid.size(); ++p) {
        const cplx v = T.at(e, p);
        csv.row({fmt_double(t), xi, join(grid.point(p)), kappa, fmt_double(v.real()), fmt_double(v.imag())});
      }
    }
  }
  out.text("snapshots.csv", csv.str());
  Json rep = report_head("simulate", anchor);
  rep["eps"] = eps;
  rep["eta"] = rvec(s, "eta");
  rep["times"] = times;
  rep["sup_l2_xi"] = sup;
  rep["rows"] = csv.n_rows();
  out.json("simulate.json", rep);
}

void run_validate_bounds(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& d = cfg.at("divisors");
  const DivisorConfig dc = divisor_config(cfg);
  const std::string lemma = d.at("lemma");
  const int samples = integer(d, "samples");
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  BoundReport rep;
  Json cases = Json::array();
  if (lemma == "eta-integral") {
    // Fixed panel: the integrals cost up to seconds each, so sampling is replaced
    // by a deterministic mix of collinear and independent pairs.
    require(dc.dim == 2, "eta-integral runs in divisors.dim = 2");
    struct Case {
      IVec n, np, q;
    };
    const std::vector<Case> panel = {{{1, 0}, {0, 1}, {0, 0}},  {{1, 0}, {2, 0}, {1, 0}},
                                     {{1, 1}, {-2, -2}, {1, 0}}, {{2, -1}, {4, -2}, {0, 1}},
                                     {{1, 2}, {-1, 1}, {2, 0}},  {{2, 1}, {1, -3}, {-1, 1}},
                                     {{3, 0}, {0, 2}, {1, 1}}};
    const double a = 0.5, b = 0.5, sg = 2.0 - 2.0 * dc.gamma - a - b;
    rep.lemma = lemma;
    rep.samples = int(panel.size());
    for (const auto& c : panel) {
      const EtaIntegralReport r = validate_eta_integral(c.n, c.np, c.q, a, b, sg, dc);
      if (!std::isfinite(r.ratio)) rep.failures.push_back("n=" + join(c.n) + " n'=" + join(c.np));
      else rep.max_ratio = std::max(rep.max_ratio, r.ratio);
      cases.push_back(Json{{"n", c.n}, {"n_prime", c.np}, {"kappa2", c.q}, {"value", r.value},
                           {"ratio", r.ratio}, {"collinear", r.collinear}, {"excluded", r.excluded}});
    }
  } else {
    const RVec eta = rvec(d, "eta");
    require(int(eta.size()) == dc.dim, "divisors.eta must have divisors.dim entries");
    rep = validate_osc_bounds(dc, lemma, samples, seed, eta);
  }
  Json j{{"lemma", rep.lemma}, {"samples", rep.samples}, {"max_ratio", rep.max_ratio}};
  j["fitted_exponents"] = Json::object();
  for (const auto& [k, v] : rep.fitted_exponents) j["fitted_exponents"][k] = v;
  j["failures"] = rep.failures;
  j["anchor"] = anchor;
  if (!cases.empty()) j["cases"] = cases;
  out.json("bounds.json", j);
}

void run_divisors(const Json& cfg, Sink& out, const std::string& anchor) {
  const DivisorConfig dc = divisor_config(cfg);
  const int samples = integer(cfg.at("divisors"), "samples");
  std::mt19937_64 rng(cfg.at("seed").get<std::uint64_t>());
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  CsvTable csv({"eta", "member", "c_delta", "worst_ratio"});
  int failures = 0;
  double c_max = 1.0;
  for (int k = 0; k < samples; ++k) {
    RVec eta(dc.dim);
    for (double& v : eta) v = u(rng);
    const MembershipResult m = in_A_eta(eta, dc);
    failures += !m.member;
    if (std::isfinite(m.c_value)) c_max = std::max(c_max, m.c_value);
    csv.row({join(eta), m.member ? "1" : "0", fmt_double(m.c_value), fmt_double(m.worst_ratio)});
  }
  out.text("divisors.csv", csv.str());
  Json rep = report_head("divisors", anchor);
  rep["samples"] = samples;
  rep["failure_fraction"] = double(failures) / samples;
  rep["max_c_delta"] = c_max;
  rep["zero_rejected"] = !in_A_eta(RVec(dc.dim, 0.0), dc).member;
  out.json("divisors.json", rep);
}

void run_smoothing(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("smoothing");
  const LatticeBox box = box_from(s, 1, nullptr);
  const PGrid grid = grid_from(s, 1);
  // The gain is fitted where the mollifier is wide against the probe ramps, the
  // defect where the damping is still linear in nu^{1/2}.
  const RVec gain_nus = rvec(s, "gain_nu_list"), defect_nus = rvec(s, "defect_nu_list");
  require(gain_nus.size() >= 2 && defect_nus.size() >= 2, "smoothing nu lists need at least two values each");
  ProbeSpec plateau;
  plateau.count = integer(s, "probes");
  plateau.seed = cfg.at("seed").get<std::uint64_t>();
  plateau.shape = ProbeShape::Plateau;
  ProbeSpec smooth = plateau;
  smooth.shape = ProbeShape::Smooth;
  const auto pp = probe_dictionary(box, grid, 1, plateau);
  const auto sp = probe_dictionary(box, grid, 2, smooth);
  CsvTable csv({"operator", "nu", "norm"});
  RVec gain, defect;
  for (double nu : gain_nus) {
    const SmoothingSpec spec{nu, 4};
    gain.push_back(operator_norm_probe([&](const TestField& f) { return smoothing_apply(f, spec); }, pp, 2));
    csv.row({"J:E1->E2", fmt_double(nu), fmt_double(gain.back())});
  }
  for (double nu : defect_nus) {
    const SmoothingSpec spec{nu, 4};
    defect.push_back(operator_norm_probe([&](const TestField& f) { return smoothing_apply(f, spec) - f; }, sp, 1));
    csv.row({"J-Id:E2->E1", fmt_double(nu), fmt_double(defect.back())});
  }
  out.text("smoothing.csv", csv.str());
  Json rep = report_head("smoothing", anchor);
  rep["gain_fit"] = fits_of(gain_nus, gain);
  rep["defect_fit"] = fits_of(defect_nus, defect);
  rep["expected_slopes"] = Json{{"gain", -1.0}, {"defect", 0.5}};
  out.json("smoothing.json", rep);
}

void run_remainder(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("remainder");
  const PeriodicPotential V = potential_from(cfg);
  const LatticeBox box = box_from(s, V.dim(), &V);
  const PGrid grid = grid_from(s, V.dim());
  ProbeSpec ps;
  ps.count = integer(s, "probes");
  ps.seed = cfg.at("seed").get<std::uint64_t>();
  const auto probes = probe_dictionary(box, grid, 2, ps);
  const RVec taus = rvec(s, "taus");
  require(taus.size() >= 2, "remainder.taus needs at least two values");
  const double gamma = divisor_config(cfg).gamma;
  CsvTable csv({"eps", "tau", "remainder"});
  Json per_eps = Json::array();
  for (double eps : rvec(cfg, "eps_list")) {
    const Kinetic run = kinetic(cfg, eps, V, box);
    const WaveField Ts = run.at(0.0);
    RVec r;
    for (double tau : taus) {
      const WaveField Tt = run.at(tau);
      double best = 0.0;
      for (const auto& f : probes) best = std::max(best, std::abs(remainder_increment(Ts, Tt, f, V)));
      r.push_back(best);
      csv.row({fmt_double(eps), fmt_double(tau), fmt_double(best)});
    }
    per_eps.push_back(Json{{"eps", eps}, {"fit", fits_of(taus, r)}});
  }
  out.text("remainder.csv", csv.str());
  Json rep = report_head("remainder", anchor);
  rep["target_slope"] = 3.0 * gamma;
  rep["per_eps"] = per_eps;
  out.json("remainder.json", rep);
}

void run_boltzmann_compare(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("boltzmann");
  const PeriodicPotential V = potential_from(cfg);
  require(V.dim() == 1, "boltzmann-compare runs in potential.dim = 1");
  const LatticeBox box = box_from(s, 1, &V);
  const PGrid grid = grid_from(s, 1);
  const auto suite = gaussian_suite(box, grid);
  const RVec times = time_ladder(num(s, "t_final"), num(s, "dt_out"));
  const double dt = num(s, "dt");
  CsvTable csv({"eps", "psi_id", "t", "pairing_gap"});
  Json sups = Json::array();
  RVec prev;
  bool monotone = true;
  for (double eps : rvec(cfg, "eps_list")) {
    const Kinetic run = kinetic(cfg, eps, V, box);
    std::vector<WaveField> sim;
    for (double t : times) sim.push_back(run.at(t));
    const auto lim = boltzmann_evolve(sim.front(), V, times, dt);
    const ComparisonReport rep = compare_to_limit(sim, lim, suite);
    for (const auto& row : rep.rows)
      csv.row({fmt_double(eps), std::to_string(row.psi_id), fmt_double(row.t), fmt_double(row.gap)});
    for (std::size_t i = 0; i < prev.size(); ++i) monotone = monotone && rep.sup_gap[i] < prev[i];
    prev = rep.sup_gap;
    sups.push_back(Json{{"eps", eps}, {"sup_gap", rep.sup_gap}});
  }
  out.text("comparison.csv", csv.str());
  Json rep = report_head("boltzmann-compare", anchor);
  rep["sup_gaps"] = sups;
  rep["monotone_in_eps"] = monotone;
  out.json("comparison.json", rep);
}

void write_lines(Sink& out, const std::vector<Segment>& lines, double box, bool svg) {
  CsvTable csv({"n1", "n2", "x1", "y1", "x2", "y2"});
  for (const auto& sg : lines)
    csv.row({std::to_string(sg.n[0]), std::to_string(sg.n[1]), fmt_double(sg.x1), fmt_double(sg.y1),
             fmt_double(sg.x2), fmt_double(sg.y2)});
  out.text("resonance_lines.csv", csv.str());
  if (svg) out.text("resonance_lines.svg", resonance_svg(lines, box));
}

void run_resonance_map(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("resonance");
  const int R = integer(s, "n_radius");
  const double box = num(s, "box");
  const auto lines = resonance_lines(R, box);
  write_lines(out, lines, box, s.at("svg").get<bool>());
  Json rep = report_head("resonance-map", anchor);
  rep["n_radius"] = R;
  rep["box"] = box;
  rep["lines"] = lines.size();
  out.json("resonance_map.json", rep);
}

void run_observable(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("observable");
  const PeriodicPotential V = potential_from(cfg);
  const int d = V.dim();
  require(d <= 2, "observable runs in potential.dim 1 or 2");
  const LatticeBox box = box_from(s, d, &V);
  const PGrid grid = grid_from(s, d);
  const double tau = num(s, "tau"), frozen_eps = num(s, "frozen_eps"), r = num(s, "slab"),
               centre = num(s, "f_centre");
  require(tau > 0.0, "observable.tau must be positive");
  const RVec eps_list = rvec(cfg, "eps_list");
  const Observable F = [centre](const RVec& p, const RVec& k) {
    return bump(std::sqrt(norm2(p)) / 1.2) * std::exp(-2.0 * (k[0] - centre) * (k[0] - centre));
  };
  // Panels resolve a quarter period of the fastest kernel oscillation.
  const int panels = int(std::ceil(0.5 / (0.25 * eps_list.back() / (4.0 * kPi * tau))));
  const EtaNodes nodes = eta_composite_nodes(d, panels, 6, 6);
  const FieldProvider T = [&](const RVec& eta) { return frozen_field(box, eta, frozen_eps, 0.0); };
  const NonResonantReport nr = observable_nonresonant_bounds(T, F, grid, box, 0.0, tau, eps_list, nodes, V);
  CsvTable csv({"eps", "x1_term", "z_term", "transport_term", "resonant_on_slab", "resonant_off_slab"});
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const MassSplit m = resonant_mass_split(T, F, grid, 0.0, tau, eps_list[i], nodes, V, r);
    csv.row({fmt_double(eps_list[i]), fmt_double(nr.x1_term[i]), fmt_double(nr.z_term[i]),
             fmt_double(nr.transport_term[i]), fmt_double(m.on_abs), fmt_double(m.off_abs)});
  }
  out.text("observable.csv", csv.str());
  const double gamma = divisor_config(cfg).gamma;
  Json rep = report_head("observable", anchor);
  rep["x1_slope"] = nr.x1_slope;
  rep["z_slope"] = nr.z_slope;
  rep["x1_slope_floor"] = 0.5 - gamma - 0.1;
  rep["z_slope_floor"] = 1.0 - 2.0 * gamma - 0.1;
  rep["eta_nodes"] = nodes.w.size();
  out.json("observable.json", rep);
}

void run_single_mode(const Json& cfg, Sink& out, const std::string& anchor) {
  const Json& s = cfg.at("single_mode");
  const RVec eps_list = rvec(cfg, "eps_list");
  const SingleModeReport r =
      single_mode_scenario(num(s, "rho"), eps_list, s.at("control").get<bool>(), num(s, "tau"));
  CsvTable csv({"eps", "resonant_term"});
  for (std::size_t i = 0; i < r.eps.size(); ++i) csv.row({fmt_double(r.eps[i]), fmt_double(r.term[i])});
  out.text("single_mode.csv", csv.str());
  write_lines(out, r.lines, 2.0, s.at("svg").get<bool>());
  Json rep = report_head("single-mode", anchor);
  rep["control"] = s.at("control").get<bool>();
  rep["ratio_last_over_first"] = r.ratio;
  rep["lines"] = r.lines.size();
  out.json("single_mode.json", rep);
}

}  // namespace

Json default_config() {
  Json j;
  j["seed"] = 1;
  j["out"] = "qlg_out";
  j["eps_list"] = {0.1, 0.05, 0.025};
  j["potential"] = {{"dim", 1},
                    {"complete_hermitian", true},
                    {"modes", Json::array({Json{{"n", Json::array({1})}, {"re", 1.0}, {"im", 0.0}}})}};
  j["sim"] = {{"eps", 0.05},
              {"t_final", 0.5},
              {"dt", 0.1},
              {"mode_radius", 8},
              {"kappa_radius", 2.0},
              {"xi_radius", 2},
              {"p_points", 17},
              {"p_half_width", 2.0},
              {"window", 3.0},
              {"window_nodes", 120},
              {"eta", Json::array({kGoldenEta})},
              {"initial", {{"kind", "bump"}, {"R", 1}, {"q", 32}, {"width", 0.95}, {"momentum", 0.7}, {"tilt", 0.3}}}};
  j["divisors"] = {{"delta", 0.1},
                   {"n_radius", 20},
                   {"dim", 2},
                   {"gamma", 0.4},
                   {"samples", 1000},
                   {"lemma", "phi-st"},
                   {"eta", Json::array({kGoldenEta, (std::sqrt(2.0) - 1.0) / 4.0})}};
  j["smoothing"] = {{"kappa_radius", 48.0},
                    {"xi_radius", 0},
                    {"p_points", 4097},
                    {"p_half_width", 4.0},
                    {"probes", 12},
                    {"gain_nu_list", geomspace(2e-3, 2e-2, 4)},
                    {"defect_nu_list", geomspace(2.5e-4, 2.5e-3, 4)}};
  j["remainder"] = {{"kappa_radius", 2.0},
                    {"xi_radius", 4},
                    {"p_points", 129},
                    {"p_half_width", 4.0},
                    {"probes", 12},
                    {"taus", {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125}}};
  j["boltzmann"] = {{"kappa_radius", 3.0}, {"xi_radius", 3}, {"p_points", 65}, {"p_half_width", 2.0},
                    {"t_final", 0.5},      {"dt_out", 0.01}, {"dt", 2e-3}};
  j["resonance"] = {{"n_radius", 3}, {"box", 4.0}, {"svg", true}};
  j["observable"] = {{"kappa_radius", 3.0}, {"xi_radius", 2}, {"p_points", 9}, {"p_half_width", 1.0},
                     {"tau", 0.5},          {"frozen_eps", 0.1}, {"slab", 0.5}, {"f_centre", 0.3}};
  j["single_mode"] = {{"rho", 0.1}, {"tau", 0.5}, {"control", false}, {"svg", true}};
  return j;
}

Json effective_config(const Json& file_config, const Overrides& ov) {
  Json cfg = default_config();
  check_keys(cfg, file_config, "");
  cfg.merge_patch(file_config);
  if (ov.eps) {
    const RVec e = parse_list(*ov.eps);
    cfg["eps_list"] = e;
    cfg["sim"]["eps"] = e.front();
  }
  if (ov.seed) cfg["seed"] = *ov.seed;
  if (ov.out) cfg["out"] = *ov.out;
  if (ov.n_radius) cfg["resonance"]["n_radius"] = *ov.n_radius;
  if (ov.box) cfg["resonance"]["box"] = *ov.box;
  if (ov.lemma) cfg["divisors"]["lemma"] = *ov.lemma;
  if (ov.samples) cfg["divisors"]["samples"] = *ov.samples;

  require(cfg.at("seed").is_number_integer() && cfg.at("seed").get<long long>() >= 0, "seed must be a non-negative integer");
  require(!cfg.at("out").get<std::string>().empty(), "out must name a directory");
  const RVec eps = rvec(cfg, "eps_list");
  require(!eps.empty(), "eps_list must not be empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0 && eps[i] < 1.0, "eps values must lie in (0, 1)");
    require(i == 0 || eps[i] < eps[i - 1], "eps_list must be strictly decreasing");
  }
  const Json& s = cfg.at("sim");
  require(num(s, "eps") > 0.0 && num(s, "eps") < 1.0, "sim.eps must lie in (0, 1)");
  require(num(s, "dt") > 0.0, "sim.dt must be positive");
  require(num(s, "t_final") >= 0.0, "sim.t_final must be non-negative");
  require(integer(s, "mode_radius") >= 1 && integer(s, "window_nodes") >= 1, "sim mode/window sizes must be positive");
  for (double e : rvec(s, "eta")) require(e >= -0.25 && e < 0.25, "sim.eta must lie in [-1/4, 1/4)");
  const std::string lemma = cfg.at("divisors").at("lemma");
  require(kLemmaAnchors.count(lemma) == 1,
          "divisors.lemma must be one of phi-st, single-phase, resonant-pair, double-phase, eta-integral");
  require(integer(cfg.at("divisors"), "samples") >= 1, "divisors.samples must be positive");
  divisor_config(cfg);
  potential_from(cfg);
  require(integer(cfg.at("resonance"), "n_radius") >= 1, "resonance.n_radius must be >= 1");
  require(num(cfg.at("resonance"), "box") > 0.0, "resonance.box must be positive");
  return cfg;
}

RunResult run_experiment(const std::string& command, const Json& cfg) {
  std::string anchor;
  if (command == "validate-bounds") anchor = kLemmaAnchors.at(cfg.at("divisors").at("lemma").get<std::string>());
  else if (kAnchors.count(command)) anchor = kAnchors.at(command);
  else bad("unknown command '" + command + "'");

  Sink out{fs::path(cfg.at("out").get<std::string>()), {}};
  if (command == "simulate") run_simulate(cfg, out, anchor);
  else if (command == "validate-bounds") run_validate_bounds(cfg, out, anchor);
  else if (command == "divisors") run_divisors(cfg, out, anchor);
  else if (command == "smoothing") run_smoothing(cfg, out, anchor);
  else if (command == "remainder") run_remainder(cfg, out, anchor);
  else if (command == "boltzmann-compare") run_boltzmann_compare(cfg, out, anchor);
  else if (command == "resonance-map") run_resonance_map(cfg, out, anchor);
  else if (command == "observable") run_observable(cfg, out, anchor);
  else run_single_mode(cfg, out, anchor);

  std::error_code ec;
  fs::remove(out.dir / "error.json", ec);  // stale report from an earlier failed run
  // The output location is not part of the experiment, so it stays out of the hash.
  Json hashed = cfg;
  hashed.erase("out");
  write_json(out.dir / "manifest.json",
             make_manifest(command, anchor, hashed, cfg.at("seed").get<std::uint64_t>(), out.names));
  return {anchor, out.names};
}

}  // namespace qlg::cli
