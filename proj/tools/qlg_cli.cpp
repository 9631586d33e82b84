// qlg: configuration-driven experiment runner.
#include <fstream>
#include <map>
#include <iostream>

#include "CLI11.hpp"
#include "experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// One-line JSON error on stderr; also dropped into the output directory when possible.
int fail(int code, const std::string& kind, const std::string& message, const std::string& command,
         const std::string& out_dir) {
  qlg::Json err{{"error", {{"kind", kind}, {"message", message}, {"command", command}}},
                {"exit_code", code}};
  std::cerr << err.dump() << "\n";
  if (!out_dir.empty() && code == kExitConfig) {
    try {
      qlg::write_json(std::filesystem::path(out_dir) / "error.json", err);
    } catch (...) {
    }
  }
  return code;
}

qlg::Json read_config(const std::string& path) {
  if (path.empty()) return qlg::Json::object();
  std::ifstream in(path);
  if (!in) throw qlg::IoError("cannot open config '" + path + "'");
  try {
    return qlg::Json::parse(in);
  } catch (const qlg::Json::parse_error& e) {
    throw qlg::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Wigner kinetics: scaling experiments"};
  app.set_version_flag("--version", QLG_VERSION);
  app.require_subcommand(1);

  std::string config_path, eps, out, lemma;
  std::uint64_t seed = 0;
  int n_radius = 0, samples = 0;
  double box = 0.0;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& name : qlg::cli::kCommands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file");
    opts["eps"] = sub->add_option("--eps", eps, "comma-separated eps list (first value for single-eps runs)");
    opts["seed"] = sub->add_option("--seed", seed, "seed for every random draw");
    opts["out"] = sub->add_option("--out", out, "output directory");
    opts["n-radius"] = sub->add_option("--n-radius", n_radius, "resonance map: |n|_inf radius");
    opts["box"] = sub->add_option("--box", box, "resonance map: view box half-width");
    opts["lemma"] = sub->add_option("--lemma", lemma,
                                    "bound to validate: phi-st, single-phase, resonant-pair, double-phase, eta-integral");
    opts["samples"] = sub->add_option("--samples", samples, "number of random samples");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(kExitConfig, "usage", e.what(), "", "");
  }

  const std::string command = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommands().front();
  qlg::cli::Overrides ov;
  if (sub->count("--eps")) ov.eps = eps;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--out")) ov.out = out;
  if (sub->count("--n-radius")) ov.n_radius = n_radius;
  if (sub->count("--box")) ov.box = box;
  if (sub->count("--lemma")) ov.lemma = lemma;
  if (sub->count("--samples")) ov.samples = samples;

  std::string out_dir = out;
  try {
    const qlg::Json cfg = qlg::cli::effective_config(read_config(config_path), ov);
    out_dir = cfg.at("out").get<std::string>();
    const auto res = qlg::cli::run_experiment(command, cfg);
    std::cout << qlg::Json{{"command", command}, {"anchor", res.anchor}, {"out", out_dir},
                           {"artifacts", res.artifacts}}
                     .dump()
              << "\n";
    return 0;
  } catch (const qlg::IoError& e) {
    return fail(kExitIo, "io", e.what(), command, out_dir);
  } catch (const qlg::ConfigError& e) {
    return fail(kExitConfig, "config", e.what(), command, out_dir);
  } catch (const qlg::Json::exception& e) {
    return fail(kExitConfig, "config", e.what(), command, out_dir);
  } catch (const std::exception& e) {
    return fail(1, "runtime", e.what(), command, out_dir);
  }
}
