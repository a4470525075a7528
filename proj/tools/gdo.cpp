// gdo: build deformed-oscillator algebras, their coherent/squeezed states and
// phase operators from the command line, and verify the operator identities
// numerically with residual reports.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gdo/cli.hpp"

namespace {

using gdo::json;

struct FlagBinder {
  std::vector<std::function<void(json&)>> setters;

  void number(CLI::App* cmd, const std::string& flag, const std::string& key,
              const std::string& desc) {
    auto val = std::make_shared<double>();
    auto* opt = cmd->add_option(flag, *val, desc);
    setters.push_back([=](json& j) {
      if (opt->count()) j[key] = *val;
    });
  }

  void integer(CLI::App* cmd, const std::string& flag, const std::string& key,
               const std::string& desc) {
    auto val = std::make_shared<int>();
    auto* opt = cmd->add_option(flag, *val, desc);
    setters.push_back([=](json& j) {
      if (opt->count()) j[key] = *val;
    });
  }

  void text(CLI::App* cmd, const std::string& flag, const std::string& key,
            const std::string& desc) {
    auto val = std::make_shared<std::string>();
    auto* opt = cmd->add_option(flag, *val, desc);
    setters.push_back([=](json& j) {
      if (opt->count()) j[key] = *val;
    });
  }

  void toggle(CLI::App* cmd, const std::string& flag, const std::string& key,
              const std::string& desc) {
    auto val = std::make_shared<bool>(false);
    auto* opt = cmd->add_flag(flag, *val, desc);
    setters.push_back([=](json& j) {
      if (opt->count()) j[key] = *val;
    });
  }

  // "re" or "re,im" -> [re, im]
  void complex_pair(CLI::App* cmd, const std::string& flag, const std::string& key,
                    const std::string& desc) {
    auto val = std::make_shared<std::string>();
    auto* opt = cmd->add_option(flag, *val, desc + " (RE or RE,IM)");
    setters.push_back([=](json& j) {
      if (!opt->count()) return;
      double re = 0.0, im = 0.0;
      char comma = 0;
      std::istringstream in(*val);
      if (!(in >> re)) throw gdo::Error("could not parse complex value '" + *val + "'");
      if (in >> comma && comma == ',' && !(in >> im))
        throw gdo::Error("could not parse complex value '" + *val + "'");
      j[key] = json::array({re, im});
    });
  }

  void number_list(CLI::App* cmd, const std::string& flag, const std::string& key,
                   const std::string& desc) {
    auto val = std::make_shared<std::vector<double>>();
    auto* opt = cmd->add_option(flag, *val, desc)->delimiter(',');
    setters.push_back([=](json& j) {
      if (opt->count()) j[key] = *val;
    });
  }

  void integer_list(CLI::App* cmd, const std::string& flag, const std::string& key,
                    const std::string& desc) {
    auto val = std::make_shared<std::vector<int>>();
    auto* opt = cmd->add_option(flag, *val, desc)->delimiter(',');
    setters.push_back([=](json& j) {
      if (opt->count()) j[key] = *val;
    });
  }

  // repeatable NAME=VALUE
  void params(CLI::App* cmd, const std::string& flag, const std::string& desc) {
    auto val = std::make_shared<std::vector<std::string>>();
    auto* opt = cmd->add_option(flag, *val, desc);
    setters.push_back([=](json& j) {
      if (!opt->count()) return;
      json p = j.contains("params") ? j["params"] : json::object();
      for (const auto& kv : *val) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw gdo::Error("parameter '" + kv + "' is not of the form NAME=VALUE");
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      j["params"] = p;
    });
  }

  void apply(json& j) const {
    for (const auto& s : setters) s(j);
  }
};

void add_structure_flags(FlagBinder& bind, CLI::App* cmd) {
  bind.text(cmd, "--family,--structure", "family",
            "structure family: harmonic|q_symmetric|q_abs|q_abs_shift|isos|self_similar|custom_expr");
  bind.complex_pair(cmd, "--q", "q", "deformation parameter");
  bind.number(cmd, "--K", "K", "real shift for q_abs_shift");
  bind.number_list(cmd, "--omegas", "omegas", "self_similar omega constants");
  bind.text(cmd, "--expr", "expr", "custom structure expression in x");
  bind.params(cmd, "--param", "named constant NAME=VALUE for expressions");
  bind.text(cmd, "--structure-file", "structure_file", "JSON file with a serialized structure");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for generally deformed oscillator algebras, their states, "
               "and the hermitian phase operator"};
  app.require_subcommand(1);

  gdo::RunConfig cfg;
  std::string out_path, config_path;
  app.add_option("--out", out_path, "write the output to a file instead of stdout");
  app.add_option("--format", cfg.format, "output format: json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--tol", cfg.tol, "tolerance override for the main checks");
  app.add_option("--seed", cfg.seed, "seed for randomized probe suites");
  app.add_option("--config", config_path, "JSON config file; flags win on conflict");

  FlagBinder bind;

  auto* structure = app.add_subcommand("structure", "parse and probe structure functions");
  structure->require_subcommand(1);
  auto* s_check = structure->add_subcommand("check", "probe nonnegativity and periodicity");
  add_structure_flags(bind, s_check);
  bind.integer(s_check, "--S", "S", "root-of-unity order for periodicity checks");
  s_check->callback([&] { cfg.command = "structure.check"; });
  auto* s_eval = structure->add_subcommand("eval", "evaluate the structure function at a point");
  add_structure_flags(bind, s_eval);
  bind.number(s_eval, "--x", "x", "evaluation point");
  s_eval->callback([&] { cfg.command = "structure.eval"; });

  auto* rep = app.add_subcommand("rep", "build and verify representations");
  rep->require_subcommand(1);
  for (const char* verb : {"build", "check"}) {
    auto* r = rep->add_subcommand(verb, std::string(verb) == "build"
                                            ? "build a representation and emit its JSON"
                                            : "build a representation and verify the relations");
    add_structure_flags(bind, r);
    bind.integer(r, "--dim", "dim", "Fock truncation dimension");
    bind.integer(r, "--S", "S", "cyclic representation order (dimension S+1)");
    bind.number(r, "--eta", "eta", "number-operator shift eta");
    bind.number(r, "--xi-phase", "xi_phase", "phase of the wrap constant xi");
    bind.number(r, "--xi-mod", "xi_mod", "modulus of xi (needs --allow-nonunitary-xi)");
    bind.toggle(r, "--allow-nonunitary-xi", "allow_nonunitary_xi",
                "permit |xi| != 1 (drops the adjointness invariant)");
    bind.toggle(r, "--regular", "regular",
                "two-sided truncation A|0> = 0 without the F(0) = 0 condition");
    r->callback([&cfg, verb] { cfg.command = std::string("rep.") + verb; });
  }

  auto* states = app.add_subcommand("states", "coherent and squeezed state constructions");
  states->require_subcommand(1);
  for (const char* verb : {"coherent", "squeezed", "displaced-squeezed", "identities"}) {
    auto* s = states->add_subcommand(verb, "");
    add_structure_flags(bind, s);
    bind.integer(s, "--dim", "dim", "truncation dimension");
    bind.complex_pair(s, "--alpha", "alpha", "coherent amplitude");
    bind.complex_pair(s, "--z", "z", "squeeze parameter (|z| < 1)");
    if (std::string(verb) == "identities") {
      bind.integer(s, "--kmax", "kmax", "largest k for the squeeze identity");
      bind.integer(s, "--nmax", "nmax", "largest n for the displacement identity");
    }
    s->callback([&cfg, verb] { cfg.command = std::string("states.") + verb; });
  }

  auto* multi = app.add_subcommand("multiphoton", "multiphoton realizations and their checks");
  multi->require_subcommand(1);
  auto* m_sector = multi->add_subcommand("sector", "intensity-dependent m-photon realization");
  bind.text(m_sector, "--f", "f", "coupling expression in N");
  bind.params(m_sector, "--param", "named constant NAME=VALUE");
  bind.integer(m_sector, "--m", "m", "photon multiplicity");
  bind.integer(m_sector, "--i", "i", "sector offset");
  bind.integer(m_sector, "--dim", "dim", "sector dimension");
  bind.text(m_sector, "--coupling-file", "coupling_file", "JSON file with a serialized coupling");
  m_sector->callback([&] { cfg.command = "multiphoton.sector"; });
  auto* m_broken = multi->add_subcommand("broken-vacuum",
                                         "quantify the broken q-oscillator vacuum defect");
  bind.number(m_broken, "--q", "q_real", "real deformation parameter");
  bind.integer(m_broken, "--m", "m", "photon multiplicity");
  bind.integer(m_broken, "--i", "i", "sector offset (broken regime: 1 <= i < m)");
  bind.integer(m_broken, "--dim", "dim", "sector dimension");
  m_broken->callback([&] { cfg.command = "multiphoton.broken-vacuum"; });
  auto* m_two = multi->add_subcommand("two-mode", "two-mode multiphoton realization");
  bind.text(m_two, "--f", "f", "coupling expression in N1, N2");
  bind.params(m_two, "--param", "named constant NAME=VALUE");
  bind.integer(m_two, "--m", "m", "mode-1 multiplicity");
  bind.integer(m_two, "--n", "n", "mode-2 multiplicity");
  bind.integer(m_two, "--i", "i", "mode-1 offset");
  bind.integer(m_two, "--j", "j", "mode-2 offset");
  bind.integer(m_two, "--dim", "dim", "sector dimension");
  bind.complex_pair(m_two, "--z", "z", "squeeze parameter for the sample state");
  bind.text(m_two, "--coupling-file", "coupling_file", "JSON file with a serialized coupling");
  m_two->callback([&] { cfg.command = "multiphoton.two-mode"; });

  auto* isos = app.add_subcommand("isos", "isospectral oscillator system");
  isos->require_subcommand(1);
  for (const char* verb : {"rep", "coherent", "squeezed", "intertwine"}) {
    auto* s = isos->add_subcommand(verb, "");
    bind.integer(s, "--dim", "dim", "truncation dimension");
    bind.complex_pair(s, "--alpha", "alpha", "coherent amplitude");
    bind.complex_pair(s, "--z", "z", "squeeze parameter");
    s->callback([&cfg, verb] { cfg.command = std::string("isos.") + verb; });
  }

  auto* phase = app.add_subcommand("phase", "Pegg-Barnett phase operator machinery");
  phase->require_subcommand(1);
  auto* p_build = phase->add_subcommand("build", "phase states, Phi and exp(i Phi)");
  add_structure_flags(bind, p_build);
  bind.integer(p_build, "--S", "S", "space dimension minus one");
  bind.number(p_build, "--theta0", "theta0", "phase window origin");
  bind.number(p_build, "--eta", "eta", "number-operator shift for the cyclic route");
  p_build->callback([&] { cfg.command = "phase.build"; });
  auto* p_ladder = phase->add_subcommand("ladder", "PB ladder operators and commutator checks");
  bind.integer(p_ladder, "--S", "S", "space dimension minus one");
  bind.number(p_ladder, "--theta0", "theta0", "phase window origin");
  bind.complex_pair(p_ladder, "--alpha", "alpha", "physical coherent amplitude");
  p_ladder->callback([&] { cfg.command = "phase.ladder"; });
  auto* p_sweep = phase->add_subcommand("limit-sweep", "classical limit table over S");
  bind.integer_list(p_sweep, "--S", "S_list", "comma-separated S values");
  bind.text(p_sweep, "--family", "family", "q_abs or q_abs_shift");
  bind.integer(p_sweep, "--nmax", "nmax", "number of low levels to tabulate");
  bind.number(p_sweep, "--eta", "eta", "constant eta schedule override");
  bind.number(p_sweep, "--K", "K", "constant K schedule override");
  p_sweep->callback([&] { cfg.command = "phase.limit-sweep"; });
  auto* p_shift = phase->add_subcommand("shift-check", "phase shift operator action");
  bind.integer(p_shift, "--S", "S", "space dimension minus one");
  bind.number(p_shift, "--theta0", "theta0", "phase window origin");
  p_shift->callback([&] { cfg.command = "phase.shift-check"; });

  // let global flags (--out, --format, ...) appear after any subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough(true);
    for (auto* sub : a->get_subcommands({})) enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    json args = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw gdo::Error("cannot read config file '" + config_path + "'");
      in >> args;
    }
    bind.apply(args);  // flags win over config values
    for (const auto& [key, target] : {std::pair<const char*, const char*>{"structure_file", "structure"},
                                      std::pair<const char*, const char*>{"coupling_file", "coupling"}}) {
      if (!args.contains(key)) continue;
      std::ifstream in(args[key].get<std::string>());
      if (!in) throw gdo::Error(std::string("cannot read file for --") + key);
      json s;
      in >> s;
      args[target] = s;
      args.erase(key);
    }
    if (const char* cap = std::getenv("GDO_MAX_DIM")) cfg.max_dim = std::atoi(cap);
    cfg.args = std::move(args);

    const gdo::RunResult result = gdo::run(cfg);
    if (out_path.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw gdo::Error("cannot write output file '" + out_path + "'");
      out << result.output;
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
