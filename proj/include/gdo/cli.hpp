#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/isos.hpp"
#include "gdo/json_io.hpp"
#include "gdo/multiphoton.hpp"
#include "gdo/phase.hpp"
#include "gdo/report.hpp"
#include "gdo/repspace.hpp"
#include "gdo/states.hpp"
#include "gdo/structure.hpp"

namespace gdo {

// One fully-resolved invocation: a command name plus its parameters (flags
// already merged over any config file; flags win on conflict).
struct RunConfig {
  std::string command;
  json args = json::object();
  std::string format = "json";  // json | csv | text
  double tol = -1.0;            // < 0: per-check defaults
  std::uint64_t seed = 12345;
  int max_dim = 4096;           // GDO_MAX_DIM overrides
};

// Exit-code contract: 0 all checks pass, 1 usage/config error (thrown as
// gdo::Error before any report exists), 2 at least one check entry failed.
struct RunResult {
  int exit_code = 0;
  std::string output;
};

namespace cli_detail {

inline double arg_double(const json& a, const char* key, double def) {
  return a.contains(key) ? a.at(key).get<double>() : def;
}

inline int arg_int(const json& a, const char* key, int def) {
  return a.contains(key) ? a.at(key).get<int>() : def;
}

inline bool arg_bool(const json& a, const char* key, bool def) {
  return a.contains(key) ? a.at(key).get<bool>() : def;
}

inline std::string arg_str(const json& a, const char* key, const std::string& def) {
  return a.contains(key) ? a.at(key).get<std::string>() : def;
}

inline cplx arg_complex(const json& a, const char* key, cplx def) {
  if (!a.contains(key)) return def;
  const auto& v = a.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  return {v.at(0).get<double>(), v.size() > 1 ? v.at(1).get<double>() : 0.0};
}

inline std::map<std::string, double> arg_params(const json& a) {
  std::map<std::string, double> params;
  if (a.contains("params"))
    for (const auto& [k, v] : a.at("params").items()) params[k] = v.get<double>();
  return params;
}

inline void require_finite(const json& a) {
  std::function<void(const json&)> walk = [&](const json& node) {
    if (node.is_number_float() && !std::isfinite(node.get<double>()))
      throw Error("config: non-finite numeric parameter");
    if (node.is_object() || node.is_array())
      for (const auto& child : node) walk(child);
  };
  walk(a);
}

inline void check_dim(const RunConfig& cfg, int dim, const char* what) {
  if (dim < 1) throw Error(std::string(what) + " must be positive");
  if (dim > cfg.max_dim)
    throw Error(std::string(what) + " = " + std::to_string(dim) + " exceeds the cap " +
                std::to_string(cfg.max_dim) + " (override with GDO_MAX_DIM)");
}

inline cplx root_of_unity(int period) {
  const double phi = 2.0 * kPi / static_cast<double>(period);
  return {std::cos(phi), std::sin(phi)};
}

// Builds a structure function from flat args (family/q/K/omegas/expr/params)
// or a nested "structure" object. For root-of-unity families, q defaults to
// exp(2 pi i/(S+1)) when S is given.
inline StructureFunction structure_from_args(const json& a) {
  if (a.contains("structure")) return structure_from_json(a.at("structure"));
  const std::string family = arg_str(a, "family", a.contains("expr") ? "custom_expr" : "");
  if (family.empty())
    throw Error("no structure function given (use --family, --expr or --structure-file)");
  cplx q = arg_complex(a, "q", cplx{0.0, 0.0});
  const bool q_given = a.contains("q");
  if (!q_given && a.contains("S")) q = root_of_unity(arg_int(a, "S", 0) + 1);

  if (family == "harmonic") return StructureFunction::harmonic();
  if (family == "isos") return StructureFunction::isos();
  if (family == "q_symmetric" || family == "q_abs" || family == "q_abs_shift") {
    if (!q_given && !a.contains("S"))
      throw Error("family " + family + " needs --q (or --S to imply a root of unity)");
    if (family == "q_symmetric") return StructureFunction::q_symmetric(q);
    if (family == "q_abs") return StructureFunction::q_abs(q);
    return StructureFunction::q_abs_shift(q, arg_double(a, "K", 0.0));
  }
  if (family == "self_similar") {
    if (!a.contains("omegas")) throw Error("family self_similar needs --omegas");
    return StructureFunction::self_similar(q_given ? q.real() : arg_double(a, "q_real", 0.0),
                                           a.at("omegas").get<std::vector<double>>());
  }
  if (family == "custom_expr") {
    if (!a.contains("expr")) throw Error("family custom_expr needs --expr");
    return parse_structure(a.at("expr").get<std::string>(), arg_params(a));
  }
  throw Error("unknown structure family '" + family + "'");
}

// fock when the Fock condition holds, regular (row 0 flagged) otherwise.
inline Representation ladder_rep(const StructureFunction& F, int dim) {
  if (std::abs(F.raw_eval(0.0).first) <= kNonnegTol) return build_fock_rep(F, dim);
  return build_regular_rep(F, dim);
}

inline CheckReport structure_probe_report(const StructureFunction& F, std::uint64_t seed,
                                          const json& a) {
  CheckReport report;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 64.0);
  int nonfinite = 0;
  double min_re = 0.0, max_im = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto [re, im] = F.raw_eval(u(gen));
    if (!std::isfinite(re) || !std::isfinite(im)) ++nonfinite;
    min_re = std::min(min_re, re);
    max_im = std::max(max_im, im);
  }
  report.add("random_probes_nonfinite_count", nonfinite, 0.0);
  report.add("random_probes_negativity", std::max(0.0, -min_re), 1e-12);
  report.add("random_probes_max_imag", max_im, 1e-12);

  if (a.contains("S")) {
    const int S = a.at("S").get<int>();
    if (F.is_root_of_unity(S)) {
      double worst = 0.0;
      std::uniform_real_distribution<double> ux(0.0, 40.0);
      for (int t = 0; t < 100; ++t) {
        const double x = ux(gen);
        worst = std::max(worst, std::abs(F.raw_eval(x).first - F.raw_eval(x + S + 1).first));
      }
      report.add("periodicity_over_S+1", worst, 1e-12);
    } else {
      report.add_at_least("q_pow_(S+1)_equals_1", 0.0, 1e-12);
    }
  }
  return report;
}

inline std::string render_output(const RunConfig& cfg, const CheckReport& report,
                                 json artifact = json()) {
  const ReportFormat fmt = report_format_from_string(cfg.format);
  if (fmt != ReportFormat::json || artifact.is_null()) return report_render(report, fmt);
  artifact["report"] = report_to_json(report);
  return artifact.dump(2) + "\n";
}

inline int exit_for(const CheckReport& report) { return report.all_pass() ? 0 : 2; }

}  // namespace cli_detail

inline RunResult run(const RunConfig& cfg) {
  using namespace cli_detail;
  const json& a = cfg.args;
  require_finite(a);
  const double tol = cfg.tol;

  if (cfg.command == "structure.check") {
    const StructureFunction F = structure_from_args(a);
    CheckReport report = structure_probe_report(F, cfg.seed, a);
    return {exit_for(report), render_output(cfg, report, json{{"structure", structure_to_json(F)}})};
  }

  if (cfg.command == "structure.eval") {
    const StructureFunction F = structure_from_args(a);
    if (!a.contains("x")) throw Error("structure eval needs --x");
    const double x = a.at("x").get<double>();
    const double v = F.eval(x);
    if (cfg.format == "json")
      return {0, json{{"x", x}, {"value", v}}.dump(2) + "\n"};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g\n", v);
    return {0, buf};
  }

  if (cfg.command == "rep.build" || cfg.command == "rep.check") {
    const bool check_only = cfg.command == "rep.check";
    const StructureFunction F = structure_from_args(a);

    if (F.family() == StructureFamily::isos) {
      const int dim = arg_int(a, "dim", 16);
      check_dim(cfg, dim, "dim");
      const IsosSpace sp = build_isos_rep(dim);
      CheckReport report =
          check_gdo_relations(isos_as_representation(sp), tol > 0 ? tol : kTolDerived);
      if (check_only) return {exit_for(report), render_output(cfg, report)};
      if (cfg.format == "json") return {exit_for(report), isos_to_json(sp).dump(2) + "\n"};
      return {exit_for(report), render_output(cfg, report)};
    }

    Representation rep;
    CheckReport report;
    if (a.contains("S") && F.arg_kind() == StructureArgKind::q_gdo &&
        F.is_root_of_unity(arg_int(a, "S", 0))) {
      const int S = arg_int(a, "S", 0);
      check_dim(cfg, S + 1, "S+1");
      const double eta = arg_double(a, "eta", 0.0);
      const double xi_mod = arg_double(a, "xi_mod", 1.0);
      const cplx xi = xi_mod * std::exp(cplx{0.0, arg_double(a, "xi_phase", 0.0)});
      CyclicOptions opts;
      opts.allow_nonunitary_xi = arg_bool(a, "allow_nonunitary_xi", false);
      report.merge(check_cyclic_admissibility(F, S, eta), "admissibility:");
      rep = build_cyclic_rep(F, S, eta, xi, opts);
      report.merge(check_gdo_relations(rep, tol > 0 ? tol : kTolDerived));
      report.merge(check_central_elements(rep, tol > 0 ? tol : kTolDerived));
      if (!opts.allow_nonunitary_xi)
        report.add("Adag_is_adjoint_of_A", max_abs(rep.Adag - adjoint(rep.A)), 1e-12);
    } else {
      const int dim = arg_int(a, "dim", 16);
      check_dim(cfg, dim, "dim");
      rep = arg_bool(a, "regular", false) ? build_regular_rep(F, dim) : build_fock_rep(F, dim);
      report = check_gdo_relations(rep, tol > 0 ? tol : kTolDerived);
      report.add("Adag_is_adjoint_of_A", max_abs(rep.Adag - adjoint(rep.A)), 1e-12);
    }
    if (check_only) return {exit_for(report), render_output(cfg, report)};
    if (cfg.format == "json") return {exit_for(report), rep_to_json(rep).dump(2) + "\n"};
    return {exit_for(report), render_output(cfg, report)};
  }

  if (cfg.command == "states.coherent" || cfg.command == "states.squeezed" ||
      cfg.command == "states.displaced-squeezed") {
    const StructureFunction F = structure_from_args(a);
    const int dim = arg_int(a, "dim", 48);
    check_dim(cfg, dim, "dim");
    const Representation rep = ladder_rep(F, dim);
    const cplx alpha = arg_complex(a, "alpha", cplx{});
    const cplx z = arg_complex(a, "z", cplx{});

    StateVector st;
    CheckReport report;
    if (cfg.command == "states.coherent") {
      st = coherent_state(F, alpha, dim);
      report.add("annihilation_eigen_residual", annihilation_eigen_residual(rep, st, alpha),
                 tol > 0 ? tol : 1e-9, true);
      auto d = displacement_operator(rep, alpha);
      std::vector<cplx> col(static_cast<std::size_t>(dim));
      for (int r = 0; r < dim; ++r) col[static_cast<std::size_t>(r)] = d(r, 0);
      const double nrm = norm2(col);
      double dist = 0.0;
      for (int r = 0; r < dim; ++r)
        dist += std::norm(col[static_cast<std::size_t>(r)] / nrm - st.coeffs[static_cast<std::size_t>(r)]);
      report.add("series_vs_exponential_construction", std::sqrt(dist), 1e-10);
    } else if (cfg.command == "states.squeezed") {
      st = squeezed_vacuum(F, z, dim);
      report.add("kernel_residual_muA_plus_nuAdag", squeeze_kernel_residual(rep, st, z),
                 tol > 0 ? tol : 1e-9, true);
      auto s = squeeze_operator(rep, z);
      std::vector<cplx> col(static_cast<std::size_t>(dim));
      for (int r = 0; r < dim; ++r) col[static_cast<std::size_t>(r)] = s(r, 0);
      const double nrm = norm2(col);
      double dist = 0.0;
      for (int r = 0; r < dim; ++r)
        dist += std::norm(col[static_cast<std::size_t>(r)] / nrm - st.coeffs[static_cast<std::size_t>(r)]);
      report.add("series_vs_exponential_construction", std::sqrt(dist), 1e-10);
    } else {
      auto result = displaced_squeezed_state(rep, alpha, z);
      st = result.state;
      report = result.report;
    }
    return {exit_for(report), render_output(cfg, report, state_to_json(st))};
  }

  if (cfg.command == "states.identities") {
    const StructureFunction F = structure_from_args(a);
    const int dim = arg_int(a, "dim", 48);
    check_dim(cfg, dim, "dim");
    const Representation rep = ladder_rep(F, dim);
    const int kmax = arg_int(a, "kmax", dim / 4);
    const int nmax = arg_int(a, "nmax", dim / 2 - 1);
    CheckReport report = verify_identity_tt(rep, kmax, tol > 0 ? tol : 1e-11);
    report.merge(verify_identity_tttt(rep, nmax, tol > 0 ? tol : 1e-11));
    report.merge(check_displacement_covariance(rep, arg_complex(a, "alpha", cplx{0.3, 0.0}),
                                               tol > 0 ? tol : 1e-8));
    report.merge(check_bogoliubov_failure(rep, arg_complex(a, "z", cplx{0.3, 0.0})));
    return {exit_for(report), render_output(cfg, report)};
  }

  if (cfg.command == "multiphoton.sector") {
    const int dim = arg_int(a, "dim", 12);
    const CouplingSpec spec =
        a.contains("coupling")
            ? coupling_from_json(a.at("coupling"))
            : make_coupling(arg_str(a, "f", "1"), arg_int(a, "m", 1), arg_int(a, "i", 0),
                            arg_params(a));
    if (spec.mode_count != 1) throw Error("multiphoton sector takes a one-mode coupling");
    check_dim(cfg, dim * spec.m + spec.i + spec.m, "backing dimension");
    const Representation rep = build_sector_realization(spec, dim);
    CheckReport report = check_gdo_relations(rep, tol > 0 ? tol : kTolDerived);
    return {exit_for(report), render_output(cfg, report, rep_to_json(rep))};
  }

  if (cfg.command == "multiphoton.broken-vacuum") {
    const int dim = arg_int(a, "dim", 12);
    const int m = arg_int(a, "m", 2), i = arg_int(a, "i", 1);
    check_dim(cfg, dim * m + i + m, "backing dimension");
    const double q = arg_double(a, "q_real", arg_complex(a, "q", cplx{2.0, 0.0}).real());
    CheckReport report = check_broken_vacuum(q, m, i, dim);
    const Representation exact = sector_exact_q_realization(q, m, i, dim);
    report.merge(check_gdo_relations(exact, tol > 0 ? tol : 1e-12), "sector_exact:");
    return {exit_for(report), render_output(cfg, report)};
  }

  if (cfg.command == "multiphoton.two-mode") {
    const int dim = arg_int(a, "dim", 8);
    const CouplingSpec spec =
        a.contains("coupling")
            ? coupling_from_json(a.at("coupling"))
            : make_two_mode_coupling(arg_str(a, "f", "1"), arg_int(a, "m", 1),
                                     arg_int(a, "n", 1), arg_int(a, "i", 0), arg_int(a, "j", 0),
                                     arg_params(a));
    if (spec.mode_count != 2) throw Error("multiphoton two-mode takes a two-mode coupling");
    check_dim(cfg, (dim * spec.m + spec.i + spec.m) * (dim * spec.n + spec.j + spec.n),
              "backing tensor dimension");
    const Representation rep = build_two_mode_realization(spec, dim);
    CheckReport report = check_gdo_relations(rep, tol > 0 ? tol : kTolDerived);

    const cplx z = arg_complex(a, "z", cplx{0.25, 0.0});
    const StateVector sq = squeezed_vacuum(rep.structure, z, dim);
    report.merge(check_two_mode_conservation(rep, sq), "squeezed_state:");
    report.add("squeezed_state:kernel_residual", squeeze_kernel_residual(rep, sq, z),
               tol > 0 ? tol : 1e-9, true);
    return {exit_for(report), render_output(cfg, report, rep_to_json(rep))};
  }

  if (cfg.command == "isos.rep") {
    const int dim = arg_int(a, "dim", 16);
    check_dim(cfg, dim, "dim");
    const IsosSpace sp = build_isos_rep(dim);
    CheckReport report = check_gdo_relations(isos_as_representation(sp), tol > 0 ? tol : 1e-12);
    // intertwining identity H_lambda bdag = bdag (H + 1), exact on the truncation
    ComplexMatrix h(dim, dim);
    for (int k = 0; k < dim; ++k) h(k, k) = k + 0.5;
    report.add("H_lambda_bdag_minus_bdag_(H+1)",
               max_abs(matmul(h, sp.Bdag) - matmul(sp.Bdag, h + ComplexMatrix::identity(dim))),
               1e-12);
    double split = 0.0;
    for (int k = 0; k < dim; ++k)
      split = std::max({split, std::abs(sp.Adag(0, k)), std::abs(sp.Adag(k, 0))});
    report.add("psi0_subspace_invariant", split, 0.0);
    return {exit_for(report), render_output(cfg, report, isos_to_json(sp))};
  }

  if (cfg.command == "isos.coherent") {
    const int dim = arg_int(a, "dim", 32);
    check_dim(cfg, dim, "dim");
    const cplx alpha = arg_complex(a, "alpha", cplx{});
    const StateVector st = isos_coherent_state(alpha, dim);
    CheckReport report;
    report.add("annihilation_eigen_residual",
               annihilation_eigen_residual(isos_as_representation(build_isos_rep(dim)), st, alpha),
               tol > 0 ? tol : 1e-9, true);
    report.add("psi0_component", std::abs(st.coeffs[0]), 0.0);
    return {exit_for(report), render_output(cfg, report, state_to_json(st))};
  }

  if (cfg.command == "isos.squeezed") {
    const int dim = arg_int(a, "dim", 48);
    check_dim(cfg, dim, "dim");
    const cplx z = arg_complex(a, "z", cplx{});
    const StateVector st = isos_squeezed_vacuum(z, dim);
    CheckReport report;
    report.add("kernel_residual_muA_plus_nuAdag",
               squeeze_kernel_residual(isos_as_representation(build_isos_rep(dim)), st, z),
               tol > 0 ? tol : 1e-9, true);
    return {exit_for(report), render_output(cfg, report, state_to_json(st))};
  }

  if (cfg.command == "isos.intertwine") {
    const int dim = arg_int(a, "dim", 48);
    check_dim(cfg, dim, "dim");
    CheckReport report = check_coherent_intertwining(arg_complex(a, "alpha", cplx{0.5, 0.0}), dim);
    report.merge(check_isos_squeezed_maps_to_oscillator(arg_complex(a, "z", cplx{0.3, 0.0}), dim));
    return {exit_for(report), render_output(cfg, report)};
  }

  if (cfg.command == "phase.build") {
    const int S = arg_int(a, "S", 8);
    check_dim(cfg, S + 1, "S+1");
    const double theta0 = arg_double(a, "theta0", 0.0);
    if (a.contains("family") || a.contains("structure")) {
      const StructureFunction F = structure_from_args(a);
      const double eta = arg_double(a, "eta", 0.25);
      CheckReport report = check_phase_triangle(S, theta0, F, eta);
      const cplx xi = std::exp(cplx{0.0, -theta0 * (S + 1)});
      const PhaseDecomposition pd = exp_phase_from_rep(build_cyclic_rep(F, S, eta, xi));
      return {exit_for(report), render_output(cfg, report, phase_to_json(pd))};
    }
    const PhaseDecomposition pd = pb_phase_operator(S, theta0);
    CheckReport report;
    const ComplexMatrix I = ComplexMatrix::identity(S + 1);
    report.add("phase_states_unitary",
               max_abs(matmul(adjoint(pd.phase_states), pd.phase_states) - I), 1e-12);
    report.add("expPhi_unitary", max_abs(matmul(adjoint(pd.expPhi), pd.expPhi) - I), 1e-12);
    report.add("Phi_hermitian", max_abs(pd.Phi - adjoint(pd.Phi)), 1e-12);
    return {exit_for(report), render_output(cfg, report, phase_to_json(pd))};
  }

  if (cfg.command == "phase.ladder") {
    const int S = arg_int(a, "S", 8);
    check_dim(cfg, S + 1, "S+1");
    CheckReport report = check_truncated_commutator(S, arg_double(a, "theta0", 0.0),
                                                    arg_complex(a, "alpha", cplx{1.0, 0.0}));
    return {exit_for(report), render_output(cfg, report)};
  }

  if (cfg.command == "phase.shift-check") {
    const int S = arg_int(a, "S", 8);
    check_dim(cfg, S + 1, "S+1");
    CheckReport report = phase_shift_check(S, arg_double(a, "theta0", 0.0));
    return {exit_for(report), render_output(cfg, report)};
  }

  if (cfg.command == "phase.limit-sweep") {
    if (!a.contains("S_list")) throw Error("limit-sweep needs --S with a list of values");
    const std::vector<int> s_list = a.at("S_list").get<std::vector<int>>();
    for (int s : s_list) check_dim(cfg, s + 1, "S+1");
    const std::string family = arg_str(a, "family", "q_abs");
    const StructureFamily fam = family == "q_abs"         ? StructureFamily::q_abs
                                : family == "q_abs_shift" ? StructureFamily::q_abs_shift
                                : throw Error("limit-sweep family must be q_abs or q_abs_shift");
    SweepSchedule schedule;
    if (a.contains("eta")) {
      const double eta0 = a.at("eta").get<double>();
      schedule.eta = [eta0](int) { return eta0; };
    }
    if (a.contains("K")) {
      const double k0 = a.at("K").get<double>();
      schedule.K = [k0](int) { return k0; };
    }
    const SweepResult res = classical_limit_sweep(s_list, fam, arg_int(a, "nmax", 10), schedule);
    if (cfg.format == "json") {
      json rows = json::array();
      for (const auto& r : res.rows)
        rows.push_back({{"S", r.S},
                        {"eta", r.eta},
                        {"K", r.K},
                        {"n", r.n},
                        {"band_value", r.band_value},
                        {"oscillator_value", r.oscillator_value},
                        {"abs_deviation", r.abs_deviation}});
      json out{{"rows", std::move(rows)}, {"report", report_to_json(res.report)}};
      return {exit_for(res.report), out.dump(2) + "\n"};
    }
    return {exit_for(res.report), sweep_to_csv(res.rows)};
  }

  throw Error("unknown command '" + cfg.command + "'");
}

}  // namespace gdo
