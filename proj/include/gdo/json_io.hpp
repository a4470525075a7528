#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gdo/common.hpp"
#include "gdo/complex_matrix.hpp"
#include "gdo/isos.hpp"
#include "gdo/multiphoton.hpp"
#include "gdo/phase.hpp"
#include "gdo/report.hpp"
#include "gdo/repspace.hpp"
#include "gdo/states.hpp"
#include "gdo/structure.hpp"

namespace gdo {

using json = nlohmann::ordered_json;

// Matrix form: {"rows":R, "cols":C, "data":[[re,im], ...]} row-major.
inline json matrix_to_json(const ComplexMatrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  json data = json::array();
  for (const auto& v : m.data()) data.push_back(json::array({v.real(), v.imag()}));
  j["data"] = std::move(data);
  return j;
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto& data = j.at("data");
  if (static_cast<int>(data.size()) != rows * cols)
    throw Error("matrix_from_json: data length does not match rows*cols");
  ComplexMatrix m(rows, cols);
  for (int k = 0; k < rows * cols; ++k)
    m.data()[static_cast<std::size_t>(k)] =
        cplx{data[static_cast<std::size_t>(k)][0].get<double>(),
             data[static_cast<std::size_t>(k)][1].get<double>()};
  return m;
}

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json structure_to_json(const StructureFunction& f) {
  json j;
  j["family"] = family_name(f.family());
  j["q"] = {{"re", f.q().real()}, {"im", f.q().imag()}};
  j["K"] = f.K();
  j["omegas"] = f.omegas();
  j["M"] = f.M();
  j["expr"] = f.ast() ? expr_to_string(f.ast()) : "";
  if (f.family() == StructureFamily::custom_expr) {
    j["params"] = f.params();
    j["grid_validated"] = f.grid_validated();
    if (f.guard_ast()) j["guard"] = expr_to_string(f.guard_ast());
  }
  return j;
}

inline StructureFunction structure_from_json(const json& j) {
  const std::string fam = j.at("family").get<std::string>();
  const cplx q{j.at("q").at("re").get<double>(), j.at("q").at("im").get<double>()};
  if (fam == "harmonic") return StructureFunction::harmonic();
  if (fam == "isos") return StructureFunction::isos();
  if (fam == "q_symmetric") return StructureFunction::q_symmetric(q);
  if (fam == "q_abs") return StructureFunction::q_abs(q);
  if (fam == "q_abs_shift") return StructureFunction::q_abs_shift(q, j.at("K").get<double>());
  if (fam == "self_similar")
    return StructureFunction::self_similar(q.real(), j.at("omegas").get<std::vector<double>>());
  if (fam == "custom_expr") {
    std::map<std::string, double> params;
    if (j.contains("params")) params = j.at("params").get<std::map<std::string, double>>();
    ExprPtr ast = parse_expression(j.at("expr").get<std::string>(), {"x"}, params);
    if (j.contains("guard")) {
      ExprPtr guard = parse_expression(j.at("guard").get<std::string>(), {"x"}, params);
      return StructureFunction::custom_guarded(ast, guard);
    }
    const bool validate = !j.contains("grid_validated") || j.at("grid_validated").get<bool>();
    return StructureFunction::custom(ast, params, q, validate);
  }
  throw Error("structure_from_json: unknown family '" + fam + "'");
}

inline json rep_to_json(const Representation& rep) {
  json j;
  j["kind"] = rep_kind_name(rep.kind);
  j["dim"] = rep.dim;
  j["S"] = rep.S;
  j["eta"] = rep.eta;
  j["xi"] = complex_to_json(rep.xi);
  j["theta0"] = rep.theta0;
  j["A"] = matrix_to_json(rep.A);
  j["Adag"] = matrix_to_json(rep.Adag);
  j["numdiag"] = rep.numdiag;
  j["boundary_rows"] = rep.boundary_rows;
  j["structure"] = structure_to_json(rep.structure);
  if (rep.kind == RepKind::multiphoton_sector || rep.kind == RepKind::two_mode) {
    j["m"] = rep.mult_m;
    j["i"] = rep.sector_i;
  }
  if (rep.kind == RepKind::two_mode) {
    j["n"] = rep.mult_n;
    j["j"] = rep.sector_j;
    j["numdiag2"] = rep.numdiag2;
  }
  return j;
}

inline Representation rep_from_json(const json& j) {
  Representation rep;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fock") rep.kind = RepKind::fock;
  else if (kind == "cyclic") rep.kind = RepKind::cyclic;
  else if (kind == "isos") rep.kind = RepKind::isos;
  else if (kind == "multiphoton_sector") rep.kind = RepKind::multiphoton_sector;
  else if (kind == "two_mode") rep.kind = RepKind::two_mode;
  else throw Error("rep_from_json: unknown kind '" + kind + "'");
  rep.dim = j.at("dim").get<int>();
  rep.S = j.at("S").get<int>();
  rep.eta = j.at("eta").get<double>();
  rep.xi = complex_from_json(j.at("xi"));
  rep.theta0 = j.at("theta0").get<double>();
  rep.A = matrix_from_json(j.at("A"));
  rep.Adag = matrix_from_json(j.at("Adag"));
  rep.numdiag = j.at("numdiag").get<std::vector<double>>();
  rep.boundary_rows = j.at("boundary_rows").get<std::vector<int>>();
  rep.structure = structure_from_json(j.at("structure"));
  if (j.contains("m")) rep.mult_m = j.at("m").get<int>();
  if (j.contains("i")) rep.sector_i = j.at("i").get<int>();
  if (j.contains("n")) rep.mult_n = j.at("n").get<int>();
  if (j.contains("j")) rep.sector_j = j.at("j").get<int>();
  if (j.contains("numdiag2")) rep.numdiag2 = j.at("numdiag2").get<std::vector<double>>();
  return rep;
}

// IsosSpace shares the representation schema with extra intertwiner blocks.
inline json isos_to_json(const IsosSpace& sp) {
  json j = rep_to_json(isos_as_representation(sp));
  j["B"] = matrix_to_json(sp.B);
  j["Bdag"] = matrix_to_json(sp.Bdag);
  return j;
}

// Coupling form: {"modes":1|2, "f":"<expr in N or N1,N2>", "m":.., "n":.., "i":.., "j":..}
inline json coupling_to_json(const CouplingSpec& spec) {
  json j;
  j["modes"] = spec.mode_count;
  j["f"] = expr_to_string(spec.f);
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["i"] = spec.i;
  j["j"] = spec.j;
  return j;
}

inline CouplingSpec coupling_from_json(const json& j) {
  const int modes = j.at("modes").get<int>();
  const std::string f = j.at("f").get<std::string>();
  if (modes == 1) return make_coupling(f, j.at("m").get<int>(), j.at("i").get<int>());
  if (modes == 2)
    return make_two_mode_coupling(f, j.at("m").get<int>(), j.at("n").get<int>(),
                                  j.at("i").get<int>(), j.at("j").get<int>());
  throw Error("coupling_from_json: modes must be 1 or 2");
}

inline json state_to_json(const StateVector& st) {
  json j;
  j["dim"] = st.dim;
  json coeffs = json::array();
  for (const auto& c : st.coeffs) coeffs.push_back(json::array({c.real(), c.imag()}));
  j["coeffs"] = std::move(coeffs);
  j["provenance"] = {{"kind", st.kind},
                     {"alpha", complex_to_json(st.alpha)},
                     {"z", complex_to_json(st.z)},
                     {"structure", structure_to_json(st.structure)}};
  return j;
}

inline StateVector state_from_json(const json& j) {
  StateVector st;
  st.dim = j.at("dim").get<int>();
  for (const auto& c : j.at("coeffs"))
    st.coeffs.push_back(cplx{c[0].get<double>(), c[1].get<double>()});
  if (static_cast<int>(st.coeffs.size()) != st.dim)
    throw Error("state_from_json: coeffs length does not match dim");
  const auto& prov = j.at("provenance");
  st.kind = prov.at("kind").get<std::string>();
  st.alpha = complex_from_json(prov.at("alpha"));
  st.z = complex_from_json(prov.at("z"));
  st.structure = structure_from_json(prov.at("structure"));
  st.normalized = std::abs(st.norm() - 1.0) < 1e-12;
  return st;
}

inline json phase_to_json(const PhaseDecomposition& pd) {
  json j;
  j["S"] = pd.S;
  j["theta0"] = pd.theta0;
  j["thetas"] = pd.thetas;
  j["Phi"] = matrix_to_json(pd.Phi);
  j["expPhi"] = matrix_to_json(pd.expPhi);
  j["phase_states"] = matrix_to_json(pd.phase_states);
  return j;
}

inline json report_to_json(const CheckReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"name", e.name},
                       {"residual", e.residual},
                       {"tolerance", e.tolerance},
                       {"comparison", e.direction == CheckDirection::at_most ? "at_most" : "at_least"},
                       {"pass", e.pass},
                       {"boundary_excluded", e.boundary_excluded}});
  }
  return json{{"entries", std::move(entries)}};
}

}  // namespace gdo
