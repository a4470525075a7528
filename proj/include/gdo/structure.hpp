#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gdo/common.hpp"
#include "gdo/expr.hpp"

namespace gdo {

// Built-in structure-function families plus user expressions.
//
//   harmonic      F(x) = x
//   q_symmetric   F(x) = [x] = (q^x - q^{-x})/(q - q^{-1})   (signed bracket)
//   q_abs         F(q^x) = |[x]|
//   q_abs_shift   F(q^x) = |[x] + K|
//   isos          F(x) = (x-1)^2 x
//   self_similar  F(q^x) = prod_{n=0}^{M} (q^{2x} + omega_n),  q real
//   custom_expr   parsed expression in x (and q / named constants)
enum class StructureFamily {
  harmonic,
  q_symmetric,
  q_abs,
  q_abs_shift,
  isos,
  self_similar,
  custom_expr,
};

// Whether F consumes its argument directly (GDO, F(N)) or through the
// exponent of the deformation parameter (q-GDO, F(q^N)). Evaluation always
// takes the exponent x; the tag records which algebra the family presents.
enum class StructureArgKind { gdo, q_gdo };

inline const char* family_name(StructureFamily f) {
  switch (f) {
    case StructureFamily::harmonic: return "harmonic";
    case StructureFamily::q_symmetric: return "q_symmetric";
    case StructureFamily::q_abs: return "q_abs";
    case StructureFamily::q_abs_shift: return "q_abs_shift";
    case StructureFamily::isos: return "isos";
    case StructureFamily::self_similar: return "self_similar";
    case StructureFamily::custom_expr: return "custom_expr";
  }
  return "?";
}

namespace detail {

// Symmetric q-bracket [x], kept real by construction. For unit-modulus
// q = e^{i phi} the bracket is sin(phi x)/sin(phi); evaluating it through
// complex powers would leave rounding-level imaginary parts behind.
inline double bracket_real(cplx q, double x) {
  const double qa = std::abs(q);
  if (std::abs(q.imag()) < 1e-14 && q.real() > 0.0) {
    const double qr = q.real();
    if (std::abs(qr - 1.0) < 1e-15) return x;
    return (std::pow(qr, x) - std::pow(qr, -x)) / (qr - 1.0 / qr);
  }
  if (std::abs(qa - 1.0) < 1e-12) {
    const double phi = std::arg(q);
    if (std::abs(std::sin(phi)) < 1e-300) return x;
    return std::sin(phi * x) / std::sin(phi);
  }
  throw Error("q-bracket: q must be real positive or unit modulus to evaluate real");
}

}  // namespace detail

class StructureFunction {
 public:
  StructureFunction() = default;

  static StructureFunction harmonic() { return StructureFunction(StructureFamily::harmonic, StructureArgKind::gdo); }

  static StructureFunction isos() { return StructureFunction(StructureFamily::isos, StructureArgKind::gdo); }

  static StructureFunction q_symmetric(cplx q) {
    StructureFunction f(StructureFamily::q_symmetric, StructureArgKind::q_gdo);
    f.q_ = validate_q(q);
    return f;
  }

  static StructureFunction q_abs(cplx q) {
    StructureFunction f(StructureFamily::q_abs, StructureArgKind::q_gdo);
    f.q_ = validate_q(q);
    return f;
  }

  static StructureFunction q_abs_shift(cplx q, double K) {
    StructureFunction f(StructureFamily::q_abs_shift, StructureArgKind::q_gdo);
    f.q_ = validate_q(q);
    f.K_ = K;
    return f;
  }

  static StructureFunction self_similar(double q, std::vector<double> omegas) {
    if (q <= 0.0) throw Error("self_similar: q must be real positive");
    if (omegas.empty()) throw Error("self_similar: at least one omega required");
    for (double w : omegas)
      if (w <= 0.0) throw Error("self_similar: omegas must be positive");
    StructureFunction f(StructureFamily::self_similar, StructureArgKind::q_gdo);
    f.q_ = cplx{q, 0.0};
    f.omegas_ = std::move(omegas);
    return f;
  }

  // Custom expression, already parsed. grid_validated records whether the
  // nonnegativity grid was run (user expressions) or deliberately skipped
  // (induced multiphoton functions, which are only meaningful at integers).
  static StructureFunction custom(ExprPtr ast, std::map<std::string, double> params, cplx q,
                                  bool run_grid_validation) {
    StructureFunction f(StructureFamily::custom_expr, StructureArgKind::gdo);
    f.ast_ = std::move(ast);
    f.params_ = std::move(params);
    f.q_ = q;
    f.grid_validated_ = run_grid_validation;
    if (run_grid_validation) f.validate_grid();
    return f;
  }

  // Guarded variant for induced structure functions F = guard * weight where
  // the guard factor (a product of photon numbers) vanishes exactly at the
  // sector vacuum while the weight may be singular there: a zero guard
  // short-circuits the evaluation to 0.
  static StructureFunction custom_guarded(ExprPtr ast, ExprPtr guard) {
    StructureFunction f(StructureFamily::custom_expr, StructureArgKind::gdo);
    f.ast_ = std::move(ast);
    f.guard_ast_ = std::move(guard);
    f.grid_validated_ = false;
    return f;
  }

  StructureFamily family() const { return family_; }
  StructureArgKind arg_kind() const { return arg_kind_; }
  cplx q() const { return q_; }
  double K() const { return K_; }
  const std::vector<double>& omegas() const { return omegas_; }
  int M() const { return static_cast<int>(omegas_.size()) - 1; }
  const ExprPtr& ast() const { return ast_; }
  const ExprPtr& guard_ast() const { return guard_ast_; }
  const std::map<std::string, double>& params() const { return params_; }
  bool grid_validated() const { return grid_validated_; }

  bool is_root_of_unity(int S) const {
    return std::abs(std::pow(q_, S + 1) - cplx{1.0, 0.0}) < 1e-9;
  }

  // Unchecked evaluation: real part plus the imaginary magnitude, so the
  // admissibility checker can report signed and near-complex values instead
  // of throwing.
  std::pair<double, double> raw_eval(double x) const {
    switch (family_) {
      case StructureFamily::harmonic: return {x, 0.0};
      case StructureFamily::isos: return {(x - 1.0) * (x - 1.0) * x, 0.0};
      case StructureFamily::q_symmetric: return {detail::bracket_real(q_, x), 0.0};
      case StructureFamily::q_abs: return {std::abs(detail::bracket_real(q_, x)), 0.0};
      case StructureFamily::q_abs_shift:
        return {std::abs(detail::bracket_real(q_, x) + K_), 0.0};
      case StructureFamily::self_similar: {
        double p = 1.0;
        const double q2x = std::pow(q_.real(), 2.0 * x);
        for (double w : omegas_) p *= q2x + w;
        return {p, 0.0};
      }
      case StructureFamily::custom_expr: {
        ExprEnv env;
        env.q = q_;
        env.values["x"] = cplx{x, 0.0};
        env.values["q"] = q_;
        for (const auto& [k, v] : params_) env.values[k] = cplx{v, 0.0};
        if (guard_ast_ && std::abs(expr_eval(guard_ast_, env)) < 1e-300) return {0.0, 0.0};
        const cplx r = expr_eval(ast_, env);
        return {r.real(), std::abs(r.imag())};
      }
    }
    throw Error("StructureFunction: corrupt family tag");
  }

  // Checked evaluation: finite, real within tolerance, nonnegative within
  // tolerance; negatives are clamped to zero so downstream sqrt stays clean.
  double eval(double x) const {
    if (!std::isfinite(x)) throw Error("eval_structure: argument must be finite");
    const auto [re, im] = raw_eval(x);
    if (!std::isfinite(re) || !std::isfinite(im))
      throw Error("eval_structure: non-finite value at x = " + std::to_string(x));
    if (im > kRealTol)
      throw Error("eval_structure: complex value (imag = " + std::to_string(im) +
                  ") at x = " + std::to_string(x));
    if (re < -kNonnegTol)
      throw Error("eval_structure: negative value " + std::to_string(re) +
                  " at x = " + std::to_string(x));
    return re < 0.0 ? 0.0 : re;
  }

  // [[F(n)]]! = F(n) F(n-1) ... F(1), with [[F(0)]]! = 1.
  double factorial(int n) const {
    if (n < 0) throw Error("structure_factorial: n must be >= 0");
    double p = 1.0;
    for (int k = 1; k <= n; ++k) {
      p *= eval(static_cast<double>(k));
      if (!std::isfinite(p))
        throw Error("structure_factorial: overflow at n = " + std::to_string(k));
    }
    return p;
  }

  // [[F(n)]]!! descends in steps of two: even n ends at F(2), odd n at F(1);
  // [[F(0)]]!! = [[F(-1)]]!! = 1.
  double double_factorial(int n) const {
    if (n < -1) throw Error("structure_double_factorial: n must be >= -1");
    double p = 1.0;
    for (int k = n; k >= 1; k -= 2) {
      p *= eval(static_cast<double>(k));
      if (!std::isfinite(p))
        throw Error("structure_double_factorial: overflow at n = " + std::to_string(k));
    }
    return p;
  }

 private:
  StructureFunction(StructureFamily fam, StructureArgKind kind) : family_(fam), arg_kind_(kind) {}

  static cplx validate_q(cplx q) {
    const bool real_positive = std::abs(q.imag()) < 1e-14 && q.real() > 0.0;
    const bool unit_modulus = std::abs(std::abs(q) - 1.0) < 1e-12;
    if (!real_positive && !unit_modulus)
      throw Error("structure function: q must be real positive or unit modulus "
                  "(evaluation would be complex-valued)");
    return q;
  }

  // Nonnegativity can only be probed, not proven, for arbitrary expressions:
  // validate on a finite grid and let eval() re-check the sign at runtime.
  void validate_grid() const {
    for (int i = 0; i <= 128; ++i) {
      const double x = 0.5 * static_cast<double>(i);
      const auto [re, im] = raw_eval(x);
      if (!std::isfinite(re))
        throw Error("parse_structure: expression is non-finite at x = " + format_grid_point(x));
      if (im > kRealTol)
        throw Error("parse_structure: expression is complex-valued at x = " +
                    format_grid_point(x));
      if (re < -kNonnegTol)
        throw Error("parse_structure: expression is negative at x = " + format_grid_point(x) +
                    " (value " + std::to_string(re) + ")");
    }
  }

  static std::string format_grid_point(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
  }

  StructureFamily family_ = StructureFamily::harmonic;
  StructureArgKind arg_kind_ = StructureArgKind::gdo;
  cplx q_{1.0, 0.0};
  double K_ = 0.0;
  std::vector<double> omegas_;
  ExprPtr ast_;
  ExprPtr guard_ast_;
  std::map<std::string, double> params_;
  bool grid_validated_ = true;
};

// Parses a custom structure function over the variable x. params supplies
// named constants; "q" may be given there as a real deformation parameter.
inline StructureFunction parse_structure(const std::string& expr,
                                         const std::map<std::string, double>& params = {}) {
  ExprPtr ast = parse_expression(expr, {"x"}, params);
  cplx q{1.0, 0.0};
  if (auto it = params.find("q"); it != params.end()) q = cplx{it->second, 0.0};
  return StructureFunction::custom(ast, params, q, /*run_grid_validation=*/true);
}

// Free-function forms of the operations, matching the module surface.
inline double eval_structure(const StructureFunction& f, double x) { return f.eval(x); }
inline double structure_factorial(const StructureFunction& f, int n) { return f.factorial(n); }
inline double structure_double_factorial(const StructureFunction& f, int n) {
  return f.double_factorial(n);
}

}  // namespace gdo
