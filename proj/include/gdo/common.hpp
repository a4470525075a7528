#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gdo {

using cplx = std::complex<double>;

// Thrown on precondition violations and malformed inputs. The CLI maps this
// to exit code 1. Numerical check failures are never thrown: they end up as
// failing entries in a CheckReport (exit code 2).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Rounding slack for "nonnegative" and "real-valued" requirements.
inline constexpr double kNonnegTol = 1e-12;
inline constexpr double kRealTol = 1e-12;

// Default tolerance ladder: construction identities vs. derived products
// (matrix powers accumulate rounding).
inline constexpr double kTolConstruction = 1e-12;
inline constexpr double kTolDerived = 1e-10;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace gdo
