#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gdo/common.hpp"

namespace gdo {

// Dense row-major complex matrix. Everything in this header is a naive
// desk-scale kernel: the sizes that occur in practice are a few dozen up to
// a few hundred, so O(n^3) loops and full storage are fine.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (rows <= 0 || cols <= 0) throw Error("ComplexMatrix: dimensions must be positive");
  }

  static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int k = 0; k < n; ++k) m(k, k) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int k = 0; k < m.rows(); ++k) m(k, k) = d[static_cast<std::size_t>(k)];
    return m;
  }

  static ComplexMatrix diagonal_real(const std::vector<double>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int k = 0; k < m.rows(); ++k) m(k, k) = d[static_cast<std::size_t>(k)];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(int r, int c) { return data_[index(r, c)]; }
  const cplx& operator()(int r, int c) const { return data_[index(r, c)]; }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  bool same_shape(const ComplexMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

  bool all_finite() const {
    for (const auto& v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (!same_shape(o)) throw Error(std::string("ComplexMatrix: shape mismatch in ") + op);
  }

  int rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

// All norms in reports are max-absolute-entry norms.
inline double max_abs(const ComplexMatrix& m) {
  double r = 0.0;
  for (const auto& v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matmul: inner dimensions disagree");
  ComplexMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
  return c;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b) - matmul(b, a);
}

inline ComplexMatrix matpow(const ComplexMatrix& a, int p) {
  if (!a.square()) throw Error("matpow: matrix must be square");
  if (p < 0) throw Error("matpow: negative power");
  ComplexMatrix r = ComplexMatrix::identity(a.rows());
  for (int k = 0; k < p; ++k) r = matmul(r, a);
  return r;
}

// Truncated exponential sum_{k=0}^{terms} a^k / k!. For a strictly raising
// (or lowering) matrix the series terminates, so terms = dim gives the exact
// exponential.
inline ComplexMatrix matexp_truncated(const ComplexMatrix& a, int terms) {
  if (!a.square()) throw Error("matexp_truncated: matrix must be square");
  if (terms < 1) throw Error("matexp_truncated: terms must be >= 1");
  ComplexMatrix result = ComplexMatrix::identity(a.rows());
  ComplexMatrix term = ComplexMatrix::identity(a.rows());
  for (int k = 1; k <= terms; ++k) {
    term = matmul(term, a);
    term *= cplx{1.0 / static_cast<double>(k), 0.0};
    if (!term.all_finite())
      throw Error("matexp_truncated: non-finite intermediate at term " + std::to_string(k));
    result += term;
  }
  return result;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c)
          k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
    }
  return k;
}

// Matrix * column vector.
inline std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& v) {
  if (m.cols() != static_cast<int>(v.size())) throw Error("matvec: dimension mismatch");
  std::vector<cplx> r(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    cplx s{};
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

inline double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// <a|b> with the left argument conjugated.
inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw Error("dot: length mismatch");
  cplx s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

// Cyclic Jacobi diagonalization for hermitian matrices. Each rotation
// diagonalizes one 2x2 principal block exactly; sweeps repeat until the
// off-diagonal mass is at rounding level.
inline EigenResult hermitian_eigen(const ComplexMatrix& h, int max_sweeps = 100) {
  if (!h.square()) throw Error("hermitian_eigen: matrix must be square");
  const int n = h.rows();
  if (max_abs(h - adjoint(h)) >= 1e-10)
    throw Error("hermitian_eigen: input is not hermitian (max deviation >= 1e-10)");

  ComplexMatrix a = h;
  // Symmetrize so rounding junk in the input cannot bias the iteration.
  for (int p = 0; p < n; ++p) {
    a(p, p) = cplx{a(p, p).real(), 0.0};
    for (int q = p + 1; q < n; ++q) {
      const cplx mean = 0.5 * (a(p, q) + std::conj(a(q, p)));
      a(p, q) = mean;
      a(q, p) = std::conj(mean);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, max_abs(a));
  const double stop = 1e-14 * scale;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        const double babs = std::abs(b);
        if (babs <= 0.25 * stop) continue;
        // Stable rotation angle: tan(2theta) = 2|b| / (aqq - app), solved
        // through the tangent to avoid cancellation when |b| is tiny
        // relative to the diagonal gap.
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * babs);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const cplx u = b / babs;  // phase of the pivot
        const cplx su = s * u;

        // A <- J^dag A J with J[p][p]=c, J[p][q]=s u, J[q][p]=-s conj(u), J[q][q]=c.
        for (int k = 0; k < n; ++k) {
          const cplx rp = a(p, k), rq = a(q, k);
          a(p, k) = c * rp - su * rq;
          a(q, k) = s * std::conj(u) * rp + c * rq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx cp = a(k, p), cq = a(k, q);
          a(k, p) = c * cp - s * std::conj(u) * cq;
          a(k, q) = su * cp + c * cq;
          const cplx vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp - s * std::conj(u) * vq;
          v(k, q) = su * vp + c * vq;
        }
        a(p, p) = cplx{a(p, p).real(), 0.0};
        a(q, q) = cplx{a(q, q).real(), 0.0};
        a(p, q) = cplx{};
        a(q, p) = cplx{};
      }
    }
  }
  if (sweep >= max_sweeps)
    throw Error("hermitian_eigen: did not converge within " + std::to_string(max_sweeps) +
                " sweeps");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

  EigenResult res;
  res.eigenvalues.resize(static_cast<std::size_t>(n));
  res.eigenvectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.eigenvalues[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)],
                                                     order[static_cast<std::size_t>(k)]).real();
    for (int r = 0; r < n; ++r)
      res.eigenvectors(r, k) = v(r, order[static_cast<std::size_t>(k)]);
  }
  return res;
}

}  // namespace gdo
