// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qchan/errors.hpp"

namespace qchan {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/** Absolute entrywise tolerance used by structural checks. */
struct Tolerance {
  double atol = 1e-10;

  constexpr Tolerance() = default;
  explicit Tolerance(double a) : atol(a) {
    if (!(a >= 0.0)) throw DomainError("tolerance must be non-negative");
  }
};

/** Tolerance for accepting density matrices, e.g. tomographic estimates. */
inline const Tolerance kDensityTol{1e-8};

/**
 * Dense complex matrix stored row-major.
 *
 * Column vectors are n x 1 matrices. All dimensions used by the library are
 * at most 64 x 64, so there is no sparse or blocked path.
 */
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0)
      throw ShapeError("matrix dimensions must be positive");
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0)
      throw ShapeError("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
      throw ShapeError(
          "entry count " + std::to_string(data_.size()) + " does not match " +
          std::to_string(rows) + "x" + std::to_string(cols));
  }

  /** Builds a matrix from nested rows; ragged input is rejected. */
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    if (rows_ == 0) throw ShapeError("matrix must have at least one row");
    cols_ = rows.begin()->size();
    if (cols_ == 0) throw ShapeError("matrix must have at least one column");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("ragged matrix rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<cplx> d) {
    return diagonal(std::span<const cplx>(d.begin(), d.size()));
  }

  /** Unit column vector e_k of length n. */
  static ComplexMatrix basis_vector(std::size_t n, std::size_t k) {
    ComplexMatrix v(n, 1);
    v(k, 0) = 1.0;
    return v;
  }

  /** |v><v| for a column vector v. */
  static ComplexMatrix projector(const ComplexMatrix& v) {
    return v * v.adjoint();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool is_column() const { return cols_ == 1; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  ComplexMatrix conj() const {
    ComplexMatrix out = *this;
    for (auto& x : out.data_) x = std::conj(x);
    return out;
  }

  cplx trace() const {
    require_square("trace");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  /** Euclidean norm of all entries (Frobenius norm). */
  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  /** (A + A^dagger) / 2. */
  ComplexMatrix hermitian_part() const {
    require_square("hermitian_part");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        out(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
    return out;
  }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
      throw DimensionError("block exceeds matrix bounds");
    ComplexMatrix out(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    return out;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same(o, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same(o, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  ComplexMatrix& operator/=(cplx s) {
    for (auto& x : data_) x /= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) {
    return a *= cplx(s);
  }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) {
    return a *= cplx(s);
  }
  friend ComplexMatrix operator/(ComplexMatrix a, cplx s) { return a /= s; }
  friend ComplexMatrix operator/(ComplexMatrix a, double s) {
    return a /= cplx(s);
  }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= cplx(-1.0); }

  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product: " + a.shape_string() + " * " +
                           b.shape_string());
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0)) continue;
        const cplx* brow = &b.data_[k * b.cols_];
        cplx* orow = &out.data_[i * out.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
      }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  std::string shape_string() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_square(const char* what) const {
    if (!is_square())
      throw ShapeError(std::string(what) + " requires a square matrix, got " +
                       shape_string());
  }
  void require_same(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError(std::string("operator") + op + ": " +
                           shape_string() + " vs " + o.shape_string());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/** Largest entrywise modulus of a - b. */
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: " + a.shape_string() + " vs " +
                         b.shape_string());
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                         Tolerance tol = {}) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         max_abs_diff(a, b) <= tol.atol;
}

/**
 * Kronecker product. Entry (i1*b.rows + i2, j1*b.cols + j2) is
 * a(i1, j1) * b(i2, j2).
 */
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      const cplx s = a(i1, j1);
      if (s == cplx(0.0)) continue;
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
          out(i1 * b.rows() + i2, j1 * b.cols() + j2) = s * b(i2, j2);
    }
  return out;
}

inline ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) throw ArityError("kron of an empty factor list");
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

namespace detail {

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

// Mixed-radix digits of `index` for subsystem dimensions `dims`, most
// significant subsystem first.
inline void digits_of(std::size_t index, std::span<const std::size_t> dims,
                      std::span<std::size_t> out) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

}  // namespace detail

/**
 * Reduced matrix over the subsystems in `keep` (in increasing order).
 *
 * Subsystem 0 is the leftmost Kronecker factor. `keep` may be empty, in
 * which case the result is the 1x1 matrix holding the trace.
 */
inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   std::span<const std::size_t> dims,
                                   std::vector<std::size_t> keep) {
  if (!m.is_square())
    throw ShapeError("partial_trace requires a square matrix");
  for (auto d : dims)
    if (d == 0) throw DimensionError("subsystem dimension must be positive");
  if (detail::product(dims) != m.rows())
    throw DimensionError("subsystem dimensions multiply to " +
                         std::to_string(detail::product(dims)) +
                         " but matrix is " + m.shape_string());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto k : keep)
    if (k >= dims.size()) throw DimensionError("kept subsystem out of range");

  std::vector<std::size_t> kept_dims;
  for (auto k : keep) kept_dims.push_back(dims[k]);
  const std::size_t out_dim = detail::product(kept_dims);
  ComplexMatrix out(out_dim, out_dim);

  std::vector<bool> is_kept(dims.size(), false);
  for (auto k : keep) is_kept[k] = true;

  const std::size_t n = m.rows();
  std::vector<std::size_t> dr(dims.size()), dc(dims.size());
  for (std::size_t r = 0; r < n; ++r) {
    detail::digits_of(r, dims, dr);
    for (std::size_t c = 0; c < n; ++c) {
      detail::digits_of(c, dims, dc);
      bool diagonal_on_traced = true;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (!is_kept[k] && dr[k] != dc[k]) {
          diagonal_on_traced = false;
          break;
        }
      if (!diagonal_on_traced) continue;
      std::size_t orow = 0, ocol = 0;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (is_kept[k]) {
          orow = orow * dims[k] + dr[k];
          ocol = ocol * dims[k] + dc[k];
        }
      out(orow, ocol) += m(r, c);
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   std::initializer_list<std::size_t> dims,
                                   std::initializer_list<std::size_t> keep) {
  std::vector<std::size_t> d(dims);
  return partial_trace(m, d, std::vector<std::size_t>(keep));
}

/** Hermiticity defect max |m - m^dagger|; throws for non-square input. */
inline double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw ShapeError("Hermiticity needs a square matrix");
  double d = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      d = std::max(d, std::abs(m(r, c) - std::conj(m(c, r))));
  return d;
}

inline bool is_hermitian(const ComplexMatrix& m, Tolerance tol = {}) {
  return m.is_square() && hermiticity_defect(m) <= tol.atol;
}

/** Spectral decomposition of a Hermitian matrix. */
struct EigenSystem {
  std::vector<double> values;  ///< descending
  ComplexMatrix vectors;       ///< column k belongs to values[k]
};

/**
 * Cyclic complex Jacobi eigensolver.
 *
 * Only the Hermitian part of `m` is used. Eigenvalues are returned in
 * descending order; ties keep the Jacobi column order, which is
 * deterministic for a given input.
 */
inline EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square())
    throw ShapeError("hermitian_eig requires a square matrix, got " +
                     m.shape_string());
  const std::size_t n = m.rows();
  ComplexMatrix a = m.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale = a.max_abs();
  if (scale == 0.0) scale = 1.0;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale * static_cast<double>(n)) break;

    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const cplx phase = apq / mag;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = I except G_pp = G_qq = c, G_pq = s*phase, G_qp = -s*conj(phase);
        // a <- G^dagger a G, v <- v G.
        const cplx gpq = s * phase;
        const cplx gqp = -s * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * gqp;
          a(k, q) = akp * gpq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * c;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });
  EigenSystem es{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) es.vectors(r, k) = v(r, order[k]);
  }
  return es;
}

/** V diag(f(lambda)) V^dagger for a Hermitian matrix. */
template <typename F>
ComplexMatrix hermitian_function(const EigenSystem& es, F&& f) {
  const std::size_t n = es.values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(es.values[k]);
    if (w == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const cplx vr = es.vectors(r, k) * w;
      for (std::size_t c = 0; c < n; ++c)
        out(r, c) += vr * std::conj(es.vectors(c, k));
    }
  }
  return out;
}

inline bool is_psd(const ComplexMatrix& m, Tolerance tol = {}) {
  if (!is_hermitian(m, tol)) return false;
  const auto es = hermitian_eig(m);
  return es.values.back() >= -tol.atol;
}

/**
 * Principal square root of a positive semidefinite matrix.
 *
 * Eigenvalues in [-tol, 0) are clamped to zero.
 */
inline ComplexMatrix sqrtm_psd(const ComplexMatrix& m, Tolerance tol = {}) {
  if (!m.is_square())
    throw ShapeError("sqrtm_psd requires a square matrix, got " +
                     m.shape_string());
  if (!is_hermitian(m, tol))
    throw ShapeError("sqrtm_psd requires a Hermitian matrix (defect " +
                     std::to_string(hermiticity_defect(m)) + ")");
  const auto es = hermitian_eig(m);
  if (es.values.back() < -tol.atol)
    throw NotPsdError("sqrtm_psd: eigenvalue " +
                      std::to_string(es.values.back()) + " below -tolerance");
  return hermitian_function(es, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

inline bool is_unitary(const ComplexMatrix& m, Tolerance tol = {}) {
  if (!m.is_square()) return false;
  return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) <=
         tol.atol;
}

/**
 * Solves a x = b by Gaussian elimination with partial pivoting.
 * `b` may have several right-hand-side columns.
 */
inline ComplexMatrix solve(ComplexMatrix a, ComplexMatrix b) {
  if (!a.is_square()) throw ShapeError("solve requires a square system");
  if (b.rows() != a.rows())
    throw DimensionError("solve: right-hand side has wrong row count");
  const std::size_t n = a.rows();
  const double scale = std::max(a.max_abs(), 1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= 1e-14 * scale)
      throw DomainError("solve: singular system");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(col, c), b(piv, c));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      if (f == cplx(0.0)) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  ComplexMatrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t r = n; r-- > 0;) {
      cplx s = b(r, c);
      for (std::size_t k = r + 1; k < n; ++k) s -= a(r, k) * x(k, c);
      x(r, c) = s / a(r, r);
    }
  return x;
}

/**
 * Compares two matrices modulo a global phase: finds the phase from the
 * largest entry of `b` and checks max |a - e^{i phi} b| <= tol.
 */
inline bool equal_up_to_global_phase(const ComplexMatrix& a,
                                     const ComplexMatrix& b,
                                     Tolerance tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  auto da = a.data();
  auto db = b.data();
  std::size_t best = 0;
  for (std::size_t i = 1; i < db.size(); ++i)
    if (std::abs(db[i]) > std::abs(db[best])) best = i;
  if (std::abs(db[best]) == 0.0) return a.max_abs() <= tol.atol;
  if (std::abs(da[best]) == 0.0) return false;
  const cplx phase = (da[best] / db[best]) / std::abs(da[best] / db[best]);
  double m = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i)
    m = std::max(m, std::abs(da[i] - phase * db[i]));
  return m <= tol.atol;
}

/**
 * Reorders the qubits of a 2^n x 2^n operator. Qubit 0 is the most
 * significant bit. Qubit k of the input becomes qubit perm[k] of the
 * output.
 */
inline ComplexMatrix permute_qubits(const ComplexMatrix& m,
                                    std::span<const std::size_t> perm) {
  const std::size_t n = perm.size();
  const std::size_t dim = std::size_t{1} << n;
  if (m.rows() != dim || m.cols() != dim)
    throw DimensionError("permute_qubits: matrix is not 2^n x 2^n");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw DomainError("permute_qubits: not a permutation");
    seen[p] = true;
  }
  auto map = [&](std::size_t x) {
    std::size_t y = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bit = (x >> (n - 1 - k)) & 1U;
      y |= bit << (n - 1 - perm[k]);
    }
    return y;
  };
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) out(map(r), map(c)) = m(r, c);
  return out;
}

inline ComplexMatrix permute_qubits(const ComplexMatrix& m,
                                    std::initializer_list<std::size_t> perm) {
  return permute_qubits(m, std::span<const std::size_t>(perm.begin(), perm.size()));
}

/** Throws DomainError unless `rho` is Hermitian, PSD and of unit trace. */
inline void require_density(const ComplexMatrix& rho, const char* what,
                            Tolerance tol = kDensityTol) {
  if (!rho.is_square())
    throw DomainError(std::string(what) + ": density matrix must be square");
  if (hermiticity_defect(rho) > tol.atol)
    throw DomainError(std::string(what) + ": density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol.atol)
    throw DomainError(std::string(what) + ": density matrix trace is not 1");
  if (hermitian_eig(rho).values.back() < -tol.atol)
    throw DomainError(std::string(what) +
                      ": density matrix has a negative eigenvalue");
}

/** Common small matrices. */
namespace mats {

inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return {{0.0, -kI}, {kI, 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
inline ComplexMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{h, h}, {h, -h}};
}

/** SWAP on C^d (x) C^d: |i>|j> -> |j>|i>. */
inline ComplexMatrix swap(std::size_t d) {
  ComplexMatrix s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return s;
}

/** Matrix unit E_{ij} = |i><j| of size d. */
inline ComplexMatrix unit(std::size_t d, std::size_t i, std::size_t j) {
  ComplexMatrix e(d, d);
  e(i, j) = 1.0;
  return e;
}

}  // namespace mats

}  // namespace qchan
