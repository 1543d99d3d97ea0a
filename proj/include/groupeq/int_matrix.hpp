#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/integer.hpp"

namespace groupeq {

/// Dense rectangular matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& r : init) {
      if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
      for (long long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  /// "[[2,-3,0],[0,0,1]]"
  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      out += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) out += (j ? "," : "") + (*this)(i, j).str();
      out += "]";
    }
    return out + "]";
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// U A V = D with U, V unimodular and D diagonal with d1 | d2 | ..., all d_i >= 0.
struct SmithDecomposition {
  IntMatrix u, d, v;

  std::vector<Integer> invariant_factors() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
  }
  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& f : invariant_factors()) r += f != 0;
    return r;
  }
};

/// Smith normal form by repeated gcd-driven row/column reduction. The pivot is the
/// nonzero entry of least absolute value in the remaining block, lowest row then lowest
/// column on ties.
inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a, u = IntMatrix::identity(m), v = IntMatrix::identity(n);
  using boost::multiprecision::abs;

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // pivot selection
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 && (!found || abs(d(i, j)) < best)) {
            found = true;
            best = abs(d(i, j));
            pi = i;
            pj = j;
          }
      if (!found) return {std::move(u), std::move(d), std::move(v)};
      d.swap_rows(t, pi);
      u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      v.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Integer q = d(i, t) / d(t, t);
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Integer q = d(t, j) / d(t, t);
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility of the remaining block
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(u), std::move(d), std::move(v)};
}

/// Fraction-free (Bareiss) elimination; returns the rank and, for square input, the determinant.
struct BareissResult {
  std::size_t rank = 0;
  Integer determinant = 0;
  std::vector<std::size_t> pivot_columns;
};

inline BareissResult bareiss(IntMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Integer prev = 1;
  int sign = 1;
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      m.swap_rows(piv, r);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) m(i, j) = (m(i, j) * m(r, c) - m(i, c) * m(r, j)) / prev;
      m(i, c) = 0;
    }
    prev = m(r, c);
    pivots.push_back(c);
    ++r;
  }
  BareissResult res;
  res.rank = r;
  res.pivot_columns = std::move(pivots);
  if (rows == cols) res.determinant = r == rows ? (rows == 0 ? Integer(1) : Integer(sign) * prev) : Integer(0);
  return res;
}

inline std::size_t rank_rational(const IntMatrix& a) { return bareiss(a).rank; }

inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionError("determinant of a non-square matrix");
  return bareiss(a).determinant;
}

/// Row echelon data over the p-element field.
struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
  std::int64_t determinant = 0;  // square input only
};

inline RankProfile rank_profile_mod_p(const IntMatrix& a, std::uint64_t p) {
  require_prime(p);
  const auto mod = static_cast<std::int64_t>(p);
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::int64_t> m(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i * cols + j] = floor_mod(a(i, j), mod);
  RankProfile out;
  std::int64_t det = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[r * cols + j]);
      det = floor_mod(-det, mod);
    }
    det = det * m[r * cols + c] % mod;
    std::int64_t inv = mod_inverse(m[r * cols + c], mod);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i * cols + c] == 0) continue;
      std::int64_t f = (m[i * cols + c] * inv) % mod;
      for (std::size_t j = 0; j < cols; ++j) m[i * cols + j] = floor_mod(m[i * cols + j] - f * m[r * cols + j], mod);
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rank = r;
  if (rows == cols) out.determinant = r == rows ? det : 0;
  return out;
}

/// Rank over the p-element field.
inline std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p) { return rank_profile_mod_p(a, p).rank; }

inline std::int64_t determinant_mod_p(const IntMatrix& a, std::uint64_t p) {
  if (a.rows() != a.cols()) throw PreconditionError("determinant of a non-square matrix");
  return rank_profile_mod_p(a, p).determinant;
}

/// The submatrix on the given rows and columns.
inline IntMatrix submatrix(const IntMatrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  IntMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

}  // namespace groupeq
