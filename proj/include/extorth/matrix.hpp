#ifndef EXTORTH_MATRIX_HPP
#define EXTORTH_MATRIX_HPP

#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "extorth/errors.hpp"
#include "extorth/fields.hpp"

namespace extorth {

// Dense matrix over an exact field F (row-major). Zero-row and zero-column
// matrices are legal values; they show up constantly as maps to and from
// zero spaces.
template <class F>
class Matrix {
 public:
  using Elem = typename F::Elem;

  Matrix(F field, int rows, int cols)
      : field_(std::move(field)), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw InvalidShape("negative matrix dimension");
    data_.assign(static_cast<size_t>(rows) * cols, field_.zero());
  }

  static Matrix identity(F field, int n) {
    Matrix m(field, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = m.field_.one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const F& field() const { return field_; }

  Elem& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const Elem& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  bool is_zero() const {
    for (const Elem& e : data_)
      if (!field_.is_zero(e)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    check_same_field(o);
    if (cols_ != o.rows_) throw InvalidShape("matrix product shape mismatch");
    Matrix p(field_, rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int k = 0; k < cols_; ++k) {
        const Elem& a = at(r, k);
        if (field_.is_zero(a)) continue;
        for (int c = 0; c < o.cols_; ++c)
          p.at(r, c) = field_.add(p.at(r, c), field_.mul(a, o.at(k, c)));
      }
    return p;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix s(field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.add(data_[i], o.data_[i]);
    return s;
  }

  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix s(field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.sub(data_[i], o.data_[i]);
    return s;
  }

  Matrix operator-() const {
    Matrix s(field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.neg(data_[i]);
    return s;
  }

  Matrix scaled(const Elem& k) const {
    Matrix s(field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.mul(k, data_[i]);
    return s;
  }

  bool operator==(const Matrix& o) const {
    if (field_ != o.field_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < data_.size(); ++i)
      if (!field_.eq(data_[i], o.data_[i])) return false;
    return true;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix column(int c) const {
    Matrix v(field_, rows_, 1);
    for (int r = 0; r < rows_; ++r) v.at(r, 0) = at(r, c);
    return v;
  }

  Matrix columns(const std::vector<int>& idx) const {
    Matrix v(field_, rows_, static_cast<int>(idx.size()));
    for (int j = 0; j < static_cast<int>(idx.size()); ++j)
      for (int r = 0; r < rows_; ++r) v.at(r, j) = at(r, idx[j]);
    return v;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int r = 0; r < rows_; ++r) {
      s += r ? "; " : "";
      for (int c = 0; c < cols_; ++c) s += (c ? "," : "") + field_.to_string(at(r, c));
    }
    return s + "]";
  }

  void check_same_field(const Matrix& o) const {
    if (field_ != o.field_) throw FieldMismatch("matrices over different fields");
  }

 private:
  void check_same_shape(const Matrix& o) const {
    check_same_field(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidShape("matrix shape mismatch");
  }

  F field_;
  int rows_, cols_;
  std::vector<Elem> data_;
};

template <class F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  a.check_same_field(b);
  if (a.rows() != b.rows()) throw InvalidShape("hstack row mismatch");
  Matrix<F> m(a.field(), a.rows(), a.cols() + b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) m.at(r, c) = a.at(r, c);
    for (int c = 0; c < b.cols(); ++c) m.at(r, a.cols() + c) = b.at(r, c);
  }
  return m;
}

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  a.check_same_field(b);
  if (a.cols() != b.cols()) throw InvalidShape("vstack column mismatch");
  Matrix<F> m(a.field(), a.rows() + b.rows(), a.cols());
  for (int c = 0; c < a.cols(); ++c) {
    for (int r = 0; r < a.rows(); ++r) m.at(r, c) = a.at(r, c);
    for (int r = 0; r < b.rows(); ++r) m.at(a.rows() + r, c) = b.at(r, c);
  }
  return m;
}

template <class F>
struct RrefResult {
  Matrix<F> reduced;
  std::vector<int> pivots;
  int rank = 0;
};

// Plain Gauss-Jordan over the field. Deterministic: pivots are the first
// nonzero entry in each column, columns scanned left to right.
template <class F>
RrefResult<F> rref_gauss_jordan(const Matrix<F>& m) {
  const F& f = m.field();
  Matrix<F> a = m;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int pr = -1;
    for (int i = r; i < a.rows(); ++i)
      if (!f.is_zero(a.at(i, c))) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(pr, j), a.at(r, j));
    typename F::Elem piv_inv = f.inv(a.at(r, c));
    for (int j = c; j < a.cols(); ++j) a.at(r, j) = f.mul(piv_inv, a.at(r, j));
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || f.is_zero(a.at(i, c))) continue;
      typename F::Elem k = a.at(i, c);
      for (int j = c; j < a.cols(); ++j)
        a.at(i, j) = f.sub(a.at(i, j), f.mul(k, a.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  const int rk = static_cast<int>(pivots.size());
  return {std::move(a), std::move(pivots), rk};
}

namespace detail {

// Fraction-free forward elimination (Bareiss) on an integer matrix followed
// by rational back-substitution. Keeps intermediate entries as minors of the
// input instead of reduced fractions, which is much cheaper on the dense
// Hom-system matrices this library produces.
inline RrefResult<RationalField> rref_bareiss(const Matrix<RationalField>& m) {
  const RationalField f = m.field();
  const int rows = m.rows(), cols = m.cols();
  std::vector<std::vector<BigInt>> n(rows, std::vector<BigInt>(cols));
  for (int r = 0; r < rows; ++r) {
    BigInt l = 1;
    for (int c = 0; c < cols; ++c) l = lcm(l, denominator(m.at(r, c)));
    for (int c = 0; c < cols; ++c) n[r][c] = numerator(m.at(r, c) * BigRat(l));
  }
  std::vector<int> pivots;
  BigInt prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (n[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r) n[pr].swap(n[r]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j)
        n[i][j] = (n[r][c] * n[i][j] - n[i][c] * n[r][j]) / prev;
      n[i][c] = 0;
    }
    prev = n[r][c];
    pivots.push_back(c);
    ++r;
  }
  const int rank = static_cast<int>(pivots.size());
  Matrix<RationalField> red(f, rows, cols);
  for (int i = 0; i < rank; ++i)
    for (int j = pivots[i]; j < cols; ++j) red.at(i, j) = BigRat(n[i][j]);
  for (int i = rank - 1; i >= 0; --i) {
    const int pc = pivots[i];
    BigRat inv = f.inv(red.at(i, pc));
    for (int j = pc; j < cols; ++j) red.at(i, j) *= inv;
    for (int i2 = 0; i2 < i; ++i2) {
      BigRat k = red.at(i2, pc);
      if (k == 0) continue;
      for (int j = pc; j < cols; ++j) red.at(i2, j) -= k * red.at(i, j);
    }
  }
  return {std::move(red), std::move(pivots), rank};
}

}  // namespace detail

template <class F>
RrefResult<F> rref(const Matrix<F>& m) {
#ifdef EXTORTH_FORCE_GJ
  return rref_gauss_jordan(m);
#else
  if constexpr (std::is_same_v<F, RationalField>)
    return detail::rref_bareiss(m);
  else
    return rref_gauss_jordan(m);
#endif
}

template <class F>
int rank(const Matrix<F>& m) {
  return rref(m).rank;
}

// Canonical basis of the right null space: one column per free column of the
// rref, ordered by free-column index, free variable set to one.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
  RrefResult<F> rr = rref(m);
  const F& f = m.field();
  std::vector<int> free_cols;
  {
    size_t t = 0;
    for (int c = 0; c < m.cols(); ++c) {
      if (t < rr.pivots.size() && rr.pivots[t] == c)
        ++t;
      else
        free_cols.push_back(c);
    }
  }
  Matrix<F> k(f, m.cols(), static_cast<int>(free_cols.size()));
  for (int j = 0; j < static_cast<int>(free_cols.size()); ++j) {
    int fc = free_cols[j];
    k.at(fc, j) = f.one();
    for (int t = 0; t < rr.rank; ++t) k.at(rr.pivots[t], j) = f.neg(rr.reduced.at(t, fc));
  }
  return k;
}

// Canonical particular solutions of m·X = b, column by column (free
// variables zero). Absent when any column is inconsistent.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& m, const Matrix<F>& b) {
  m.check_same_field(b);
  if (b.rows() != m.rows()) throw InvalidShape("solve: right-hand side row mismatch");
  RrefResult<F> rr = rref(hstack(m, b));
  for (int i : rr.pivots)
    if (i >= m.cols()) return std::nullopt;
  const F& f = m.field();
  Matrix<F> x(f, m.cols(), b.cols());
  for (int t = 0; t < rr.rank; ++t)
    for (int j = 0; j < b.cols(); ++j) x.at(rr.pivots[t], j) = rr.reduced.at(t, m.cols() + j);
  return x;
}

// Solve X·m = b; transposed wrapper around solve().
template <class F>
std::optional<Matrix<F>> solve_left(const Matrix<F>& m, const Matrix<F>& b) {
  auto xt = solve(m.transpose(), b.transpose());
  if (!xt) return std::nullopt;
  return xt->transpose();
}

// Full-row-rank matrix Q with Q·m = 0 presenting coordinates on coker(m),
// derived from the rref of the transpose.
template <class F>
Matrix<F> cokernel_projection(const Matrix<F>& m) {
  return kernel_basis(m.transpose()).transpose();
}

// The pivot columns of m itself: a deterministic basis of the column space.
template <class F>
Matrix<F> image_basis(const Matrix<F>& m) {
  return m.columns(rref(m).pivots);
}

// Does every column of a lie in the column space of b?
template <class F>
bool subspace_le(const Matrix<F>& a, const Matrix<F>& b) {
  return solve(b, a).has_value();
}

template <class F>
bool subspace_eq(const Matrix<F>& a, const Matrix<F>& b) {
  return subspace_le(a, b) && subspace_le(b, a);
}

// Indices of standard basis vectors extending the column space of w to the
// whole ambient space; deterministic (greedy over rref pivots of [w | I]).
template <class F>
std::vector<int> complement_slots(const Matrix<F>& w) {
  Matrix<F> aug = hstack(w, Matrix<F>::identity(w.field(), w.rows()));
  std::vector<int> slots;
  for (int p : rref(aug).pivots)
    if (p >= w.cols()) slots.push_back(p - w.cols());
  return slots;
}

template <class F>
bool is_invertible(const Matrix<F>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
  if (m.rows() != m.cols()) throw InvalidShape("inverse of non-square matrix");
  auto x = solve(m, Matrix<F>::identity(m.field(), m.rows()));
  if (!x || rank(m) != m.rows()) throw Error("matrix is singular");
  return *x;
}

}  // namespace extorth

#endif
