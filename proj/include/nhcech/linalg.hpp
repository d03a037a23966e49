#pragma once

// Dense exact linear algebra over prime fields F_p.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/errors.hpp"

namespace nhcech {

using Scalar = std::uint32_t;
using FVector = std::vector<Scalar>;

class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p = 2) : p_(p) {
    if (!is_prime(p)) {
      throw Error(ErrorCode::NonPrimeModulus, std::to_string(p) + " is not prime");
    }
  }

  static constexpr bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  std::uint32_t modulus() const noexcept { return p_; }

  Scalar reduce(std::int64_t v) const noexcept {
    const auto p = static_cast<std::int64_t>(p_);
    const std::int64_t r = v % p;
    return static_cast<Scalar>(r < 0 ? r + p : r);
  }
  Scalar add(Scalar a, Scalar b) const noexcept {
    return static_cast<Scalar>((std::uint64_t{a} + b) % p_);
  }
  Scalar sub(Scalar a, Scalar b) const noexcept {
    return static_cast<Scalar>((std::uint64_t{a} + p_ - b) % p_);
  }
  Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const noexcept {
    return static_cast<Scalar>((std::uint64_t{a} * b) % p_);
  }
  Scalar pow(Scalar a, std::uint64_t e) const noexcept {
    std::uint64_t result = 1 % p_;
    std::uint64_t base = a % p_;
    while (e > 0) {
      if (e & 1U) result = result * base % p_;
      base = base * base % p_;
      e >>= 1U;
    }
    return static_cast<Scalar>(result);
  }
  /// Multiplicative inverse of a nonzero element.
  Scalar inv(Scalar a) const {
    if (a % p_ == 0) throw Error(ErrorCode::DimensionMismatch, "inverse of zero in F_p");
    return pow(a, p_ - 2);
  }
  /// (-1)^k as a field element.
  Scalar sign(std::size_t k) const noexcept { return (k % 2 == 0) ? 1 % p_ : neg(1 % p_); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

/// Row-major dense matrix with entries reduced mod p.
class FMatrix {
 public:
  FMatrix() = default;
  FMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FMatrix identity(PrimeField field, std::size_t n) {
    FMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  /// Builds a matrix whose columns are the given vectors (all of length `rows`).
  static FMatrix from_columns(PrimeField field, std::size_t rows,
                              const std::vector<FVector>& columns) {
    FMatrix m(field, rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) {
        throw Error(ErrorCode::DimensionMismatch, "column length differs from row count");
      }
      for (std::size_t r = 0; r < rows; ++r) m.set(r, c, columns[c][r]);
    }
    return m;
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Scalar v) { data_[r * cols_ + c] = v % field_.modulus(); }
  void add_to(std::size_t r, std::size_t c, Scalar v) {
    data_[r * cols_ + c] = field_.add(data_[r * cols_ + c], v % field_.modulus());
  }

  FVector column(std::size_t c) const {
    FVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }
  std::vector<FVector> columns() const {
    std::vector<FVector> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar v) { return v == 0; });
  }

  FMatrix transpose() const {
    FMatrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, (*this)(r, c));
    return t;
  }

  FVector apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "vector length != cols");
    FVector out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) {
        acc = (acc + std::uint64_t{(*this)(r, c)} * v[c]) % field_.modulus();
      }
      out[r] = static_cast<Scalar>(acc);
    }
    return out;
  }

  /// Copies `block` into this matrix with its top-left corner at (row, col).
  void set_block(std::size_t row, std::size_t col, const FMatrix& block) {
    for (std::size_t r = 0; r < block.rows(); ++r)
      for (std::size_t c = 0; c < block.cols(); ++c) set(row + r, col + c, block(r, c));
  }

  FMatrix scaled(Scalar s) const {
    FMatrix out = *this;
    for (auto& v : out.data_) v = field_.mul(v, s);
    return out;
  }

  friend FMatrix operator*(const FMatrix& a, const FMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
    FMatrix out(a.field_, a.rows_, b.cols_);
    const auto p = a.field_.modulus();
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          auto& slot = out.data_[i * out.cols_ + j];
          slot = static_cast<Scalar>((slot + std::uint64_t{aik} * b(k, j)) % p);
        }
      }
    }
    return out;
  }

  friend FMatrix operator+(const FMatrix& a, const FMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw Error(ErrorCode::DimensionMismatch, "matrix sum shape");
    }
    FMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
      out.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
    }
    return out;
  }

  friend FMatrix operator-(const FMatrix& a, const FMatrix& b) {
    return a + b.scaled(a.field_.neg(1 % a.field_.modulus()));
  }

  friend bool operator==(const FMatrix& a, const FMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  PrimeField field_{2};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// [A | B] for matrices with equal row counts.
inline FMatrix hstack(const FMatrix& a, const FMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack row counts");
  FMatrix out(a.field(), a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

inline FMatrix vstack(const FMatrix& a, const FMatrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack column counts");
  FMatrix out(a.field(), a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

struct RowEchelon {
  FMatrix reduced;                     // reduced row echelon form
  std::vector<std::size_t> pivot_cols; // pivot column of row i, for i < rank
};

/// Gauss-Jordan elimination to reduced row echelon form.
inline RowEchelon row_reduce(FMatrix a) {
  const PrimeField& f = a.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        const Scalar tmp = a(row, c);
        a.set(row, c, a(pivot, c));
        a.set(pivot, c, tmp);
      }
    }
    const Scalar scale = f.inv(a(row, col));
    for (std::size_t c = col; c < a.cols(); ++c) a.set(row, c, f.mul(a(row, c), scale));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      const Scalar factor = a(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < a.cols(); ++c) {
        a.set(r, c, f.sub(a(r, c), f.mul(factor, a(row, c))));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

struct RankNullity {
  std::size_t rank = 0;
  std::size_t nullity = 0;
  friend bool operator==(const RankNullity&, const RankNullity&) = default;
};

inline RankNullity rank_nullity(const FMatrix& a) {
  const std::size_t rank = row_reduce(a).pivot_cols.size();
  return {rank, a.cols() - rank};
}

inline std::size_t rank(const FMatrix& a) { return rank_nullity(a).rank; }

/// Basis of the null space, one basis vector per column of the result.
inline FMatrix kernel_basis(const FMatrix& a) {
  const RowEchelon ech = row_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  std::vector<FVector> basis;
  const PrimeField& f = a.field();
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    FVector v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r) {
      v[ech.pivot_cols[r]] = f.neg(ech.reduced(r, free));
    }
    basis.push_back(std::move(v));
  }
  return FMatrix::from_columns(f, a.cols(), basis);
}

/// Basis of the column space drawn from the columns of `a` itself.
inline FMatrix column_space_basis(const FMatrix& a) {
  const RowEchelon ech = row_reduce(a);
  std::vector<FVector> cols;
  for (auto c : ech.pivot_cols) cols.push_back(a.column(c));
  return FMatrix::from_columns(a.field(), a.rows(), cols);
}

/// Some x with A x = b, or nullopt when b is outside the column space.
inline std::optional<FVector> solve_linear(const FMatrix& a, std::span<const Scalar> b) {
  if (b.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "rhs length " + std::to_string(b.size()) + " != rows " + std::to_string(a.rows()));
  }
  FMatrix aug(a.field(), a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t r = 0; r < a.rows(); ++r) aug.set(r, a.cols(), b[r]);
  const RowEchelon ech = row_reduce(std::move(aug));
  if (!ech.pivot_cols.empty() && ech.pivot_cols.back() == a.cols()) return std::nullopt;
  FVector x(a.cols(), 0);
  for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r) {
    x[ech.pivot_cols[r]] = ech.reduced(r, a.cols());
  }
  return x;
}

/// dim span(Z) - dim span(B), where span(B) must lie inside span(Z).
inline std::size_t quotient_dim(const FMatrix& z, const FMatrix& b) {
  if (b.cols() == 0) return rank(z);
  if (z.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "ambient dimensions differ");
  const std::size_t rz = rank(z);
  if (rank(hstack(z, b)) != rz) {
    throw Error(ErrorCode::NotASubspace, "a vector of B lies outside span(Z)");
  }
  return rz - rank(b);
}

}  // namespace nhcech
