#pragma once

#include <Eigen/QR>

#include "rpt/permutation.hpp"
#include "rpt/types.hpp"

namespace rpt {

// n x m matrix B with orthonormal columns (B^T B = I_m to 1e-10).
// Only the factories below and adopt() can produce one.
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;

  // Wraps an existing matrix after checking orthonormality; throws
  // NumericalError if max|B^T B - I| >= tolerance.
  static OrthonormalBasis adopt(Matrix columns, double tolerance = 1e-10);

  const Matrix& columns() const noexcept { return columns_; }
  Index ambient_dim() const noexcept { return columns_.rows(); }
  Index basis_dim() const noexcept { return columns_.cols(); }

  // B^T x, and the orthogonal projection B B^T x.
  Vector coordinates(const Vector& x) const;
  Vector project(const Vector& x) const;

 private:
  explicit OrthonormalBasis(Matrix columns) : columns_(std::move(columns)) {}
  Matrix columns_;

  friend OrthonormalBasis make_basis_unchecked(Matrix columns);
};

void require_finite(const Matrix& m, const char* what);

// Relative pivot threshold used for every numerical rank decision:
// a pivot counts as nonzero iff |r_ii| > n * eps * |r_max|.
double rank_threshold(Index rows);

// Column-pivoted Householder QR of an n x q matrix with the library's rank
// threshold. Null-space columns are the trailing columns of the full Q.
class Factorization {
 public:
  explicit Factorization(const Matrix& m);

  Index rows() const noexcept { return rows_; }
  Index rank() const noexcept { return rank_; }
  Index null_dim() const noexcept { return rows_ - rank_; }

  // Q^T y (full length n).
  Vector rotate(const Vector& y) const;
  // Full n x n orthogonal factor.
  Matrix full_q() const;

 private:
  Index rows_;
  Index rank_;
  bool factored_ = false;
  Eigen::ColPivHouseholderQR<Matrix> qr_;
};

// m orthonormal columns B with B^T M = 0. Throws DimensionError if m exceeds
// n - rank(M). Columns are the last m columns of the Q factor of the
// column-pivoted QR of M; each is sign-normalized so that its first entry
// with magnitude above 1e-12 is positive.
OrthonormalBasis orthonormal_null_basis(const Matrix& m, Index target_dim);

// Basis A of span(V)^perp; [V A] is square orthogonal.
OrthonormalBasis complement_basis(const OrthonormalBasis& v);

// Orthonormal basis of the column space of X (rank(X) columns).
OrthonormalBasis column_space_basis(const Matrix& x);

// tr(H P) where H is the orthogonal projector onto span(X).
double hat_trace(const Matrix& x, const Permutation& sigma);
// Same, with a precomputed orthonormal basis of span(X).
double hat_trace(const OrthonormalBasis& range, const Permutation& sigma);

// min_c |y - M c|^2 via orthogonal projection; valid for rank-deficient M.
double least_squares_rss(const Matrix& m, const Vector& y);

}  // namespace rpt
