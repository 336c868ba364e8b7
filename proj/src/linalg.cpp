#include "rpt/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rpt/errors.hpp"

namespace rpt {

OrthonormalBasis make_basis_unchecked(Matrix columns) {
  return OrthonormalBasis(std::move(columns));
}

namespace {

void normalize_signs(Matrix& b) {
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < b.rows(); ++i) {
      if (std::abs(b(i, j)) > 1e-12) {
        if (b(i, j) < 0) b.col(j) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

OrthonormalBasis OrthonormalBasis::adopt(Matrix columns, double tolerance) {
  require_finite(columns, "basis");
  if (columns.cols() > columns.rows()) {
    throw DimensionError("basis has more columns than rows");
  }
  const Matrix gram = columns.transpose() * columns;
  const double err =
      (gram - Matrix::Identity(columns.cols(), columns.cols())).cwiseAbs().maxCoeff();
  if (columns.cols() > 0 && !(err < tolerance)) {
    throw NumericalError("columns are not orthonormal (max |B'B - I| = " +
                         std::to_string(err) + ")");
  }
  return OrthonormalBasis(std::move(columns));
}

Vector OrthonormalBasis::coordinates(const Vector& x) const {
  if (x.size() != ambient_dim()) throw DimensionError("coordinates: length mismatch");
  return columns_.transpose() * x;
}

Vector OrthonormalBasis::project(const Vector& x) const {
  return columns_ * coordinates(x);
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NonFiniteInput(std::string(what) + " contains NaN or infinite entries");
  }
}

double rank_threshold(Index rows) {
  return static_cast<double>(std::max<Index>(rows, 1)) *
         std::numeric_limits<double>::epsilon();
}

Factorization::Factorization(const Matrix& m) : rows_(m.rows()), rank_(0) {
  require_finite(m, "matrix");
  if (m.cols() > 0) {
    qr_.setThreshold(rank_threshold(m.rows()));
    qr_.compute(m);
    rank_ = qr_.rank();
    factored_ = true;
  }
}

Vector Factorization::rotate(const Vector& y) const {
  if (y.size() != rows_) throw DimensionError("rotate: length mismatch");
  if (!factored_) return y;
  return qr_.householderQ().adjoint() * y;
}

Matrix Factorization::full_q() const {
  if (!factored_) return Matrix::Identity(rows_, rows_);
  Matrix q = qr_.householderQ();
  return q;
}

OrthonormalBasis orthonormal_null_basis(const Matrix& m, Index target_dim) {
  if (m.rows() < 1) throw DimensionError("null basis: matrix has no rows");
  if (target_dim < 0) throw DimensionError("null basis: negative target dimension");
  const Factorization f(m);
  if (target_dim > f.null_dim()) {
    throw DimensionError("null basis: requested " + std::to_string(target_dim) +
                         " columns but the null space has dimension " +
                         std::to_string(f.null_dim()));
  }
  Matrix b = f.full_q().rightCols(target_dim);
  normalize_signs(b);
  return make_basis_unchecked(std::move(b));
}

OrthonormalBasis complement_basis(const OrthonormalBasis& v) {
  const Index n = v.ambient_dim();
  if (v.basis_dim() == 0) {
    return make_basis_unchecked(Matrix::Identity(n, n));
  }
  return orthonormal_null_basis(v.columns(), n - v.basis_dim());
}

OrthonormalBasis column_space_basis(const Matrix& x) {
  const Factorization f(x);
  Matrix b = f.full_q().leftCols(f.rank());
  normalize_signs(b);
  return make_basis_unchecked(std::move(b));
}

double hat_trace(const OrthonormalBasis& range, const Permutation& sigma) {
  if (range.ambient_dim() != sigma.size()) {
    throw DimensionError("hat_trace: design has " + std::to_string(range.ambient_dim()) +
                         " rows but permutation has size " + std::to_string(sigma.size()));
  }
  // (H P)[v, v] = H[v, sigma^{-1}(v)]; summing over v is the same as summing
  // H[sigma(u), u] over u.
  const Matrix& q = range.columns();
  double trace = 0.0;
  for (Index u = 0; u < sigma.size(); ++u) trace += q.row(sigma[u]).dot(q.row(u));
  return trace;
}

double hat_trace(const Matrix& x, const Permutation& sigma) {
  if (x.rows() != sigma.size()) {
    throw DimensionError("hat_trace: design has " + std::to_string(x.rows()) +
                         " rows but permutation has size " + std::to_string(sigma.size()));
  }
  return hat_trace(column_space_basis(x), sigma);
}

double least_squares_rss(const Matrix& m, const Vector& y) {
  require_finite(y, "response");
  if (m.rows() != y.size()) throw DimensionError("least_squares_rss: length mismatch");
  const Factorization f(m);
  return f.rotate(y).tail(f.null_dim()).squaredNorm();
}

}  // namespace rpt
