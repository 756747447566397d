// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_SPARSE_HPP
#define SCHNAK_SPARSE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace schnak
{

using Vector = Eigen::VectorXd;
using Index = std::int64_t;

// Row offsets and sorted column indices of a CSR matrix. Patterns are shared
// between every matrix assembled on the same mesh so that linear combinations
// reduce to operations on the value arrays.
struct CsrPattern
{
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr;
  std::vector<Index> col_idx;

  Index nnz() const { return static_cast<Index>(col_idx.size()); }
  // Position of (i, j) in the value array, or -1 when structurally absent.
  Index find(Index i, Index j) const;
};

class CsrMatrix
{
public:
  CsrMatrix() = default;
  explicit CsrMatrix(std::shared_ptr<const CsrPattern> pattern);
  CsrMatrix(std::shared_ptr<const CsrPattern> pattern, std::vector<double> values);

  // Builds a CSR matrix from (row, col, value) triplets; duplicates are summed.
  static CsrMatrix FromTriplets(Index rows, Index cols,
                                const std::vector<Eigen::Triplet<double, Index>> &triplets);
  static CsrMatrix FromEigen(const Eigen::SparseMatrix<double, Eigen::RowMajor, Index> &A);

  Index rows() const { return pattern_ ? pattern_->rows : 0; }
  Index cols() const { return pattern_ ? pattern_->cols : 0; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  const CsrPattern &pattern() const { return *pattern_; }
  const std::shared_ptr<const CsrPattern> &shared_pattern() const { return pattern_; }
  std::vector<double> &values() { return values_; }
  const std::vector<double> &values() const { return values_; }

  double coeff(Index i, Index j) const;

  // y = A x
  void Mult(const double *x, double *y) const;
  // y += a * A x
  void AddMult(const double *x, double *y, double a = 1.0) const;
  // y = A^T x
  void MultTranspose(const double *x, double *y) const;

  Vector operator*(const Vector &x) const;

  Vector Diagonal() const;

  // Scaled linear combination on a shared pattern: *this = a * *this + b * B.
  CsrMatrix &Axpby(double a, double b, const CsrMatrix &B);
  CsrMatrix &Scale(double a);

  bool SamePattern(const CsrMatrix &B) const;

  Eigen::MatrixXd ToDense() const;
  Eigen::SparseMatrix<double, Eigen::RowMajor, Index> ToEigen() const;

private:
  std::shared_ptr<const CsrPattern> pattern_;
  std::vector<double> values_;
};

// Returns a*A + b*B for matrices sharing a pattern.
CsrMatrix Combine(double a, const CsrMatrix &A, double b, const CsrMatrix &B);
CsrMatrix Combine(double a, const CsrMatrix &A, double b, const CsrMatrix &B, double c,
                  const CsrMatrix &C);

}  // namespace schnak

#endif  // SCHNAK_SPARSE_HPP
