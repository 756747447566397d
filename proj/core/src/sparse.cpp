// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/sparse.hpp"

#include <algorithm>

#include "schnak/errors.hpp"

namespace schnak
{

Index CsrPattern::find(Index i, Index j) const
{
  const auto begin = col_idx.begin() + row_ptr[i];
  const auto end = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j)
  {
    return -1;
  }
  return static_cast<Index>(it - col_idx.begin());
}

CsrMatrix::CsrMatrix(std::shared_ptr<const CsrPattern> pattern)
  : pattern_(std::move(pattern)), values_(pattern_->col_idx.size(), 0.0)
{
}

CsrMatrix::CsrMatrix(std::shared_ptr<const CsrPattern> pattern, std::vector<double> values)
  : pattern_(std::move(pattern)), values_(std::move(values))
{
  if (static_cast<Index>(values_.size()) != pattern_->nnz())
  {
    throw InvalidArgument("CsrMatrix: value count does not match pattern");
  }
}

CsrMatrix CsrMatrix::FromTriplets(Index rows, Index cols,
                                  const std::vector<Eigen::Triplet<double, Index>> &triplets)
{
  Eigen::SparseMatrix<double, Eigen::RowMajor, Index> A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return FromEigen(A);
}

CsrMatrix CsrMatrix::FromEigen(const Eigen::SparseMatrix<double, Eigen::RowMajor, Index> &A_in)
{
  Eigen::SparseMatrix<double, Eigen::RowMajor, Index> A = A_in;
  A.makeCompressed();
  auto pattern = std::make_shared<CsrPattern>();
  pattern->rows = A.rows();
  pattern->cols = A.cols();
  pattern->row_ptr.assign(A.outerIndexPtr(), A.outerIndexPtr() + A.rows() + 1);
  pattern->col_idx.assign(A.innerIndexPtr(), A.innerIndexPtr() + A.nonZeros());
  std::vector<double> values(A.valuePtr(), A.valuePtr() + A.nonZeros());
  return CsrMatrix(std::move(pattern), std::move(values));
}

double CsrMatrix::coeff(Index i, Index j) const
{
  const Index k = pattern_->find(i, j);
  return k < 0 ? 0.0 : values_[k];
}

void CsrMatrix::Mult(const double *x, double *y) const
{
  const auto &rp = pattern_->row_ptr;
  const auto &ci = pattern_->col_idx;
  for (Index i = 0; i < pattern_->rows; ++i)
  {
    double s = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k)
    {
      s += values_[k] * x[ci[k]];
    }
    y[i] = s;
  }
}

void CsrMatrix::AddMult(const double *x, double *y, double a) const
{
  const auto &rp = pattern_->row_ptr;
  const auto &ci = pattern_->col_idx;
  for (Index i = 0; i < pattern_->rows; ++i)
  {
    double s = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k)
    {
      s += values_[k] * x[ci[k]];
    }
    y[i] += a * s;
  }
}

void CsrMatrix::MultTranspose(const double *x, double *y) const
{
  const auto &rp = pattern_->row_ptr;
  const auto &ci = pattern_->col_idx;
  std::fill(y, y + pattern_->cols, 0.0);
  for (Index i = 0; i < pattern_->rows; ++i)
  {
    for (Index k = rp[i]; k < rp[i + 1]; ++k)
    {
      y[ci[k]] += values_[k] * x[i];
    }
  }
}

Vector CsrMatrix::operator*(const Vector &x) const
{
  if (x.size() != cols())
  {
    throw InvalidArgument("CsrMatrix: vector length mismatch");
  }
  Vector y(rows());
  Mult(x.data(), y.data());
  return y;
}

Vector CsrMatrix::Diagonal() const
{
  Vector d = Vector::Zero(std::min(rows(), cols()));
  for (Index i = 0; i < d.size(); ++i)
  {
    d[i] = coeff(i, i);
  }
  return d;
}

bool CsrMatrix::SamePattern(const CsrMatrix &B) const
{
  if (pattern_ == B.pattern_)
  {
    return true;
  }
  return pattern_ && B.pattern_ && pattern_->rows == B.pattern_->rows &&
         pattern_->cols == B.pattern_->cols && pattern_->row_ptr == B.pattern_->row_ptr &&
         pattern_->col_idx == B.pattern_->col_idx;
}

CsrMatrix &CsrMatrix::Axpby(double a, double b, const CsrMatrix &B)
{
  if (!SamePattern(B))
  {
    throw InvalidArgument("CsrMatrix::Axpby: patterns differ");
  }
  for (std::size_t k = 0; k < values_.size(); ++k)
  {
    values_[k] = a * values_[k] + b * B.values_[k];
  }
  return *this;
}

CsrMatrix &CsrMatrix::Scale(double a)
{
  for (auto &v : values_)
  {
    v *= a;
  }
  return *this;
}

Eigen::MatrixXd CsrMatrix::ToDense() const
{
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows(), cols());
  const auto &rp = pattern_->row_ptr;
  const auto &ci = pattern_->col_idx;
  for (Index i = 0; i < rows(); ++i)
  {
    for (Index k = rp[i]; k < rp[i + 1]; ++k)
    {
      D(i, ci[k]) += values_[k];
    }
  }
  return D;
}

Eigen::SparseMatrix<double, Eigen::RowMajor, Index> CsrMatrix::ToEigen() const
{
  std::vector<Eigen::Triplet<double, Index>> t;
  t.reserve(values_.size());
  const auto &rp = pattern_->row_ptr;
  const auto &ci = pattern_->col_idx;
  for (Index i = 0; i < rows(); ++i)
  {
    for (Index k = rp[i]; k < rp[i + 1]; ++k)
    {
      t.emplace_back(i, ci[k], values_[k]);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor, Index> A(rows(), cols());
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

CsrMatrix Combine(double a, const CsrMatrix &A, double b, const CsrMatrix &B)
{
  CsrMatrix C = A;
  C.Axpby(a, b, B);
  return C;
}

CsrMatrix Combine(double a, const CsrMatrix &A, double b, const CsrMatrix &B, double c,
                  const CsrMatrix &C)
{
  CsrMatrix R = Combine(a, A, b, B);
  R.Axpby(1.0, c, C);
  return R;
}

}  // namespace schnak
