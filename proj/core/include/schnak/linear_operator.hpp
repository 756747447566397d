// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_LINEAR_OPERATOR_HPP
#define SCHNAK_LINEAR_OPERATOR_HPP

#include <functional>
#include <utility>

#include "schnak/sparse.hpp"

namespace schnak
{

// Square matrix-free operator y = A x. The callable must fully overwrite y.
class LinearOperator
{
public:
  using ApplyFn = std::function<void(const Vector &, Vector &)>;

  LinearOperator() = default;
  LinearOperator(Index size, ApplyFn apply) : size_(size), apply_(std::move(apply)) {}

  static LinearOperator Identity(Index size)
  {
    return {size, [](const Vector &x, Vector &y) { y = x; }};
  }
  static LinearOperator FromMatrix(const CsrMatrix &A)
  {
    return {A.rows(), [&A](const Vector &x, Vector &y) {
              y.resize(A.rows());
              A.Mult(x.data(), y.data());
            }};
  }

  Index size() const { return size_; }
  void Apply(const Vector &x, Vector &y) const { apply_(x, y); }
  Vector operator()(const Vector &x) const
  {
    Vector y(size_);
    apply_(x, y);
    return y;
  }

private:
  Index size_ = 0;
  ApplyFn apply_;
};

}  // namespace schnak

#endif  // SCHNAK_LINEAR_OPERATOR_HPP
